// File formats for images and sinograms: exact float64 round-trip containers
// (BIMG1, BSIN1), a 16-bit PGM writer for viewing, and parse errors that
// carry the byte offset of the fault.

#ifndef BILEVEL_TOMO_IO_HPP
#define BILEVEL_TOMO_IO_HPP

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bilevel/tomo/geometry.hpp"
#include "bilevel/types.hpp"

namespace bilevel::tomo {

static_assert(std::endian::native == std::endian::little,
              "file formats store float64 little-endian; big-endian hosts need a swap");

/// Malformed file contents; the message names the fault and the byte offset
/// where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t byte_offset)
      : std::runtime_error(message + " (byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

namespace detail {

inline std::string load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return buf;
}

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

/// Returns the line starting at `pos` (without the newline) and advances
/// `pos` past it.
inline std::string_view take_line(std::string_view buf, std::size_t& pos) {
  const std::size_t nl = buf.find('\n', pos);
  if (nl == std::string_view::npos)
    throw ParseError("unterminated header line", pos);
  std::string_view line = buf.substr(pos, nl - pos);
  pos = nl + 1;
  return line;
}

/// Parses one space-separated numeric field at `pos` within `line`;
/// `line_start` is the line's offset in the file, used for error reporting.
template <class Number>
Number take_field(std::string_view line, std::size_t& pos, std::size_t line_start,
                  const char* name) {
  if (pos > 0) {
    if (pos >= line.size() || line[pos] != ' ')
      throw ParseError(std::string("expected space before field ") + name,
                       line_start + pos);
    ++pos;
  }
  Number value{};
  const auto result = std::from_chars(line.data() + pos, line.data() + line.size(), value);
  if (result.ec != std::errc())
    throw ParseError(std::string("cannot parse field ") + name, line_start + pos);
  pos = static_cast<std::size_t>(result.ptr - line.data());
  return value;
}

inline void expect_line_end(std::string_view line, std::size_t pos,
                            std::size_t line_start) {
  if (pos != line.size())
    throw ParseError("trailing characters after header fields", line_start + pos);
}

inline Vec<double> take_payload(std::string_view buf, std::size_t pos, Index count) {
  const std::size_t expected = static_cast<std::size_t>(count) * sizeof(double);
  const std::size_t actual = buf.size() - pos;
  if (actual != expected)
    throw ParseError("payload length mismatch: expected " + std::to_string(expected) +
                         " bytes (" + std::to_string(count) + " doubles), found " +
                         std::to_string(actual) + " bytes",
                     pos);
  Vec<double> data(count);
  std::memcpy(data.data(), buf.data() + pos, expected);
  return data;
}

inline void check_magic(std::string_view buf, std::string_view magic) {
  if (buf.empty()) throw ParseError("empty file", 0);
  std::size_t pos = 0;
  const std::string_view line = take_line(buf, pos);
  if (line != magic)
    throw ParseError("bad magic, expected " + std::string(magic), 0);
}

/// Shortest-exact decimal for a double (17 significant digits round-trip).
inline std::string format_double(double v) {
  char tmp[64];
  std::snprintf(tmp, sizeof(tmp), "%.17g", v);
  return tmp;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// BIMG1: "BIMG1\n<side>\n" followed by side^2 float64 little-endian values in
// flat image order (iy * side + ix).

inline void write_image(const Image<double>& img, const std::string& path) {
  auto out = detail::open_for_write(path);
  out << "BIMG1\n" << img.side << "\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed for " + path);
}

inline Image<double> read_image(const std::string& path) {
  const std::string buf = detail::load_file(path);
  detail::check_magic(buf, "BIMG1");
  std::size_t pos = 6;  // past "BIMG1\n"
  const std::size_t line_start = pos;
  const std::string_view line = detail::take_line(buf, pos);
  std::size_t fpos = 0;
  const auto side = detail::take_field<long long>(line, fpos, line_start, "side");
  detail::expect_line_end(line, fpos, line_start);
  if (side < 1 || side > 100000)
    throw ParseError("side out of range: " + std::to_string(side), line_start);
  const Index n = static_cast<Index>(side);
  return Image<double>(n, detail::take_payload(buf, pos, n * n));
}

// ---------------------------------------------------------------------------
// BSIN1: "BSIN1\n<n_angles> <n_det> <angle_min> <angle_max>\n" followed by
// n_angles * n_det float64 little-endian values, row-major by angle.

inline void write_sinogram(const Sinogram<double>& sino, const std::string& path) {
  auto out = detail::open_for_write(path);
  out << "BSIN1\n"
      << sino.geom.n_angles << " " << sino.geom.n_det << " "
      << detail::format_double(sino.geom.angle_min) << " "
      << detail::format_double(sino.geom.angle_max) << "\n";
  out.write(reinterpret_cast<const char*>(sino.data.data()),
            static_cast<std::streamsize>(sino.data.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed for " + path);
}

inline Sinogram<double> read_sinogram(const std::string& path) {
  const std::string buf = detail::load_file(path);
  detail::check_magic(buf, "BSIN1");
  std::size_t pos = 6;  // past "BSIN1\n"
  const std::size_t line_start = pos;
  const std::string_view line = detail::take_line(buf, pos);
  std::size_t fpos = 0;
  const auto n_angles = detail::take_field<long long>(line, fpos, line_start, "n_angles");
  const auto n_det = detail::take_field<long long>(line, fpos, line_start, "n_det");
  const auto angle_min = detail::take_field<double>(line, fpos, line_start, "angle_min");
  const auto angle_max = detail::take_field<double>(line, fpos, line_start, "angle_max");
  detail::expect_line_end(line, fpos, line_start);
  if (n_angles < 1 || n_angles > 1000000)
    throw ParseError("n_angles out of range: " + std::to_string(n_angles), line_start);
  if (n_det < 1 || n_det > 1000000)
    throw ParseError("n_det out of range: " + std::to_string(n_det), line_start);
  if (!(angle_max > angle_min))
    throw ParseError("angle_max must exceed angle_min", line_start);
  const Geometry geom(static_cast<Index>(n_angles), static_cast<Index>(n_det),
                      angle_min, angle_max);
  return Sinogram<double>(geom, detail::take_payload(buf, pos, geom.rays()));
}

// ---------------------------------------------------------------------------
// PGM (P5, 16-bit) viewing export: values are scaled so the image maximum
// maps to 65535, negatives clamp to 0. Rows are written top-down (iy = side-1
// first) so the y axis points up in viewers.

inline void write_pgm16(const Image<double>& img, const std::string& path) {
  auto out = detail::open_for_write(path);
  out << "P5\n" << img.side << " " << img.side << "\n65535\n";
  const double max = img.data.size() > 0 ? img.data.maxCoeff() : 0.0;
  const double scale = max > 0.0 ? 65535.0 / max : 0.0;
  for (Index iy = img.side - 1; iy >= 0; --iy) {
    for (Index ix = 0; ix < img.side; ++ix) {
      double v = std::round(img.data[iy * img.side + ix] * scale);
      if (v < 0.0) v = 0.0;
      if (v > 65535.0) v = 65535.0;
      const auto sample = static_cast<std::uint16_t>(v);
      const char bytes[2] = {static_cast<char>(sample >> 8),
                             static_cast<char>(sample & 0xff)};
      out.write(bytes, 2);
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace bilevel::tomo

#endif
