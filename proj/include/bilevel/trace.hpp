// Per-iteration solver trace: objective values, sub-step movement norms,
// stepsizes, and best-so-far bookkeeping. Serializes to CSV with full
// double precision.

#ifndef BILEVEL_TRACE_HPP
#define BILEVEL_TRACE_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilevel {

template <class Scalar>
struct TraceRow {
  long k = 0;
  Scalar f0 = 0;         ///< f0(x_k)
  Scalar f1 = 0;         ///< f1(x_k)
  Scalar step0_norm = 0; ///< ||x_k - x_{k+1/3}||
  Scalar step1_norm = 0; ///< ||x_k - x_{k+2/3}||
  Scalar lambda = 0;     ///< primary stepsize used at iteration k
  Scalar mu = 0;         ///< secondary stepsize used at iteration k
};

/// Append-only record of a solver run, one row per iteration performed.
template <class Scalar>
class SolverTrace {
 public:
  void push(TraceRow<Scalar> row) {
    const Scalar prev = rows_.empty() ? std::numeric_limits<Scalar>::infinity()
                                      : phi0_.back();
    rows_.push_back(row);
    phi0_.push_back(std::min(prev, row.f0));
  }

  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }
  const TraceRow<Scalar>& operator[](std::size_t i) const { return rows_[i]; }
  const std::vector<TraceRow<Scalar>>& rows() const { return rows_; }

  /// Best f0 value among iterations 0..k (nonincreasing in k).
  Scalar phi0(std::size_t k) const { return phi0_.at(k); }

  /// Best f1 value among iterations k0..k.
  Scalar phi1(std::size_t k0, std::size_t k) const {
    if (k0 > k || k >= rows_.size())
      throw std::out_of_range("SolverTrace::phi1: bad window");
    Scalar best = rows_[k0].f1;
    for (std::size_t i = k0 + 1; i <= k; ++i) best = std::min(best, rows_[i].f1);
    return best;
  }

  /// Index attaining phi1(k0, k); earliest on ties.
  std::size_t argmin_f1(std::size_t k0, std::size_t k) const {
    if (k0 > k || k >= rows_.size())
      throw std::out_of_range("SolverTrace::argmin_f1: bad window");
    std::size_t arg = k0;
    for (std::size_t i = k0 + 1; i <= k; ++i)
      if (rows_[i].f1 < rows_[arg].f1) arg = i;
    return arg;
  }

 private:
  std::vector<TraceRow<Scalar>> rows_;
  std::vector<Scalar> phi0_;
};

/// One value formatted with 17 significant digits (round-trip safe for double).
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class Scalar>
void write_csv(const SolverTrace<Scalar>& trace, std::ostream& out) {
  out << "k,f0,f1,step0_norm,step1_norm,lambda,mu\n";
  for (const auto& r : trace.rows()) {
    out << r.k << ',' << format_g17(static_cast<double>(r.f0)) << ','
        << format_g17(static_cast<double>(r.f1)) << ','
        << format_g17(static_cast<double>(r.step0_norm)) << ','
        << format_g17(static_cast<double>(r.step1_norm)) << ','
        << format_g17(static_cast<double>(r.lambda)) << ','
        << format_g17(static_cast<double>(r.mu)) << '\n';
  }
}

template <class Scalar>
void write_csv(const SolverTrace<Scalar>& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  write_csv(trace, out);
}

}  // namespace bilevel

#endif
