// Additive-ellipse phantoms with pixel-center rasterization, including the
// standard Shepp-Logan head section.

#ifndef BILEVEL_TOMO_PHANTOM_HPP
#define BILEVEL_TOMO_PHANTOM_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bilevel/types.hpp"

namespace bilevel::tomo {

/// One ellipse of an additive phantom: `value` is added to every pixel whose
/// center lies inside. `theta` rotates the ellipse counterclockwise (radians).
struct Ellipse {
  double x0 = 0.0;
  double y0 = 0.0;
  double a = 0.0;
  double b = 0.0;
  double theta = 0.0;
  double value = 0.0;

  bool contains(double x, double y) const {
    const double ct = std::cos(theta), st = std::sin(theta);
    const double xr = (x - x0) * ct + (y - y0) * st;
    const double yr = -(x - x0) * st + (y - y0) * ct;
    return (xr / a) * (xr / a) + (yr / b) * (yr / b) <= 1.0;
  }
};

using Phantom = std::vector<Ellipse>;

/// The classic ten-ellipse Shepp-Logan list on [-1, 1]^2: outer skull ellipse
/// with semi-axes 0.69 x 0.92 at the origin, inner tissue ellipse 0.6624 x
/// 0.874 at (0, -0.0184), two rotated lateral cavities, and six small
/// features. Intensities are additive, and every resulting region value is
/// nonnegative.
inline Phantom shepp_logan_phantom() {
  const double deg = 3.14159265358979323846 / 180.0;
  return {
      {0.0, 0.0, 0.69, 0.92, 0.0, 2.0},
      {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.98},
      {0.22, 0.0, 0.11, 0.31, -18.0 * deg, -0.02},
      {-0.22, 0.0, 0.16, 0.41, 18.0 * deg, -0.02},
      {0.0, 0.35, 0.21, 0.25, 0.0, 0.01},
      {0.0, 0.1, 0.046, 0.046, 0.0, 0.01},
      {0.0, -0.1, 0.046, 0.046, 0.0, 0.01},
      {-0.08, -0.605, 0.046, 0.023, 0.0, 0.01},
      {0.0, -0.605, 0.023, 0.023, 0.0, 0.01},
      {0.06, -0.605, 0.023, 0.046, 0.0, 0.01},
  };
}

/// Rasterizes an additive phantom on a side x side grid over [-1, 1]^2 by
/// sampling each pixel at its center. Pixels outside every ellipse are zero.
template <class Scalar = double>
Image<Scalar> rasterize(const Phantom& phantom, Index side) {
  if (side < 2) throw std::invalid_argument("rasterize: side must be >= 2");
  const double h = 2.0 / static_cast<double>(side);
  Image<Scalar> img = Image<Scalar>::zero(side);
  for (Index iy = 0; iy < side; ++iy) {
    const double y = -1.0 + (static_cast<double>(iy) + 0.5) * h;
    for (Index ix = 0; ix < side; ++ix) {
      const double x = -1.0 + (static_cast<double>(ix) + 0.5) * h;
      double v = 0.0;
      for (const Ellipse& e : phantom)
        if (e.contains(x, y)) v += e.value;
      img.data[iy * side + ix] = static_cast<Scalar>(v);
    }
  }
  return img;
}

/// Shepp-Logan phantom rasterized at pixel centers.
template <class Scalar = double>
Image<Scalar> shepp_logan(Index side) {
  return rasterize<Scalar>(shepp_logan_phantom(), side);
}

}  // namespace bilevel::tomo

#endif
