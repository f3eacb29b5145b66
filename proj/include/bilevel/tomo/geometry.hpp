// Parallel-beam acquisition geometry over the square [-1, 1]^2 and the
// sinogram container it indexes.

#ifndef BILEVEL_TOMO_GEOMETRY_HPP
#define BILEVEL_TOMO_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>

#include "bilevel/types.hpp"

namespace bilevel::tomo {

/// View angles are evenly spaced over the half-open range
/// [angle_min, angle_max): theta_i = angle_min + i * (angle_max - angle_min)
/// / n_angles. Detector offsets are cell-centered in [-1, 1]:
/// t_j = -1 + (j + 1/2) * 2 / n_det. Ray (i, j) passes through
/// t_j * (cos theta_i, sin theta_i) with direction
/// (-sin theta_i, cos theta_i), and is stored at index i * n_det + j.
struct Geometry {
  Index n_angles = 0;
  Index n_det = 0;
  double angle_min = 0.0;
  double angle_max = 3.14159265358979323846;

  Geometry() = default;
  Geometry(Index n_angles_, Index n_det_, double angle_min_ = 0.0,
           double angle_max_ = 3.14159265358979323846)
      : n_angles(n_angles_), n_det(n_det_), angle_min(angle_min_), angle_max(angle_max_) {
    validate();
  }

  void validate() const {
    if (n_angles < 1) throw std::invalid_argument("Geometry: n_angles must be >= 1");
    if (n_det < 1) throw std::invalid_argument("Geometry: n_det must be >= 1");
    if (!(std::isfinite(angle_min) && std::isfinite(angle_max)))
      throw std::invalid_argument("Geometry: angle range must be finite");
    if (!(angle_max > angle_min))
      throw std::invalid_argument("Geometry: angle_max must exceed angle_min");
  }

  Index rays() const { return n_angles * n_det; }

  double angle(Index i) const {
    return angle_min + static_cast<double>(i) * (angle_max - angle_min) /
                           static_cast<double>(n_angles);
  }

  double offset(Index j) const {
    return -1.0 + (static_cast<double>(j) + 0.5) * 2.0 / static_cast<double>(n_det);
  }
};

inline bool operator==(const Geometry& a, const Geometry& b) {
  return a.n_angles == b.n_angles && a.n_det == b.n_det &&
         a.angle_min == b.angle_min && a.angle_max == b.angle_max;
}

/// Measured or simulated line integrals, one entry per ray, row-major by
/// angle: data[i * n_det + j] belongs to angle i, detector cell j.
template <class Scalar>
struct Sinogram {
  Geometry geom;
  Vec<Scalar> data;

  Sinogram() = default;
  Sinogram(Geometry geom_, Vec<Scalar> data_)
      : geom(geom_), data(std::move(data_)) {
    geom.validate();
    if (data.size() != geom.rays())
      throw std::invalid_argument("Sinogram: data length must equal n_angles * n_det");
  }

  static Sinogram zero(const Geometry& g) {
    return Sinogram(g, Vec<Scalar>::Zero(g.rays()));
  }
};

}  // namespace bilevel::tomo

#endif
