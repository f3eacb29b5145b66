// Exact chord-length parallel-beam projector on the pixel grid, assembled as
// a sparse matrix so the same weights serve the forward model, its adjoint,
// and the per-ray norms used by incremental subgradient bounds.

#ifndef BILEVEL_TOMO_SIDDON_HPP
#define BILEVEL_TOMO_SIDDON_HPP

#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bilevel/tomo/geometry.hpp"
#include "bilevel/types.hpp"

namespace bilevel::tomo {

/// Assembles the ray-driven projector matrix for `geom` on a side x side
/// pixel grid covering [-1, 1]^2. Entry (r, p) is the exact length of the
/// intersection of ray r with pixel p, so the matrix is dense-row sparse with
/// O(side) entries per ray. Rows follow the geometry's ray order; columns use
/// the flat image index iy * side + ix. Assembly is strictly sequential, so
/// the result is bitwise identical across runs.
template <class Scalar = double>
Eigen::SparseMatrix<Scalar, Eigen::RowMajor> radon_matrix(const Geometry& geom,
                                                          Index side) {
  geom.validate();
  if (side < 1) throw std::invalid_argument("radon_matrix: side must be >= 1");

  const double h = 2.0 / static_cast<double>(side);
  const double kParallel = 1e-14;  // direction component treated as axis-parallel
  const double kMinChord = 1e-15;  // drop numerically empty segments

  std::vector<Eigen::Triplet<Scalar>> entries;
  entries.reserve(static_cast<std::size_t>(geom.rays()) *
                  static_cast<std::size_t>(2 * side));
  std::vector<double> taus;

  for (Index ia = 0; ia < geom.n_angles; ++ia) {
    const double theta = geom.angle(ia);
    const double c = std::cos(theta), s = std::sin(theta);
    const double dx = -s, dy = c;
    for (Index jd = 0; jd < geom.n_det; ++jd) {
      const double t = geom.offset(jd);
      const double px = t * c, py = t * s;

      // Clip the ray parameter to the support square, one slab per axis.
      double tau_min = -std::numeric_limits<double>::infinity();
      double tau_max = std::numeric_limits<double>::infinity();
      bool hits = true;
      const double pos[2] = {px, py}, dir[2] = {dx, dy};
      for (int axis = 0; axis < 2; ++axis) {
        if (std::abs(dir[axis]) < kParallel) {
          if (pos[axis] < -1.0 || pos[axis] > 1.0) {
            hits = false;
            break;
          }
        } else {
          const double t0 = (-1.0 - pos[axis]) / dir[axis];
          const double t1 = (1.0 - pos[axis]) / dir[axis];
          tau_min = std::max(tau_min, std::min(t0, t1));
          tau_max = std::min(tau_max, std::max(t0, t1));
        }
      }
      if (!hits || !(tau_min < tau_max)) continue;

      // Parameters of every grid-line crossing inside the clip window.
      taus.clear();
      taus.push_back(tau_min);
      taus.push_back(tau_max);
      for (int axis = 0; axis < 2; ++axis) {
        if (std::abs(dir[axis]) < kParallel) continue;
        for (Index k = 0; k <= side; ++k) {
          const double ta = (-1.0 + static_cast<double>(k) * h - pos[axis]) / dir[axis];
          if (ta > tau_min && ta < tau_max) taus.push_back(ta);
        }
      }
      std::sort(taus.begin(), taus.end());

      const Index ray = ia * geom.n_det + jd;
      Index last_pixel = -1;
      std::size_t last_entry = 0;
      for (std::size_t seg = 0; seg + 1 < taus.size(); ++seg) {
        const double len = taus[seg + 1] - taus[seg];
        if (len <= kMinChord) continue;
        const double mid = 0.5 * (taus[seg] + taus[seg + 1]);
        const Index ix = static_cast<Index>(std::floor((px + mid * dx + 1.0) / h));
        const Index iy = static_cast<Index>(std::floor((py + mid * dy + 1.0) / h));
        if (ix < 0 || ix >= side || iy < 0 || iy >= side) continue;
        const Index pixel = iy * side + ix;
        if (pixel == last_pixel) {
          // Degenerate corner crossing split one chord; merge the halves.
          auto& prev = entries[last_entry];
          prev = Eigen::Triplet<Scalar>(prev.row(), prev.col(),
                                        prev.value() + static_cast<Scalar>(len));
        } else {
          last_entry = entries.size();
          entries.emplace_back(static_cast<int>(ray), static_cast<int>(pixel),
                               static_cast<Scalar>(len));
          last_pixel = pixel;
        }
      }
    }
  }

  Eigen::SparseMatrix<Scalar, Eigen::RowMajor> R(geom.rays(), side * side);
  R.setFromTriplets(entries.begin(), entries.end());
  return R;
}

/// Line-integral projection of an image. Convenience wrapper that assembles
/// the weights on every call; hold the matrix from radon_matrix when applying
/// it repeatedly.
template <class Scalar>
Sinogram<Scalar> radon_apply(const Geometry& geom, const Image<Scalar>& x) {
  const auto R = radon_matrix<Scalar>(geom, x.side);
  return Sinogram<Scalar>(geom, R * x.data);
}

/// Exact transpose of radon_apply with the same weights (backprojection).
template <class Scalar>
Image<Scalar> radon_adjoint(const Geometry& geom, const Sinogram<Scalar>& y,
                            Index side) {
  if (y.data.size() != geom.rays())
    throw std::invalid_argument("radon_adjoint: sinogram does not match geometry");
  const auto R = radon_matrix<Scalar>(geom, side);
  return Image<Scalar>(side, R.transpose() * y.data);
}

}  // namespace bilevel::tomo

#endif
