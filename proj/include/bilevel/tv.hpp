// Isotropic total variation with periodic boundary conditions on a square
// image, plus a subgradient selection.
//
//   tv(x) = sum_{i,j} sqrt((x_{i,j} - x_{i-1,j})^2 + (x_{i,j} - x_{i,j-1})^2)
//
// with indices wrapping around the edges. Pixels are stored flat with the
// first index fastest. A term contributes nothing to the subgradient where
// both differences vanish (the zero element of the subdifferential there).

#ifndef BILEVEL_TV_HPP
#define BILEVEL_TV_HPP

#include <cmath>
#include <stdexcept>

#include "bilevel/types.hpp"

namespace bilevel {

namespace detail {
template <class Scalar>
void tv_check(const Vec<Scalar>& x, Index side) {
  if (side < 2) throw std::invalid_argument("tv: side must be at least 2");
  if (x.size() != side * side)
    throw std::invalid_argument("tv: vector length must equal side^2");
}
}  // namespace detail

template <class Scalar>
Scalar tv_value(const Vec<Scalar>& x, Index side) {
  detail::tv_check(x, side);
  Scalar sum = 0;
  for (Index iy = 0; iy < side; ++iy) {
    const Index iym = (iy + side - 1) % side;
    for (Index ix = 0; ix < side; ++ix) {
      const Index ixm = (ix + side - 1) % side;
      const Scalar c = x[iy * side + ix];
      const Scalar a = c - x[iy * side + ixm];
      const Scalar b = c - x[iym * side + ix];
      sum += std::sqrt(a * a + b * b);
    }
  }
  return sum;
}

template <class Scalar>
Vec<Scalar> tv_subgrad(const Vec<Scalar>& x, Index side) {
  detail::tv_check(x, side);
  Vec<Scalar> g = Vec<Scalar>::Zero(x.size());
  for (Index iy = 0; iy < side; ++iy) {
    const Index iym = (iy + side - 1) % side;
    for (Index ix = 0; ix < side; ++ix) {
      const Index ixm = (ix + side - 1) % side;
      const Scalar c = x[iy * side + ix];
      const Scalar a = c - x[iy * side + ixm];
      const Scalar b = c - x[iym * side + ix];
      const Scalar t = std::sqrt(a * a + b * b);
      if (t > Scalar(0)) {
        g[iy * side + ix] += (a + b) / t;
        g[iy * side + ixm] -= a / t;
        g[iym * side + ix] -= b / t;
      }
    }
  }
  return g;
}

/// Global subgradient bound 2*sqrt(2n): the subgradient is the adjoint of the
/// periodic difference operator (spectral norm 2*sqrt(2)) applied to n
/// unit-or-zero direction pairs.
template <class Scalar>
Scalar tv_subgrad_bound(Index n) {
  return Scalar(2) * std::sqrt(Scalar(2) * Scalar(n));
}

}  // namespace bilevel

#endif
