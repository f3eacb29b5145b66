// Componentwise soft-thresholding, the proximal map of mu*||.||_1.

#ifndef BILEVEL_SOFT_THRESHOLD_HPP
#define BILEVEL_SOFT_THRESHOLD_HPP

#include <cmath>

#include "bilevel/types.hpp"

namespace bilevel {

/// Shrinks each component toward zero by mu; exact zero on [-mu, mu].
/// Returns an Eigen expression, so it composes without temporaries.
template <class Derived>
auto soft_threshold(typename Derived::Scalar mu, const Eigen::MatrixBase<Derived>& w) {
  using S = typename Derived::Scalar;
  return w.unaryExpr([mu](S v) {
    const S a = std::abs(v) - mu;
    return a > S(0) ? (v > S(0) ? a : -a) : S(0);
  });
}

}  // namespace bilevel

#endif
