// Orthonormal transforms used by the synthesis-type secondary objectives:
// the full multilevel 2D Haar decomposition and the trivial identity.
//
// Both expose forward/inverse maps with H^T H = I, so the inverse is the
// adjoint. Transform-domain layout at each level: low-pass in the leading
// half, detail in the trailing half, recursing on the top-left block.

#ifndef BILEVEL_TRANSFORMS_HPP
#define BILEVEL_TRANSFORMS_HPP

#include <cmath>
#include <stdexcept>

#include "bilevel/types.hpp"

namespace bilevel {

/// Full multilevel orthonormal 2D Haar transform on a square image of
/// power-of-two side, flattened with x fastest (pixel (ix,iy) at iy*side+ix).
template <class Scalar>
class HaarTransform2D {
 public:
  explicit HaarTransform2D(Index side) : side_(side) {
    if (!is_power_of_two(side))
      throw std::invalid_argument("HaarTransform2D: side must be a power of two");
  }

  Index side() const { return side_; }
  Index size() const { return side_ * side_; }

  Vec<Scalar> forward(const Vec<Scalar>& x) const {
    check(x);
    Vec<Scalar> a = x;
    for (Index s = side_; s > 1; s /= 2) {
      pass_rows_fwd(a, s);
      pass_cols_fwd(a, s);
    }
    return a;
  }

  Vec<Scalar> inverse(const Vec<Scalar>& w) const {
    check(w);
    Vec<Scalar> a = w;
    for (Index s = 2; s <= side_; s *= 2) {
      pass_cols_inv(a, s);
      pass_rows_inv(a, s);
    }
    return a;
  }

 private:
  static constexpr Scalar kInvSqrt2 = Scalar(0.70710678118654752440084436210485L);

  void check(const Vec<Scalar>& v) const {
    if (v.size() != size())
      throw std::invalid_argument("HaarTransform2D: vector length must be side^2");
  }

  Scalar& at(Vec<Scalar>& a, Index ix, Index iy) const { return a[iy * side_ + ix]; }

  void pass_rows_fwd(Vec<Scalar>& a, Index s) const {
    Vec<Scalar> tmp(s);
    for (Index iy = 0; iy < s; ++iy) {
      for (Index i = 0; i < s / 2; ++i) {
        const Scalar e = at(a, 2 * i, iy), o = at(a, 2 * i + 1, iy);
        tmp[i] = (e + o) * kInvSqrt2;
        tmp[s / 2 + i] = (e - o) * kInvSqrt2;
      }
      for (Index i = 0; i < s; ++i) at(a, i, iy) = tmp[i];
    }
  }

  void pass_cols_fwd(Vec<Scalar>& a, Index s) const {
    Vec<Scalar> tmp(s);
    for (Index ix = 0; ix < s; ++ix) {
      for (Index i = 0; i < s / 2; ++i) {
        const Scalar e = at(a, ix, 2 * i), o = at(a, ix, 2 * i + 1);
        tmp[i] = (e + o) * kInvSqrt2;
        tmp[s / 2 + i] = (e - o) * kInvSqrt2;
      }
      for (Index i = 0; i < s; ++i) at(a, ix, i) = tmp[i];
    }
  }

  void pass_rows_inv(Vec<Scalar>& a, Index s) const {
    Vec<Scalar> tmp(s);
    for (Index iy = 0; iy < s; ++iy) {
      for (Index i = 0; i < s / 2; ++i) {
        const Scalar lo = at(a, i, iy), hi = at(a, s / 2 + i, iy);
        tmp[2 * i] = (lo + hi) * kInvSqrt2;
        tmp[2 * i + 1] = (lo - hi) * kInvSqrt2;
      }
      for (Index i = 0; i < s; ++i) at(a, i, iy) = tmp[i];
    }
  }

  void pass_cols_inv(Vec<Scalar>& a, Index s) const {
    Vec<Scalar> tmp(s);
    for (Index ix = 0; ix < s; ++ix) {
      for (Index i = 0; i < s / 2; ++i) {
        const Scalar lo = at(a, ix, i), hi = at(a, ix, s / 2 + i);
        tmp[2 * i] = (lo + hi) * kInvSqrt2;
        tmp[2 * i + 1] = (lo - hi) * kInvSqrt2;
      }
      for (Index i = 0; i < s; ++i) at(a, ix, i) = tmp[i];
    }
  }

  Index side_;
};

/// H = I. Lets the synthesis-domain machinery (norms, proximal maps) act
/// directly on pixel values.
template <class Scalar>
class IdentityTransform {
 public:
  Vec<Scalar> forward(const Vec<Scalar>& x) const { return x; }
  Vec<Scalar> inverse(const Vec<Scalar>& w) const { return w; }
};

}  // namespace bilevel

#endif
