// Data-fidelity objectives built on a linear residual r = Rx - b: plain and
// Huber-ized least squares, the l1 residual with its subset split for
// incremental methods, and the synthesis-domain 1-norm ||Hx||_1.

#ifndef BILEVEL_OBJECTIVES_HPP
#define BILEVEL_OBJECTIVES_HPP

#include <Eigen/SparseCore>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bilevel/types.hpp"

namespace bilevel {

/// Linear measurement model R, data b, and a partition of the rows of R into
/// contiguous subsets (used by incremental methods). Row norms are cached.
template <class Scalar>
class LinearResidualModel {
 public:
  using Sparse = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

  /// Partition rows into `subsets` contiguous chunks, the first rows%subsets
  /// chunks one row longer (matching near-equal array splitting).
  LinearResidualModel(Sparse R, Vec<Scalar> b, int subsets = 1)
      : LinearResidualModel(std::move(R), std::move(b),
                            equal_partition(static_cast<Index>(b.size()), subsets)) {}

  /// Explicit partition: offsets[i]..offsets[i+1] are the rows of subset i.
  LinearResidualModel(Sparse R, Vec<Scalar> b, std::vector<Index> offsets)
      : R_(std::move(R)), b_(std::move(b)), offsets_(std::move(offsets)) {
    if (R_.rows() != b_.size())
      throw std::invalid_argument("LinearResidualModel: rows(R) != len(b)");
    if (offsets_.size() < 2 || offsets_.front() != 0 || offsets_.back() != R_.rows())
      throw std::invalid_argument("LinearResidualModel: partition must cover all rows");
    for (std::size_t i = 0; i + 1 < offsets_.size(); ++i)
      if (offsets_[i] >= offsets_[i + 1])
        throw std::invalid_argument("LinearResidualModel: partition not increasing");
    row_norms_.resize(R_.rows());
    for (Index r = 0; r < R_.rows(); ++r)
      row_norms_[r] = R_.row(r).norm();
  }

  Index rows() const { return R_.rows(); }
  Index cols() const { return R_.cols(); }
  int subsets() const { return static_cast<int>(offsets_.size()) - 1; }
  const Sparse& matrix() const { return R_; }
  const Vec<Scalar>& data() const { return b_; }
  const Vec<Scalar>& row_norms() const { return row_norms_; }

  Vec<Scalar> apply(const Vec<Scalar>& x) const { return R_ * x; }
  Vec<Scalar> adjoint(const Vec<Scalar>& y) const { return R_.transpose() * y; }
  Vec<Scalar> residual(const Vec<Scalar>& x) const { return R_ * x - b_; }

  std::pair<Index, Index> subset_range(int i) const {
    if (i < 0 || i >= subsets())
      throw std::out_of_range("LinearResidualModel: subset index");
    return {offsets_[static_cast<std::size_t>(i)],
            offsets_[static_cast<std::size_t>(i) + 1]};
  }

  /// Sum of row norms in subset i; the subgradient bound of the subset's
  /// contribution to the l1 residual.
  Scalar subset_row_norm_sum(int i) const {
    auto [lo, hi] = subset_range(i);
    return row_norms_.segment(lo, hi - lo).sum();
  }

  static std::vector<Index> equal_partition(Index rows, int subsets) {
    if (subsets < 1 || subsets > rows)
      throw std::invalid_argument("LinearResidualModel: bad subset count");
    std::vector<Index> offsets(static_cast<std::size_t>(subsets) + 1, 0);
    const Index base = rows / subsets, extra = rows % subsets;
    for (int i = 0; i < subsets; ++i)
      offsets[static_cast<std::size_t>(i) + 1] =
          offsets[static_cast<std::size_t>(i)] + base + (i < extra ? 1 : 0);
    return offsets;
  }

 private:
  Sparse R_;
  Vec<Scalar> b_;
  std::vector<Index> offsets_;
  Vec<Scalar> row_norms_;
};

// ---------------------------------------------------------------------------
// Plain least squares q(x) = 1/2 ||Rx - b||^2.

template <class Scalar>
Scalar lsq_value(const LinearResidualModel<Scalar>& m, const Vec<Scalar>& x) {
  return Scalar(0.5) * m.residual(x).squaredNorm();
}

template <class Scalar>
Vec<Scalar> lsq_grad(const LinearResidualModel<Scalar>& m, const Vec<Scalar>& x) {
  return m.adjoint(m.residual(x));
}

// ---------------------------------------------------------------------------
// Huber-ized least squares f(x) = 1/2 sum_i h(r_i), with h quadratic on
// [-delta, delta] and affine outside:
//
//   h(t) = t^2               for |t| <= delta,
//   h(t) = 2*delta*|t| - delta^2  otherwise,
//
// so |h'| <= 2*delta, f is C^1 with globally bounded gradient, and f equals
// q(x) = 1/2||Rx - b||^2 exactly wherever q(x) <= delta^2/2.

template <class Scalar>
struct HuberParams {
  Scalar delta;
};

/// delta = ||R xtilde - b||; the reference point defines the transition scale.
template <class Scalar>
HuberParams<Scalar> huber_setup(const LinearResidualModel<Scalar>& m,
                                const Vec<Scalar>& xtilde) {
  const Scalar delta = m.residual(xtilde).norm();
  if (delta <= Scalar(0))
    throw std::invalid_argument("huber_setup: reference residual must be nonzero");
  return {delta};
}

template <class Scalar>
Scalar huber_value(const LinearResidualModel<Scalar>& m, const HuberParams<Scalar>& p,
                   const Vec<Scalar>& x) {
  const Vec<Scalar> r = m.residual(x);
  Scalar sum = 0;
  for (Index i = 0; i < r.size(); ++i) {
    const Scalar a = std::abs(r[i]);
    sum += a <= p.delta ? a * a : 2 * p.delta * a - p.delta * p.delta;
  }
  return Scalar(0.5) * sum;
}

template <class Scalar>
Vec<Scalar> huber_grad(const LinearResidualModel<Scalar>& m, const HuberParams<Scalar>& p,
                       const Vec<Scalar>& x) {
  Vec<Scalar> r = m.residual(x);
  for (Index i = 0; i < r.size(); ++i) {
    const Scalar t = r[i];
    r[i] = std::abs(t) <= p.delta ? 2 * t : (t > 0 ? 2 * p.delta : -2 * p.delta);
  }
  return Scalar(0.5) * m.adjoint(r);
}

/// Global gradient bound delta * sum_j ||r_j|| of the Huber-ized objective.
template <class Scalar>
Scalar huber_grad_bound(const LinearResidualModel<Scalar>& m, const HuberParams<Scalar>& p) {
  return p.delta * m.row_norms().sum();
}

// ---------------------------------------------------------------------------
// l1 residual l(x) = ||Rx - b||_1 with the subgradient selection sign(0) = 0,
// split componentwise along the model's row partition.

template <class Scalar>
Scalar sign0(Scalar t) {
  return t > Scalar(0) ? Scalar(1) : (t < Scalar(0) ? Scalar(-1) : Scalar(0));
}

template <class Scalar>
Scalar l1_value(const LinearResidualModel<Scalar>& m, const Vec<Scalar>& x) {
  return m.residual(x).template lpNorm<1>();
}

template <class Scalar>
Vec<Scalar> l1_subgrad(const LinearResidualModel<Scalar>& m, const Vec<Scalar>& x) {
  Vec<Scalar> s = m.residual(x);
  for (Index i = 0; i < s.size(); ++i) s[i] = sign0(s[i]);
  return m.adjoint(s);
}

template <class Scalar>
Scalar l1_component_value(const LinearResidualModel<Scalar>& m, int i, const Vec<Scalar>& x) {
  auto [lo, hi] = m.subset_range(i);
  return (m.matrix().middleRows(lo, hi - lo) * x - m.data().segment(lo, hi - lo))
      .template lpNorm<1>();
}

template <class Scalar>
Vec<Scalar> l1_component_subgrad(const LinearResidualModel<Scalar>& m, int i,
                                 const Vec<Scalar>& x) {
  auto [lo, hi] = m.subset_range(i);
  Vec<Scalar> s = m.matrix().middleRows(lo, hi - lo) * x - m.data().segment(lo, hi - lo);
  for (Index j = 0; j < s.size(); ++j) s[j] = sign0(s[j]);
  return m.matrix().middleRows(lo, hi - lo).transpose() * s;
}

// ---------------------------------------------------------------------------
// Component-split objective contract consumed by incremental operators.

template <class Scalar>
struct ComponentOracle {
  int m = 0;
  std::function<Scalar(int, const Vec<Scalar>&)> component_value;
  std::function<Vec<Scalar>(int, const Vec<Scalar>&)> component_subgrad;
  /// Per-component subgradient bounds C_i; empty when no global bound exists.
  std::vector<Scalar> bounds;

  Scalar value(const Vec<Scalar>& x) const {
    Scalar sum = 0;
    for (int i = 0; i < m; ++i) sum += component_value(i, x);
    return sum;
  }

  Scalar bound_sum() const {
    Scalar sum = 0;
    for (Scalar c : bounds) sum += c;
    return sum;
  }
};

/// l1 residual split along the model's row partition; C_i = sum of row norms.
template <class Scalar>
ComponentOracle<Scalar> l1_component_oracle(const LinearResidualModel<Scalar>& m) {
  ComponentOracle<Scalar> o;
  o.m = m.subsets();
  o.component_value = [&m](int i, const Vec<Scalar>& x) {
    return l1_component_value(m, i, x);
  };
  o.component_subgrad = [&m](int i, const Vec<Scalar>& x) {
    return l1_component_subgrad(m, i, x);
  };
  o.bounds.resize(static_cast<std::size_t>(o.m));
  for (int i = 0; i < o.m; ++i)
    o.bounds[static_cast<std::size_t>(i)] = m.subset_row_norm_sum(i);
  return o;
}

/// Least-squares split 1/2||R_i x - b_i||^2 along the row partition. The
/// components are smooth; no global subgradient bound exists, so `bounds`
/// stays empty.
template <class Scalar>
ComponentOracle<Scalar> lsq_component_oracle(const LinearResidualModel<Scalar>& m) {
  ComponentOracle<Scalar> o;
  o.m = m.subsets();
  o.component_value = [&m](int i, const Vec<Scalar>& x) {
    auto [lo, hi] = m.subset_range(i);
    return Scalar(0.5) *
           (m.matrix().middleRows(lo, hi - lo) * x - m.data().segment(lo, hi - lo))
               .squaredNorm();
  };
  o.component_subgrad = [&m](int i, const Vec<Scalar>& x) {
    auto [lo, hi] = m.subset_range(i);
    Vec<Scalar> r =
        m.matrix().middleRows(lo, hi - lo) * x - m.data().segment(lo, hi - lo);
    return Vec<Scalar>(m.matrix().middleRows(lo, hi - lo).transpose() * r);
  };
  return o;
}

// ---------------------------------------------------------------------------
// Synthesis-domain 1-norm f(x) = ||Hx||_1 for an orthonormal transform H.

template <class Scalar, class Transform>
Scalar synthesis_norm_value(const Transform& H, const Vec<Scalar>& x) {
  return H.forward(x).template lpNorm<1>();
}

template <class Scalar, class Transform>
Vec<Scalar> synthesis_norm_subgrad(const Transform& H, const Vec<Scalar>& x) {
  Vec<Scalar> w = H.forward(x);
  for (Index i = 0; i < w.size(); ++i) w[i] = sign0(w[i]);
  return H.inverse(w);
}

}  // namespace bilevel

#endif
