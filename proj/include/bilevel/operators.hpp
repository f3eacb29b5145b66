// The optimality-operator library: subgradient step, projected gradient with
// its sufficient-decrease certificate, incremental subgradient sweep,
// synthesis-domain soft-thresholding, and the J-fold iterated wrapper.
//
// Each factory returns the step map together with the (beta, gamma, rho)
// metadata of its descent inequality, stated relative to the objective value
// at the output point. For a subgradient bound G:
//
//   subgradient step      beta = 2   gamma = G        rho(l) = l*G^2 + 2*l*G^2
//   projected gradient    beta = 2   gamma = inf      rho = 0, valid whenever
//                                                     the decrease test holds
//   incremental sweep     beta = 2   gamma = sum C_i  rho(l) = 3*l*(sum C_i)^2
//   soft-threshold prox   beta = 2   gamma = sqrt(n)  rho(m) = 3*m*n
//   J-fold iterate        beta' = 2*H_J, gamma' = gamma*H_J, rho' below,
//                         H_J = 1 + 1/2 + ... + 1/J.

#ifndef BILEVEL_OPERATORS_HPP
#define BILEVEL_OPERATORS_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bilevel/objectives.hpp"
#include "bilevel/operator.hpp"
#include "bilevel/soft_threshold.hpp"
#include "bilevel/types.hpp"

namespace bilevel {

// ---------------------------------------------------------------------------
// Step primitives.

/// One subgradient step x - l * subgrad(x).
template <class Scalar, class Subgrad>
Vec<Scalar> subgrad_step(const Subgrad& subgrad, Scalar l, const Vec<Scalar>& x) {
  if (l < Scalar(0)) throw std::invalid_argument("subgrad_step: negative stepsize");
  if (l == Scalar(0)) return x;
  return x - l * subgrad(x);
}

/// One projected gradient step proj(x - l * grad(x)).
template <class Scalar, class Grad, class Proj>
Vec<Scalar> proj_grad_step(const Grad& grad, const Proj& proj, Scalar l,
                           const Vec<Scalar>& x) {
  if (l < Scalar(0)) throw std::invalid_argument("proj_grad_step: negative stepsize");
  return proj(Vec<Scalar>(x - l * grad(x)));
}

/// Sufficient-decrease certificate at the pair (x, y):
///   f(y) <= f(x) + <grad f(x), y - x> + ||y - x||^2 / (2l).
/// When true for y = proj_grad_step(..., l, x), the projected gradient step
/// obeys the descent inequality with rho = 0 as if 1/l were a Lipschitz
/// constant of grad f.
template <class Scalar, class Value, class Grad>
bool sufficient_decrease_holds(const Value& value, const Grad& grad,
                               const Vec<Scalar>& x, const Vec<Scalar>& y, Scalar l) {
  if (l <= Scalar(0))
    throw std::invalid_argument("sufficient_decrease_holds: stepsize must be positive");
  const Vec<Scalar> d = y - x;
  return value(y) <= value(x) + grad(x).dot(d) + d.squaredNorm() / (2 * l);
}

/// Incremental subgradient sweep through the components of f in the given
/// order, each with the same stepsize.
template <class Scalar>
Vec<Scalar> incremental_subgrad(const ComponentOracle<Scalar>& f, Scalar l,
                                const Vec<Scalar>& x, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != f.m)
    throw std::invalid_argument("incremental_subgrad: order size != component count");
  std::vector<bool> seen(static_cast<std::size_t>(f.m), false);
  for (int i : order) {
    if (i < 0 || i >= f.m || seen[static_cast<std::size_t>(i)])
      throw std::invalid_argument("incremental_subgrad: order is not a permutation");
    seen[static_cast<std::size_t>(i)] = true;
  }
  if (l == Scalar(0)) return x;
  Vec<Scalar> z = x;
  for (int i : order) z -= l * f.component_subgrad(i, z);
  return z;
}

/// Synthesis-domain soft-thresholding H^T ST_mu(H x) for orthonormal H.
/// The output z satisfies the fixed-point identity z = x - mu * g with
/// g in the subdifferential of ||H.||_1 at z.
template <class Scalar, class Transform>
Vec<Scalar> synthesis_prox(const Transform& H, Scalar mu, const Vec<Scalar>& x) {
  if (mu < Scalar(0)) throw std::invalid_argument("synthesis_prox: negative stepsize");
  return H.inverse(soft_threshold(mu, H.forward(x)));
}

/// J-fold repetition of a base step with diminishing stepsizes l/1, l/2, ...
template <class Scalar, class Base>
Vec<Scalar> iterated_op(const Base& base, int J, Scalar l, const Vec<Scalar>& x) {
  if (J < 1) throw std::invalid_argument("iterated_op: J must be at least 1");
  Vec<Scalar> z = x;
  for (int i = 1; i <= J; ++i) z = base(l / Scalar(i), z);
  return z;
}

// ---------------------------------------------------------------------------
// Factories attaching descent-inequality metadata.

/// Subgradient-step operator for an objective with subgradient bound G.
template <class Scalar>
OptimalityOperator<Scalar> make_subgrad_operator(
    std::function<Vec<Scalar>(const Vec<Scalar>&)> subgrad, Scalar G) {
  OptimalityOperator<Scalar> op;
  op.apply = [subgrad = std::move(subgrad)](Scalar l, const Vec<Scalar>& x) {
    return subgrad_step(subgrad, l, x);
  };
  op.meta.beta = 2;
  op.meta.gamma = G;
  op.meta.rho_bar = [G](Scalar l) { return l * G * G + 2 * l * G * G; };
  return op;
}

/// Projected-gradient operator. rho = 0 holds conditionally on the
/// sufficient-decrease test; drivers record that certificate per iteration.
template <class Scalar>
OptimalityOperator<Scalar> make_proj_grad_operator(
    std::function<Vec<Scalar>(const Vec<Scalar>&)> grad,
    std::function<Vec<Scalar>(const Vec<Scalar>&)> proj) {
  OptimalityOperator<Scalar> op;
  op.apply = [grad = std::move(grad), proj = std::move(proj)](Scalar l,
                                                              const Vec<Scalar>& x) {
    return proj_grad_step(grad, proj, l, x);
  };
  op.meta.beta = 2;
  op.meta.rho_bar = [](Scalar) { return Scalar(0); };
  return op;
}

/// Incremental sweep with a fixed component order. gamma and rho are finite
/// only when the oracle declares per-component bounds.
template <class Scalar>
OptimalityOperator<Scalar> make_incremental_operator(const ComponentOracle<Scalar>& f,
                                                     std::vector<int> order) {
  OptimalityOperator<Scalar> op;
  op.apply = [&f, order = std::move(order)](Scalar l, const Vec<Scalar>& x) {
    return incremental_subgrad(f, l, x, order);
  };
  op.meta.beta = 2;
  if (!f.bounds.empty()) {
    const Scalar C = f.bound_sum();
    op.meta.gamma = C;
    op.meta.rho_bar = [C](Scalar l) { return 3 * l * C * C; };
  }
  return op;
}

/// Soft-threshold prox of ||H.||_1 on vectors of length n.
template <class Scalar, class Transform>
OptimalityOperator<Scalar> make_synthesis_prox_operator(const Transform& H, Index n) {
  OptimalityOperator<Scalar> op;
  op.apply = [&H](Scalar mu, const Vec<Scalar>& x) { return synthesis_prox(H, mu, x); };
  op.meta.beta = 2;
  op.meta.gamma = std::sqrt(Scalar(n));
  op.meta.rho_bar = [n](Scalar mu) { return 3 * mu * Scalar(n); };
  return op;
}

/// Harmonic number H_J.
template <class Scalar>
Scalar harmonic_number(int J) {
  Scalar h = 0;
  for (int i = 1; i <= J; ++i) h += Scalar(1) / Scalar(i);
  return h;
}

/// J-fold iterate of a base operator whose objective has subgradient bound M.
/// Inherited constants: beta' = 2*H_J, gamma' = gamma*H_J,
/// rho'(l) = sum_i (1/i) rho(l/i) + 2*l*gamma*M * sum_i (1/i) sum_{j>i} (1/j).
template <class Scalar>
OptimalityOperator<Scalar> make_iterated_operator(OptimalityOperator<Scalar> base,
                                                  int J, Scalar M) {
  if (J < 1) throw std::invalid_argument("make_iterated_operator: J must be at least 1");
  OptimalityOperator<Scalar> op;
  op.apply = [base, J](Scalar l, const Vec<Scalar>& x) {
    return iterated_op([&base](Scalar li, const Vec<Scalar>& z) { return base(li, z); },
                       J, l, x);
  };
  const Scalar hj = harmonic_number<Scalar>(J);
  op.meta.beta = 2 * hj;
  op.meta.gamma = base.meta.gamma_finite()
                      ? base.meta.gamma * hj
                      : std::numeric_limits<Scalar>::infinity();
  Scalar cross = 0;
  for (int i = 1; i <= J; ++i)
    for (int j = i + 1; j <= J; ++j) cross += Scalar(1) / (Scalar(i) * Scalar(j));
  op.meta.rho_bar = [base_rho = base.meta.rho_bar, gamma = base.meta.gamma, M, J,
                     cross](Scalar l) {
    Scalar sum = 0;
    for (int i = 1; i <= J; ++i) sum += base_rho(l / Scalar(i)) / Scalar(i);
    return sum + 2 * l * gamma * M * cross;
  };
  return op;
}

}  // namespace bilevel

#endif
