// The optimality-operator contract: a stepped map (lambda, x) -> x' together
// with the constants of its descent inequality.
//
// An operator O_f qualifies for the bilevel framework when it satisfies, for
// every y in the feasible set,
//
//   ||O_f(l,x) - y||^2 <= ||x - y||^2 - beta*l*(f(O_f(l,x)) - f(y)) + l*rho(l)
//
// (descent inequality, "Property 1") and a movement bound
//
//   ||x - O_f(l,x)|| <= l*gamma                       ("Property 2").
//
// beta, gamma and the evaluable error bound rho are carried as metadata so
// that stopping criteria can consume them analytically.

#ifndef BILEVEL_OPERATOR_HPP
#define BILEVEL_OPERATOR_HPP

#include <functional>
#include <limits>

#include "bilevel/types.hpp"

namespace bilevel {

template <class Scalar>
struct OperatorMeta {
  Scalar beta = 2;
  /// Movement bound constant; +infinity when no global bound exists.
  Scalar gamma = std::numeric_limits<Scalar>::infinity();
  /// Evaluable error bound rho(lambda) of the descent inequality.
  std::function<Scalar(Scalar)> rho_bar = [](Scalar) { return Scalar(0); };

  bool gamma_finite() const {
    return gamma != std::numeric_limits<Scalar>::infinity();
  }
};

template <class Scalar>
struct OptimalityOperator {
  std::function<Vec<Scalar>(Scalar, const Vec<Scalar>&)> apply;
  OperatorMeta<Scalar> meta;

  Vec<Scalar> operator()(Scalar stepsize, const Vec<Scalar>& x) const {
    return apply(stepsize, x);
  }
};

/// The do-nothing secondary operator (gamma = 0, rho = 0).
template <class Scalar>
OptimalityOperator<Scalar> identity_operator() {
  OptimalityOperator<Scalar> op;
  op.apply = [](Scalar, const Vec<Scalar>& x) { return x; };
  op.meta.beta = 2;
  op.meta.gamma = 0;
  return op;
}

}  // namespace bilevel

#endif
