// Accelerated proximal gradient baseline on the least-squares residual, in
// two mutually exclusive flavors: synthesis-domain l1 regularization
// (prox = soft-thresholding in an orthonormal frame) or a feasibility
// projection. Records the same trace columns as the bilevel drivers plus a
// relative-error curve against a reference image.

#ifndef BILEVEL_SOLVERS_FISTA_HPP
#define BILEVEL_SOLVERS_FISTA_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "bilevel/feasibility.hpp"
#include "bilevel/objectives.hpp"
#include "bilevel/operators.hpp"
#include "bilevel/run.hpp"
#include "bilevel/schedule.hpp"
#include "bilevel/trace.hpp"
#include "bilevel/types.hpp"

namespace bilevel {

template <class Scalar>
struct FistaResult {
  SolverTrace<Scalar> trace;
  Vec<Scalar> x;
  /// ||x_k - reference|| / ||reference|| per trace row; empty when no
  /// reference was supplied.
  std::vector<Scalar> rel_errors;
};

/// Minimizes 1/2 ||Rx - b||^2 + gamma ||Hx||_1 (gamma > 0, unconstrained) or
/// 1/2 ||Rx - b||^2 over the projector's set (gamma = 0, projector given)
/// with constant stepsize `lambda` and standard momentum: t_0 = 1,
///   x_{k+1} = prox(y_k - lambda grad(y_k)),
///   t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2,
///   y_{k+1} = x_{k+1} + ((t_k - 1)/t_{k+1}) (x_{k+1} - x_k).
/// The prox is H^T ST_{gamma lambda}(H .) in the first flavor and the
/// projection in the second; requesting both at once is an error. Row k of
/// the trace records f0 and ||Hx||_1 at x_k and the movement
/// ||x_{k+1} - x_k|| in the step0 column (step1 and mu are zero).
template <class Scalar, class Transform>
FistaResult<Scalar> run_fista(const LinearResidualModel<Scalar>& model, Scalar gamma,
                              const Transform& H,
                              const std::optional<Projector<std::type_identity_t<Scalar>>>& projector,
                              Scalar lambda,
                              const Vec<std::type_identity_t<Scalar>>& x0,
                              long max_iter,
                              const Vec<std::type_identity_t<Scalar>>* reference = nullptr) {
  if (max_iter < 0) throw std::invalid_argument("run_fista: max_iter must be >= 0");
  if (!(lambda > Scalar(0)))
    throw std::invalid_argument("run_fista: stepsize must be positive");
  if (gamma < Scalar(0))
    throw std::invalid_argument("run_fista: gamma must be nonnegative");
  if (gamma > Scalar(0) && projector)
    throw std::invalid_argument(
        "run_fista: synthesis regularization and a feasibility projection are "
        "mutually exclusive");
  if (reference && !(reference->norm() > Scalar(0)))
    throw std::invalid_argument("run_fista: reference image must be nonzero");

  FistaResult<Scalar> result;
  result.x = x0;
  detail::require_finite(result.x, -1, "initialization");
  if (reference) result.rel_errors.reserve(static_cast<std::size_t>(max_iter));

  Vec<Scalar> y = x0;
  Scalar t = 1;

  for (long k = 0; k < max_iter; ++k) {
    const Vec<Scalar> step = y - lambda * model.adjoint(model.residual(y));
    Vec<Scalar> xn;
    if (gamma > Scalar(0))
      xn = synthesis_prox(H, gamma * lambda, step);
    else if (projector)
      xn = (*projector)(step);
    else
      xn = step;
    detail::require_finite(xn, k, "the proximal gradient step");

    const Scalar t_next = (Scalar(1) + std::sqrt(Scalar(1) + 4 * t * t)) / Scalar(2);
    result.trace.push({k, lsq_value(model, result.x),
                       H.forward(result.x).template lpNorm<1>(),
                       (xn - result.x).norm(), Scalar(0), lambda, Scalar(0)});
    if (reference)
      result.rel_errors.push_back((result.x - *reference).norm() / reference->norm());

    y = xn + ((t - Scalar(1)) / t_next) * (xn - result.x);
    t = t_next;
    result.x = std::move(xn);
  }
  return result;
}

}  // namespace bilevel

#endif
