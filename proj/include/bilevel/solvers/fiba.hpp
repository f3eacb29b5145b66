// Momentum-accelerated bilevel driver: projected gradient step on the primary
// objective with a displacement-triggered stepsize freeze, a clipped momentum
// extrapolation whose perturbation stays below mu_k * zeta_k, a secondary
// optimality step, and a feasibility projection.

#ifndef BILEVEL_SOLVERS_FIBA_HPP
#define BILEVEL_SOLVERS_FIBA_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "bilevel/operator.hpp"
#include "bilevel/operators.hpp"
#include "bilevel/run.hpp"
#include "bilevel/schedule.hpp"
#include "bilevel/trace.hpp"
#include "bilevel/types.hpp"

namespace bilevel {

template <class Scalar>
struct FibaResult {
  SolverTrace<Scalar> trace;
  Vec<Scalar> x;
  /// Per-iteration sufficient-decrease certificate of the primary step.
  std::vector<char> sufficient_decrease;
  /// Iterations where the stepsize had neither certificate: lambda_{i_k}
  /// exceeded 1/L (when L is known) and sufficient decrease failed.
  long uncertified_steps = 0;
  /// Final value of the freeze index i_k.
  long freeze_index = 0;
  /// ||x_k - reference|| / ||reference|| per trace row; empty when no
  /// reference was supplied.
  std::vector<Scalar> rel_errors;
};

/// Runs the accelerated bilevel iteration from x0 for max_iter iterations.
///
/// Per iteration k (with frozen stepsize index i_k, i_0 = 0):
///   x_{k+1/3} = project(x_k - lambda_{i_k} grad f0(x_k)),
///   i_{k+1}   = i_k + 1 if ||x_k - x_{k+1/3}|| >= zeta_k, else i_k,
///   t_{k+1}   = (1 + sqrt(1 + 4 t_k^2)) / 2 with t_0 = 1,
///   xi_k      = min{1, mu_k zeta_k / ||x_{k+1/3} - x_{(k-1)+1/3}||}
///               (1 when the displacement vanishes),
///   y_{k+1/3} = x_{k+1/3} + xi_k ((t_k - 1)/t_{k+1}) (x_{k+1/3} - x_{(k-1)+1/3}),
///   x_{k+2/3} = op1(mu_k, y_{k+1/3}) (skipped when mu_k = 0),
///   x_{k+1}   = project(x_{k+2/3}),
/// with x_{(-1)+1/3} = x0. The extrapolation satisfies
/// ||y_{k+1/3} - x_{k+1/3}|| <= mu_k zeta_k by construction; this is checked
/// every iteration. Row k of the trace records f0, f1 at x_k, the two
/// sub-step movements, and (lambda_{i_k}, mu_k).
///
/// `lipschitz`, when given, certifies stepsizes lambda <= 1/lipschitz without
/// consulting the sufficient-decrease test; iterations certified by neither
/// are counted in `uncertified_steps`.
template <class Scalar>
FibaResult<Scalar> run_fiba(const BilevelProblem<Scalar>& problem,
                            const OptimalityOperator<Scalar>& op1,
                            const StepSchedule<Scalar>& sched_lambda,
                            const StepSchedule<Scalar>& sched_mu,
                            const StepSchedule<Scalar>& sched_zeta,
                            const Vec<std::type_identity_t<Scalar>>& x0,
                            long max_iter,
                            std::optional<std::type_identity_t<Scalar>> lipschitz = std::nullopt,
                            const Vec<std::type_identity_t<Scalar>>* reference = nullptr) {
  if (max_iter < 0) throw std::invalid_argument("run_fiba: max_iter must be >= 0");
  if (reference && !(reference->norm() > Scalar(0)))
    throw std::invalid_argument("run_fiba: reference image must be nonzero");
  FibaResult<Scalar> result;
  result.x = x0;
  detail::require_finite(result.x, -1, "initialization");
  result.sufficient_decrease.reserve(static_cast<std::size_t>(max_iter));
  if (reference) result.rel_errors.reserve(static_cast<std::size_t>(max_iter));

  Vec<Scalar> prev13 = x0;
  Scalar t = 1;
  long freeze = 0;

  for (long k = 0; k < max_iter; ++k) {
    const Scalar lambda = sched_lambda(freeze);
    const Scalar mu = sched_mu(k);
    const Scalar zeta = sched_zeta(k);

    const Vec<Scalar> grad = problem.f0_subgrad(result.x);
    const Vec<Scalar> x13 = problem.project(Vec<Scalar>(result.x - lambda * grad));
    detail::require_finite(x13, k, "the projected gradient step");

    // A zero stepsize leaves the gradient step inert and is trivially safe.
    const bool decreased =
        lambda == Scalar(0) ||
        sufficient_decrease_holds<Scalar>(problem.f0_value, problem.f0_subgrad,
                                          result.x, x13, lambda);
    result.sufficient_decrease.push_back(decreased ? 1 : 0);
    const bool certified =
        (lipschitz && lambda * (*lipschitz) <= Scalar(1) + Scalar(1e-12)) || decreased;
    if (!certified) ++result.uncertified_steps;

    const Scalar step0 = (result.x - x13).norm();
    if (step0 >= zeta) ++freeze;

    const Scalar t_next = (Scalar(1) + std::sqrt(Scalar(1) + 4 * t * t)) / Scalar(2);
    const Vec<Scalar> d = x13 - prev13;
    const Scalar dn = d.norm();
    const Scalar cap = mu * zeta;
    const Scalar xi = dn == Scalar(0) ? Scalar(1) : std::min(Scalar(1), cap / dn);
    const Vec<Scalar> y13 = x13 + (xi * (t - Scalar(1)) / t_next) * d;
    if ((y13 - x13).norm() > cap * (Scalar(1) + Scalar(1e-9)) + Scalar(1e-300))
      throw std::logic_error("run_fiba: extrapolation exceeded its perturbation bound");

    const Vec<Scalar> x23 = mu == Scalar(0) ? y13 : op1(mu, y13);
    detail::require_finite(x23, k, "the secondary step");
    Vec<Scalar> xn = problem.project(x23);
    detail::require_finite(xn, k, "the feasibility projection");

    result.trace.push({k, problem.f0_value(result.x), problem.f1_value(result.x),
                       step0, (result.x - x23).norm(), lambda, mu});
    if (reference)
      result.rel_errors.push_back((result.x - *reference).norm() / reference->norm());

    prev13 = x13;
    t = t_next;
    result.x = std::move(xn);
  }
  result.freeze_index = freeze;
  return result;
}

}  // namespace bilevel

#endif
