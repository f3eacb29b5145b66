// The abstract three-step bilevel iteration: a primary optimality step, a
// secondary optimality step, and a feasibility projection, with the per
// iteration bookkeeping shared by every concrete driver.

#ifndef BILEVEL_RUN_HPP
#define BILEVEL_RUN_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <vector>

#include "bilevel/feasibility.hpp"
#include "bilevel/objectives.hpp"
#include "bilevel/operator.hpp"
#include "bilevel/schedule.hpp"
#include "bilevel/trace.hpp"
#include "bilevel/types.hpp"

namespace bilevel {

/// Primary objective (value + subgradient, optionally component-split),
/// secondary objective value, and the feasible-set projector.
template <class Scalar>
struct BilevelProblem {
  std::function<Scalar(const Vec<Scalar>&)> f0_value;
  std::function<Vec<Scalar>(const Vec<Scalar>&)> f0_subgrad;
  std::optional<ComponentOracle<Scalar>> f0_components;
  std::function<Scalar(const Vec<Scalar>&)> f1_value;
  Projector<Scalar> project;
};

template <class Scalar>
struct RunResult {
  SolverTrace<Scalar> trace;
  Vec<Scalar> x;
  /// ||x_k - reference|| / ||reference|| per trace row; empty when no
  /// reference was supplied.
  std::vector<Scalar> rel_errors;
};

namespace detail {
template <class Scalar>
void require_finite(const Vec<Scalar>& v, long k, const char* sub_step) {
  if (!v.allFinite())
    throw std::runtime_error("iteration " + std::to_string(k) +
                             ": non-finite iterate after " + sub_step);
}
}  // namespace detail

/// Runs x_{k+1/3} = op0(lambda_k, x_k); x_{k+2/3} = op1(mu_k, x_{k+1/3});
/// x_{k+1} = project(x_{k+2/3}) for k = 0..max_iter-1. Row k of the trace
/// records the objective values at x_k and the two sub-step movements.
template <class Scalar>
RunResult<Scalar> run_bilevel(const BilevelProblem<Scalar>& problem,
                              const OptimalityOperator<Scalar>& op0,
                              const OptimalityOperator<Scalar>& op1,
                              const StepSchedule<Scalar>& sched0,
                              const StepSchedule<Scalar>& sched1,
                              const Vec<std::type_identity_t<Scalar>>& x0,
                              long max_iter) {
  RunResult<Scalar> result;
  result.x = x0;
  detail::require_finite(result.x, -1, "initialization");
  for (long k = 0; k < max_iter; ++k) {
    const Scalar lambda = sched0(k);
    const Scalar mu = sched1(k);
    const Vec<Scalar> x13 = op0(lambda, result.x);
    detail::require_finite(x13, k, "the primary step");
    const Vec<Scalar> x23 = op1(mu, x13);
    detail::require_finite(x23, k, "the secondary step");
    Vec<Scalar> xn = problem.project(x23);
    detail::require_finite(xn, k, "the feasibility projection");
    result.trace.push({k, problem.f0_value(result.x), problem.f1_value(result.x),
                       (result.x - x13).norm(), (result.x - x23).norm(), lambda, mu});
    result.x = std::move(xn);
  }
  return result;
}

}  // namespace bilevel

#endif
