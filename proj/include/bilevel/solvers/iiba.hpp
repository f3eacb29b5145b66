// Incremental bilevel driver: one shuffled subgradient sweep through the
// primary components per iteration, a secondary optimality step, and a
// feasibility projection. The plain projected incremental method is the same
// loop with the secondary step removed.

#ifndef BILEVEL_SOLVERS_IIBA_HPP
#define BILEVEL_SOLVERS_IIBA_HPP

#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "bilevel/operator.hpp"
#include "bilevel/operators.hpp"
#include "bilevel/random.hpp"
#include "bilevel/run.hpp"
#include "bilevel/schedule.hpp"
#include "bilevel/trace.hpp"
#include "bilevel/types.hpp"

namespace bilevel {

/// Runs the incremental bilevel iteration from x0 for max_iter iterations.
///
/// Per iteration k a fresh permutation of the component indices is drawn from
/// a generator seeded once with `seed`, then
///   x_{k+1/3} = incremental sweep of f0's components at stepsize lambda_k,
///   x_{k+2/3} = op1(mu_k, x_{k+1/3}) (skipped when mu_k = 0, so a zero
///               secondary schedule reproduces run_inc bit for bit),
///   x_{k+1}   = project(x_{k+2/3}).
/// Row k of the trace records f0, f1 at x_k, the two sub-step movements, and
/// (lambda_k, mu_k). Requires problem.f0_components.
template <class Scalar>
RunResult<Scalar> run_iiba(const BilevelProblem<Scalar>& problem,
                           const OptimalityOperator<Scalar>& op1,
                           const StepSchedule<Scalar>& sched_lambda,
                           const StepSchedule<Scalar>& sched_mu,
                           const Vec<std::type_identity_t<Scalar>>& x0,
                           long max_iter, std::uint64_t seed,
                           const Vec<std::type_identity_t<Scalar>>* reference = nullptr) {
  if (max_iter < 0) throw std::invalid_argument("run_iiba: max_iter must be >= 0");
  if (!problem.f0_components)
    throw std::invalid_argument("run_iiba: the problem has no component split");
  if (reference && !(reference->norm() > Scalar(0)))
    throw std::invalid_argument("run_iiba: reference image must be nonzero");
  const ComponentOracle<Scalar>& f0 = *problem.f0_components;

  RunResult<Scalar> result;
  result.x = x0;
  detail::require_finite(result.x, -1, "initialization");
  if (reference) result.rel_errors.reserve(static_cast<std::size_t>(max_iter));
  std::mt19937_64 rng(seed);

  for (long k = 0; k < max_iter; ++k) {
    const Scalar lambda = sched_lambda(k);
    const Scalar mu = sched_mu(k);

    const std::vector<int> order = random_permutation(f0.m, rng);
    const Vec<Scalar> x13 = incremental_subgrad(f0, lambda, result.x, order);
    detail::require_finite(x13, k, "the incremental sweep");

    const Vec<Scalar> x23 = mu == Scalar(0) ? x13 : op1(mu, x13);
    detail::require_finite(x23, k, "the secondary step");
    Vec<Scalar> xn = problem.project(x23);
    detail::require_finite(xn, k, "the feasibility projection");

    result.trace.push({k, problem.f0_value(result.x), problem.f1_value(result.x),
                       (result.x - x13).norm(), (result.x - x23).norm(), lambda, mu});
    if (reference)
      result.rel_errors.push_back((result.x - *reference).norm() / reference->norm());
    result.x = std::move(xn);
  }
  return result;
}

/// The projected incremental method: run_iiba without a secondary step.
/// Traces are bitwise identical to run_iiba with a zero secondary schedule
/// and the same seed.
template <class Scalar>
RunResult<Scalar> run_inc(const BilevelProblem<Scalar>& problem,
                          const StepSchedule<Scalar>& sched_lambda,
                          const Vec<std::type_identity_t<Scalar>>& x0,
                          long max_iter, std::uint64_t seed,
                          const Vec<std::type_identity_t<Scalar>>* reference = nullptr) {
  return run_iiba(problem, identity_operator<Scalar>(), sched_lambda,
                  StepSchedule<Scalar>::zero(), x0, max_iter, seed, reference);
}

}  // namespace bilevel

#endif
