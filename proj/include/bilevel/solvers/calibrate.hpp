// Stepsize selection procedures: first-step displacement-ratio calibration of
// the secondary stepsize, a halving ladder for the primary stepsize, a grid
// search over incremental schedules, the count-consistent constant start, and
// a deterministic power method for the operator norm.

#ifndef BILEVEL_SOLVERS_CALIBRATE_HPP
#define BILEVEL_SOLVERS_CALIBRATE_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bilevel/objectives.hpp"
#include "bilevel/operator.hpp"
#include "bilevel/random.hpp"
#include "bilevel/run.hpp"
#include "bilevel/schedule.hpp"
#include "bilevel/solvers/iiba.hpp"
#include "bilevel/types.hpp"

namespace bilevel {

/// Picks the secondary stepsize so that the first secondary displacement is a
/// prescribed fraction of the first primary displacement: with
/// x_{1/3} = primary_step(lambda0, x0) and a tentative x~_{2/3} = op1(1, x_{1/3}),
///   mu = target_ratio * ||x0 - x_{1/3}|| / ||x_{1/3} - x~_{2/3}||.
/// Doubling the ratio doubles mu. Throws when the tentative secondary step
/// does not move (the ratio is then undefined).
template <class Scalar>
Scalar calibrate_mu(
    const std::function<Vec<Scalar>(Scalar, const Vec<Scalar>&)>& primary_step,
    const OptimalityOperator<Scalar>& op1, Scalar lambda0, const Vec<Scalar>& x0,
    Scalar target_ratio) {
  if (!(target_ratio > Scalar(0)))
    throw std::invalid_argument("calibrate_mu: target_ratio must be positive");
  const Vec<Scalar> x13 = primary_step(lambda0, x0);
  const Vec<Scalar> tentative = op1(Scalar(1), x13);
  const Scalar secondary = (x13 - tentative).norm();
  if (secondary == Scalar(0))
    throw std::runtime_error(
        "calibrate_mu: the secondary operator left the tentative point unchanged");
  return target_ratio * (x0 - x13).norm() / secondary;
}

/// Halves `start` until the probe reports a nonincreasing objective over its
/// window. `probe` maps a candidate stepsize to the per-iteration values
/// (for least squares, the squared residuals) of a short run of the one-level
/// method; the first candidate whose sequence never increases (beyond a 1e-12
/// relative slack) is returned. Throws after max_halvings failures.
template <class Scalar>
Scalar choose_lambda(const std::function<std::vector<Scalar>(Scalar)>& probe,
                     Scalar start, int max_halvings = 60) {
  if (!(start > Scalar(0)))
    throw std::invalid_argument("choose_lambda: start must be positive");
  Scalar lambda = start;
  for (int attempt = 0; attempt <= max_halvings; ++attempt) {
    const std::vector<Scalar> values = probe(lambda);
    if (values.size() < 2)
      throw std::invalid_argument("choose_lambda: probe must return >= 2 values");
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      if (!(values[i + 1] <= values[i] + Scalar(1e-12) * std::abs(values[i]))) {
        monotone = false;
        break;
      }
    }
    if (monotone) return lambda;
    lambda /= Scalar(2);
  }
  throw std::runtime_error("choose_lambda: no stable stepsize found by halving");
}

template <class Scalar>
struct GridSearchParams {
  std::vector<Scalar> alphas = {Scalar(0.1), Scalar(0.2), Scalar(0.3), Scalar(0.4),
                                Scalar(0.5), Scalar(0.6), Scalar(0.7), Scalar(0.8),
                                Scalar(0.9), Scalar(1.0)};
  std::vector<Scalar> epsilons = {Scalar(0.5), Scalar(0.6), Scalar(0.7), Scalar(0.8),
                                  Scalar(0.9)};
  long budget = 10;
};

template <class Scalar>
struct GridSearchResult {
  Scalar alpha = 0;
  Scalar epsilon = 0;
  /// Base stepsize alpha * s * f0(x0) / ||g0||^2 of the winning pair.
  Scalar lambda_base = 0;
  /// Final primary value of the winning probe run.
  Scalar final_f0 = 0;
};

/// Searches the (alpha, epsilon) grid for the schedule
/// lambda_k = alpha * s * f0(x0) / ||g0||^2 / (k+1)^epsilon, where s is the
/// component count and g0 a subgradient at x0, by running the projected
/// incremental method for `budget` iterations per pair (same seed each run)
/// and keeping the pair whose final f0 is smallest. Scan order is alphas
/// outer, epsilons inner; ties keep the earliest pair.
template <class Scalar>
GridSearchResult<Scalar> grid_search_lambda(const BilevelProblem<Scalar>& problem,
                                            const GridSearchParams<Scalar>& params,
                                            const Vec<Scalar>& x0, std::uint64_t seed) {
  if (params.alphas.empty() || params.epsilons.empty())
    throw std::invalid_argument("grid_search_lambda: grids must be nonempty");
  if (params.budget < 1)
    throw std::invalid_argument("grid_search_lambda: budget must be >= 1");
  if (!problem.f0_components)
    throw std::invalid_argument("grid_search_lambda: the problem has no component split");

  const Scalar s = static_cast<Scalar>(problem.f0_components->m);
  const Scalar f0_at_start = problem.f0_value(x0);
  const Scalar g0_sq = problem.f0_subgrad(x0).squaredNorm();
  if (!(g0_sq > Scalar(0)))
    throw std::runtime_error("grid_search_lambda: zero subgradient at the start point");
  const Scalar scale = s * f0_at_start / g0_sq;

  GridSearchResult<Scalar> best;
  bool have = false;
  for (const Scalar alpha : params.alphas)
    for (const Scalar eps : params.epsilons) {
      const StepSchedule<Scalar> sched(alpha * scale, eps);
      const auto run = run_inc(problem, sched, x0, params.budget, seed);
      const Scalar final_f0 = problem.f0_value(run.x);
      if (!have || final_f0 < best.final_f0) {
        best = {alpha, eps, alpha * scale, final_f0};
        have = true;
      }
    }
  return best;
}

/// Constant image alpha * 1 with alpha = sum(b) / sum(R 1), so the projection
/// of the start matches the data in total mass.
template <class Scalar>
Vec<Scalar> consistent_start(const LinearResidualModel<Scalar>& model) {
  const Scalar mass = model.apply(Vec<Scalar>::Ones(model.cols())).sum();
  if (!(mass > Scalar(0)))
    throw std::invalid_argument("consistent_start: the projector has zero mass");
  return Vec<Scalar>::Constant(model.cols(), model.data().sum() / mass);
}

/// Largest squared singular value of the model matrix by power iteration on
/// R^T R from a fixed seeded start, so the estimate is deterministic.
template <class Scalar>
Scalar largest_singular_value_squared(const LinearResidualModel<Scalar>& model,
                                      int iterations = 200, std::uint64_t seed = 0) {
  if (iterations < 1)
    throw std::invalid_argument("largest_singular_value_squared: iterations must be >= 1");
  std::mt19937_64 rng(seed);
  Vec<Scalar> v(model.cols());
  for (Index i = 0; i < v.size(); ++i) v[i] = static_cast<Scalar>(standard_normal(rng));
  v /= v.norm();
  Scalar estimate = 0;
  for (int it = 0; it < iterations; ++it) {
    Vec<Scalar> w = model.adjoint(model.apply(v));
    const Scalar n = w.norm();
    if (n == Scalar(0)) return Scalar(0);
    estimate = v.dot(w);
    v = w / n;
  }
  return estimate;
}

}  // namespace bilevel

#endif
