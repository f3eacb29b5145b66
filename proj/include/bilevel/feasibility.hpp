// Projections and Fejer-monotone feasibility operators: exact projectors for
// simple sets, relaxed Polyak-type steps for functional constraints h(x) <= 0,
// their sequential (POCS) and averaged (Cimmino) compositions, and the
// repeat-until-tolerance wrapper that drives a composed operator until a merit
// function clears a stepsize-dependent threshold.

#ifndef BILEVEL_FEASIBILITY_HPP
#define BILEVEL_FEASIBILITY_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bilevel/types.hpp"

namespace bilevel {

/// Exact projector onto a simple closed convex set.
template <class Scalar>
struct Projector {
  std::function<Vec<Scalar>(const Vec<Scalar>&)> apply;
  std::string description;

  Vec<Scalar> operator()(const Vec<Scalar>& x) const { return apply(x); }
};

template <class Scalar>
Projector<Scalar> make_identity_projector() {
  return {[](const Vec<Scalar>& x) { return x; }, "all-space"};
}

template <class Scalar>
Projector<Scalar> make_nonneg_projector() {
  return {[](const Vec<Scalar>& x) { return x.cwiseMax(Scalar(0)).eval(); },
          "nonnegative orthant"};
}

template <class Scalar>
Projector<Scalar> make_box_projector(Scalar lo, Scalar hi) {
  if (lo > hi) throw std::invalid_argument("make_box_projector: lo > hi");
  return {[lo, hi](const Vec<Scalar>& x) {
            return x.cwiseMax(lo).cwiseMin(hi).eval();
          },
          "box"};
}

template <class Scalar>
Projector<Scalar> make_ball_projector(Vec<Scalar> center, Scalar radius) {
  if (radius < Scalar(0)) throw std::invalid_argument("make_ball_projector: radius < 0");
  return {[center = std::move(center), radius](const Vec<Scalar>& x) {
            const Scalar d = (x - center).norm();
            if (d <= radius) return x;
            return Vec<Scalar>(center + (radius / d) * (x - center));
          },
          "ball"};
}

/// Functional constraint h(x) <= 0 with a subgradient oracle.
template <class Scalar>
struct ConstraintOracle {
  std::function<Scalar(const Vec<Scalar>&)> value;
  std::function<Vec<Scalar>(const Vec<Scalar>&)> subgrad;
};

/// Relaxed Polyak step toward the level set {h <= 0}:
///   x - nu * [h(x)]_+ / ||g||^2 * g,  g a subgradient at x.
/// Returns x unchanged at feasible points or where the subgradient vanishes.
template <class Scalar>
Vec<Scalar> polyak_step(const ConstraintOracle<Scalar>& h, Scalar nu,
                        const Vec<Scalar>& x) {
  if (nu <= Scalar(0) || nu >= Scalar(2))
    throw std::invalid_argument("polyak_step: relaxation must lie in (0, 2)");
  const Scalar hx = h.value(x);
  if (hx <= Scalar(0)) return x;
  const Vec<Scalar> g = h.subgrad(x);
  const Scalar gg = g.squaredNorm();
  if (gg == Scalar(0)) return x;
  return x - (nu * hx / gg) * g;
}

template <class Scalar>
using FeasibilityStep = std::function<Vec<Scalar>(const Vec<Scalar>&)>;

/// One sweep of a feasibility scheme plus the data needed to iterate it to a
/// stepsize-dependent tolerance.
template <class Scalar>
struct FeasibilityOperator {
  FeasibilityStep<Scalar> step;                    ///< E: one composed sweep
  std::function<Scalar(const Vec<Scalar>&)> merit; ///< phi, 0 iff feasible
  Scalar K = 1;
  Scalar alpha = 1;
  Scalar eps = 1;
  int p_max = 100;

  /// Iterates E until phi(E^p(x)) <= K * mu^(alpha*eps); see
  /// repeat_until_feasible for the budget behavior.
  Vec<Scalar> apply(Scalar mu, const Vec<Scalar>& x) const;
};

/// Sequential composition: last step applied first in listing order
/// E = steps[r-1] o ... o steps[0].
template <class Scalar>
FeasibilityOperator<Scalar> pocs_compose(std::vector<FeasibilityStep<Scalar>> steps) {
  if (steps.empty()) throw std::invalid_argument("pocs_compose: empty step list");
  FeasibilityOperator<Scalar> op;
  op.step = [steps = std::move(steps)](const Vec<Scalar>& x) {
    Vec<Scalar> z = x;
    for (const auto& s : steps) z = s(z);
    return z;
  };
  return op;
}

/// Uniform average (1/r) * sum_i steps[i](x).
template <class Scalar>
FeasibilityOperator<Scalar> cimmino_average(std::vector<FeasibilityStep<Scalar>> steps) {
  if (steps.empty()) throw std::invalid_argument("cimmino_average: empty step list");
  FeasibilityOperator<Scalar> op;
  op.step = [steps = std::move(steps)](const Vec<Scalar>& x) {
    Vec<Scalar> acc = steps.front()(x);
    for (std::size_t i = 1; i < steps.size(); ++i) acc += steps[i](x);
    return Vec<Scalar>(acc / Scalar(steps.size()));
  };
  return op;
}

template <class Scalar>
struct FeasibilityResult {
  Vec<Scalar> x;
  int sweeps = 0;
  bool budget_exhausted = false;
};

/// Applies E repeatedly until phi(E^p(x)) <= K * mu^(alpha*eps), returning the
/// first point passing the test, or E^{p_max}(x) with the budget flag set.
template <class Scalar>
FeasibilityResult<Scalar> repeat_until_feasible(
    const FeasibilityStep<Scalar>& E, const std::function<Scalar(const Vec<Scalar>&)>& phi,
    Scalar K, Scalar alpha, Scalar eps, Scalar mu, const Vec<Scalar>& x, int p_max) {
  if (K <= Scalar(0) || alpha <= Scalar(0) || eps <= Scalar(0))
    throw std::invalid_argument("repeat_until_feasible: K, alpha, eps must be positive");
  if (p_max < 1) throw std::invalid_argument("repeat_until_feasible: p_max must be >= 1");
  const Scalar threshold = K * std::pow(mu, alpha * eps);
  FeasibilityResult<Scalar> res{x, 0, false};
  while (phi(res.x) > threshold) {
    if (res.sweeps == p_max) {
      res.budget_exhausted = true;
      return res;
    }
    res.x = E(res.x);
    ++res.sweeps;
  }
  return res;
}

template <class Scalar>
Vec<Scalar> FeasibilityOperator<Scalar>::apply(Scalar mu, const Vec<Scalar>& x) const {
  if (!merit) throw std::logic_error("FeasibilityOperator: merit function unset");
  return repeat_until_feasible<Scalar>(step, merit, K, alpha, eps, mu, x, p_max).x;
}

}  // namespace bilevel

#endif
