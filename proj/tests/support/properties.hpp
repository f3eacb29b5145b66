// Randomized checkers for the two descent properties carried by the
// optimality operators, plus the prebuilt suite of operator families the
// acceptance run exercises. Shared by the operator unit tests and the
// acceptance suite.

#ifndef TESTS_SUPPORT_PROPERTIES_HPP
#define TESTS_SUPPORT_PROPERTIES_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bilevel/objectives.hpp"
#include "bilevel/operators.hpp"
#include "bilevel/random.hpp"
#include "bilevel/transforms.hpp"
#include "bilevel/tv.hpp"
#include "bilevel/types.hpp"

namespace testsupport {

using bilevel::Index;
using bilevel::Vec;

/// Aggregate result of a randomized descent-property check.
struct PropertyReport {
  int trials = 0;
  int skipped = 0;      ///< trials excluded by a conditional certificate
  int violations1 = 0;  ///< descent-inequality failures
  int violations2 = 0;  ///< movement-bound failures
  double min_slack1 = std::numeric_limits<double>::infinity();
  double min_slack2 = std::numeric_limits<double>::infinity();

  bool clean() const { return violations1 == 0 && violations2 == 0; }
};

/// Checks, over random (x, y, stepsize) triples,
///   ||O(l,x) - y||^2 <= ||x - y||^2 - beta*l*(f(O(l,x)) - f(y)) + l*rho(l)
///   ||x - O(l,x)||   <= l*gamma                       (only if gamma finite)
/// against the metadata carried by the operator. An optional gate restricts
/// the descent check to trials where the operator's conditional certificate
/// holds (the projected-gradient sufficient-decrease test); gated-out trials
/// are counted in `skipped`. When the comparison point must be feasible, pass
/// a `feasible` map that projects the raw sample.
template <class Value, class SampleVec, class SampleStep>
PropertyReport check_operator_properties(
    const bilevel::OptimalityOperator<double>& op, const Value& value,
    SampleVec&& sample_vec, SampleStep&& sample_step, int trials,
    std::mt19937_64& rng, double tol = 1e-9,
    const std::function<bool(const Vec<double>&, const Vec<double>&, double)>& gate = {},
    const std::function<Vec<double>(const Vec<double>&)>& feasible = {}) {
  PropertyReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const Vec<double> x = sample_vec(rng);
    Vec<double> y = sample_vec(rng);
    if (feasible) y = feasible(y);
    const double l = sample_step(rng);
    const Vec<double> z = op(l, x);
    if (op.meta.gamma_finite()) {
      const double slack2 = l * op.meta.gamma - (x - z).norm();
      rep.min_slack2 = std::min(rep.min_slack2, slack2);
      if (slack2 < -tol) ++rep.violations2;
    }
    if (gate && !gate(x, z, l)) {
      ++rep.skipped;
      continue;
    }
    const double lhs = (z - y).squaredNorm();
    const double rhs = (x - y).squaredNorm() -
                       op.meta.beta * l * (value(z) - value(y)) +
                       l * op.meta.rho_bar(l);
    const double slack1 = rhs - lhs;
    rep.min_slack1 = std::min(rep.min_slack1, slack1);
    if (slack1 < -tol) ++rep.violations1;
  }
  return rep;
}

/// Checks the incremental-sweep inequality stated at the input point,
///   ||z - y||^2 <= ||x - y||^2 - 2*l*(f(x) - f(y)) + l^2 * (sum C_i)^2,
/// with a fresh random component order per trial, alongside the movement
/// bound ||x - z|| <= l * sum C_i.
template <class SampleVec, class SampleStep>
PropertyReport check_incremental_input_inequality(
    const bilevel::ComponentOracle<double>& f, SampleVec&& sample_vec,
    SampleStep&& sample_step, int trials, std::mt19937_64& rng, double tol = 1e-9) {
  PropertyReport rep;
  rep.trials = trials;
  const double C = f.bound_sum();
  for (int t = 0; t < trials; ++t) {
    const Vec<double> x = sample_vec(rng);
    const Vec<double> y = sample_vec(rng);
    const double l = sample_step(rng);
    const auto order = bilevel::random_permutation(f.m, rng);
    const Vec<double> z = bilevel::incremental_subgrad(f, l, x, order);
    const double slack2 = l * C - (x - z).norm();
    rep.min_slack2 = std::min(rep.min_slack2, slack2);
    if (slack2 < -tol) ++rep.violations2;
    const double lhs = (z - y).squaredNorm();
    const double rhs = (x - y).squaredNorm() - 2 * l * (f.value(x) - f.value(y)) +
                       l * l * C * C;
    const double slack1 = rhs - lhs;
    rep.min_slack1 = std::min(rep.min_slack1, slack1);
    if (slack1 < -tol) ++rep.violations1;
  }
  return rep;
}

/// Normal-vector sampler of the given length and scale.
inline std::function<Vec<double>(std::mt19937_64&)> normal_sampler(Index n,
                                                                   double scale = 1.0) {
  return [n, scale](std::mt19937_64& rng) {
    Vec<double> v(n);
    for (Index i = 0; i < n; ++i) v[i] = scale * bilevel::standard_normal(rng);
    return v;
  };
}

/// Uniform stepsize sampler on [lo, hi].
inline std::function<double(std::mt19937_64&)> stepsize_sampler(double lo, double hi) {
  return [lo, hi](std::mt19937_64& rng) { return bilevel::uniform(rng, lo, hi); };
}

struct NamedReport {
  std::string name;
  PropertyReport report;
};

/// The operator families exercised by the randomized descent-property suite:
/// subgradient step on an l1 residual, gated projected gradient on a
/// constrained least-squares model, incremental sweep over l1 components,
/// the orthonormal soft-threshold prox, and the iterated total-variation
/// step at J = 5 and J = 10. Every family must come back clean and the
/// projected-gradient gate must never trip at stepsize 1/L.
inline std::vector<NamedReport> run_descent_property_suite(int trials,
                                                           std::uint64_t seed) {
  std::vector<NamedReport> out;
  std::mt19937_64 rng(seed);

  Eigen::MatrixXd A(6, 4);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 4; ++j) A(i, j) = bilevel::standard_normal(rng);
  Vec<double> b(6);
  for (Index i = 0; i < 6; ++i) b[i] = bilevel::standard_normal(rng);
  const bilevel::LinearResidualModel<double> model(A.sparseView(), b, 3);

  const auto vec4 = normal_sampler(4, 2.0);
  const auto steps = stepsize_sampler(0.01, 0.5);

  {
    double G = 0;
    for (Index i = 0; i < 6; ++i) G += A.row(i).norm();
    auto op = bilevel::make_subgrad_operator<double>(
        [&model](const Vec<double>& x) { return bilevel::l1_subgrad(model, x); }, G);
    auto value = [&model](const Vec<double>& x) { return bilevel::l1_value(model, x); };
    out.push_back({"subgradient step, l1 residual",
                   check_operator_properties(op, value, vec4, steps, trials, rng)});
  }

  {
    const double L = (A.transpose() * A).operatorNorm();
    auto grad = [&model](const Vec<double>& x) { return bilevel::lsq_grad(model, x); };
    auto value = [&model](const Vec<double>& x) { return bilevel::lsq_value(model, x); };
    auto proj = [](const Vec<double>& x) { return Vec<double>(x.cwiseMax(0.0)); };
    auto op = bilevel::make_proj_grad_operator<double>(grad, proj);
    auto gate = std::function<bool(const Vec<double>&, const Vec<double>&, double)>(
        [&model, grad, value](const Vec<double>& x, const Vec<double>& z, double l) {
          return bilevel::sufficient_decrease_holds(value, grad, x, z, l);
        });
    auto lipstep = stepsize_sampler(1.0 / L, 1.0 / L);
    out.push_back(
        {"projected gradient, gated least squares",
         check_operator_properties(op, value, vec4, lipstep, trials, rng, 1e-9, gate,
                                   std::function<Vec<double>(const Vec<double>&)>(proj))});
  }

  {
    const auto oracle = bilevel::l1_component_oracle(model);
    auto op = bilevel::make_incremental_operator<double>(
        oracle, std::vector<int>{2, 0, 1});
    auto value = [&oracle](const Vec<double>& x) { return oracle.value(x); };
    out.push_back({"incremental sweep, l1 components (output form)",
                   check_operator_properties(op, value, vec4, steps, trials, rng)});
    out.push_back({"incremental sweep, l1 components (input form)",
                   check_incremental_input_inequality(oracle, vec4, steps, trials, rng)});
  }

  const Index side = 8;
  const Index n = side * side;
  const auto vecn = normal_sampler(n, 1.0);
  const bilevel::HaarTransform2D<double> H(side);

  {
    auto op = bilevel::make_synthesis_prox_operator<double>(H, n);
    auto value = [&H](const Vec<double>& x) {
      return bilevel::synthesis_norm_value(H, x);
    };
    out.push_back({"soft-threshold prox, orthonormal synthesis norm",
                   check_operator_properties(op, value, vecn, steps, trials, rng)});
  }

  {
    const double G = bilevel::tv_subgrad_bound<double>(n);
    auto base = bilevel::make_subgrad_operator<double>(
        [side](const Vec<double>& x) { return bilevel::tv_subgrad(x, side); }, G);
    auto value = [side](const Vec<double>& x) { return bilevel::tv_value(x, side); };
    for (int J : {5, 10}) {
      auto op = bilevel::make_iterated_operator<double>(base, J, G);
      out.push_back(
          {"iterated total-variation step, J = " + std::to_string(J),
           check_operator_properties(op, value, vecn, steps, trials, rng)});
    }
  }

  return out;
}

}  // namespace testsupport

#endif
