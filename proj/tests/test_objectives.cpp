// Objective oracles: plain and Huber-ized least squares, the l1 residual and
// its component split, and the synthesis-domain 1-norm. Derived values are
// checked against finite differences and direct convexity inequalities.

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "bilevel/objectives.hpp"
#include "bilevel/random.hpp"
#include "bilevel/transforms.hpp"

using namespace bilevel;

namespace {

LinearResidualModel<double> random_model(Index rows, Index cols, std::mt19937_64& rng,
                                         int subsets = 1) {
  Eigen::MatrixXd A(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) A(i, j) = standard_normal(rng);
  Vec<double> b(rows);
  for (Index i = 0; i < rows; ++i) b[i] = standard_normal(rng);
  return LinearResidualModel<double>(A.sparseView(), b, subsets);
}

Vec<double> random_vec(Index n, std::mt19937_64& rng) {
  Vec<double> v(n);
  for (Index i = 0; i < n; ++i) v[i] = standard_normal(rng);
  return v;
}

/// Central-difference directional derivative oracle.
template <class F>
double fd_directional(const F& f, const Vec<double>& x, const Vec<double>& d,
                      double h = 1e-6) {
  return (f(x + h * d) - f(x - h * d)) / (2 * h);
}

}  // namespace

TEST_CASE("model: partition covers rows with near-equal contiguous chunks") {
  auto offsets = LinearResidualModel<double>::equal_partition(10, 4);
  // 10 rows over 4 subsets: sizes 3, 3, 2, 2.
  CHECK(offsets == std::vector<Index>{0, 3, 6, 8, 10});
  CHECK_THROWS_AS(LinearResidualModel<double>::equal_partition(3, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(LinearResidualModel<double>::equal_partition(3, 0),
                  std::invalid_argument);
  std::mt19937_64 rng(1);
  auto m = random_model(10, 4, rng, 4);
  double total = 0;
  for (int i = 0; i < m.subsets(); ++i) {
    auto [lo, hi] = m.subset_range(i);
    total += double(hi - lo);
  }
  CHECK(total == 10.0);
}

TEST_CASE("least squares: exact values and gradient") {
  std::mt19937_64 rng(2);
  auto m = random_model(6, 4, rng);
  // A point with Rx = b is out of reach generically; use x = 0 identities.
  Vec<double> zero = Vec<double>::Zero(4);
  CHECK(lsq_value(m, zero) == doctest::Approx(0.5 * m.data().squaredNorm()));
  CHECK((lsq_grad(m, zero) + m.adjoint(m.data())).norm() <= 1e-14);
  // Residual zero gives value zero: solve the normal equations.
  auto m2 = random_model(4, 4, rng);
  Eigen::MatrixXd A = Eigen::MatrixXd(m2.matrix());
  Vec<double> xs = A.fullPivLu().solve(m2.data());
  CHECK(lsq_value(m2, xs) <= 1e-18);
  CHECK(lsq_grad(m2, xs).norm() <= 1e-8);
  // Finite differences.
  for (int t = 0; t < 10; ++t) {
    Vec<double> x = random_vec(4, rng), d = random_vec(4, rng);
    d.normalize();
    const double fd = fd_directional([&](const Vec<double>& z) { return lsq_value(m, z); }, x, d);
    CHECK(lsq_grad(m, x).dot(d) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("huber: equals least squares exactly inside the transition region") {
  std::mt19937_64 rng(3);
  auto m = random_model(6, 4, rng);
  auto p = huber_setup(m, Vec<double>(Vec<double>::Zero(4)));
  CHECK(p.delta == doctest::Approx(m.data().norm()));
  CHECK_THROWS_AS(
      [&] {
        Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
        LinearResidualModel<double> exact(A.sparseView(), Vec<double>::Ones(3));
        Vec<double> x = Vec<double>::Ones(3);
        return huber_setup(exact, x);
      }(),
      std::invalid_argument);

  int inside_checked = 0, outside_checked = 0;
  for (int t = 0; t < 400; ++t) {
    Vec<double> x = 3.0 * random_vec(4, rng);
    const double q = lsq_value(m, x);
    const double f = huber_value(m, p, x);
    const double worst = m.residual(x).cwiseAbs().maxCoeff();
    if (q <= 0.5 * p.delta * p.delta) CHECK(worst <= p.delta * (1 + 1e-12));
    if (worst <= p.delta) {
      CHECK(f == doctest::Approx(q).epsilon(1e-14));
      ++inside_checked;
    } else {
      CHECK(f < q);
      CHECK(f >= 0.5 * p.delta * p.delta * (1 - 1e-12));
      ++outside_checked;
    }
  }
  CHECK(inside_checked > 0);
  CHECK(outside_checked > 0);
}

TEST_CASE("huber: gradient matches finite differences inside and outside") {
  std::mt19937_64 rng(4);
  auto m = random_model(6, 4, rng);
  // A small delta puts generic points on the affine branches.
  HuberParams<double> p{0.5};
  for (int t = 0; t < 20; ++t) {
    Vec<double> x = 2.0 * random_vec(4, rng), d = random_vec(4, rng);
    d.normalize();
    const double fd = fd_directional(
        [&](const Vec<double>& z) { return huber_value(m, p, z); }, x, d);
    CHECK(huber_grad(m, p, x).dot(d) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("huber: gradient norm respects the analytic bound") {
  std::mt19937_64 rng(5);
  auto m = random_model(6, 4, rng);
  HuberParams<double> p{0.8};
  const double bound = huber_grad_bound(m, p);
  CHECK(bound == doctest::Approx(p.delta * m.row_norms().sum()));
  for (int t = 0; t < 200; ++t) {
    Vec<double> x = 10.0 * random_vec(4, rng);
    CHECK(huber_grad(m, p, x).norm() <= bound * (1 + 1e-12));
  }
}

TEST_CASE("huber: midpoint convexity on random segments") {
  std::mt19937_64 rng(6);
  auto m = random_model(5, 3, rng);
  HuberParams<double> p{1.3};
  for (int t = 0; t < 1000; ++t) {
    Vec<double> x = 3.0 * random_vec(3, rng), y = 3.0 * random_vec(3, rng);
    const double mid = huber_value(m, p, Vec<double>(0.5 * (x + y)));
    CHECK(mid <= 0.5 * (huber_value(m, p, x) + huber_value(m, p, y)) + 1e-12);
  }
}

TEST_CASE("l1 residual: values, component split, and subdifferential membership") {
  std::mt19937_64 rng(7);
  auto m = random_model(8, 5, rng, 3);
  for (int t = 0; t < 50; ++t) {
    Vec<double> x = random_vec(5, rng);
    double sum = 0;
    for (int i = 0; i < m.subsets(); ++i) sum += l1_component_value(m, i, x);
    CHECK(sum == doctest::Approx(l1_value(m, x)).epsilon(1e-13));
  }
  for (int t = 0; t < 1000; ++t) {
    Vec<double> x = random_vec(5, rng), y = random_vec(5, rng);
    const Vec<double> g = l1_subgrad(m, x);
    CHECK(l1_value(m, y) >= l1_value(m, x) + g.dot(y - x) - 1e-10);
  }
}

TEST_CASE("l1 residual: emitted component subgradients respect their bounds") {
  std::mt19937_64 rng(8);
  auto m = random_model(9, 4, rng, 3);
  auto oracle = l1_component_oracle(m);
  REQUIRE(oracle.m == 3);
  for (int i = 0; i < oracle.m; ++i)
    CHECK(oracle.bounds[static_cast<std::size_t>(i)] ==
          doctest::Approx(m.subset_row_norm_sum(i)));
  for (int t = 0; t < 300; ++t) {
    Vec<double> x = random_vec(4, rng);
    for (int i = 0; i < oracle.m; ++i)
      CHECK(oracle.component_subgrad(i, x).norm() <=
            oracle.bounds[static_cast<std::size_t>(i)] * (1 + 1e-12));
  }
  // Oracle value equals the full objective.
  Vec<double> x = random_vec(4, rng);
  CHECK(oracle.value(x) == doctest::Approx(l1_value(m, x)).epsilon(1e-13));
}

TEST_CASE("l1 residual: zero residual gives zero value and subgradient") {
  Eigen::MatrixXd A(2, 4);
  A << 1, 2, 0, 1, 0, 1, 3, -1;
  Vec<double> x(4);
  x << 1, -1, 0.5, 2;
  LinearResidualModel<double> m(A.sparseView(), A * x);
  CHECK(l1_value(m, x) <= 1e-14);
  CHECK(l1_subgrad(m, x).norm() <= 1e-14);
}

TEST_CASE("least-squares component oracle sums to the full objective") {
  std::mt19937_64 rng(9);
  auto m = random_model(6, 4, rng, 3);
  auto oracle = lsq_component_oracle(m);
  CHECK(oracle.bounds.empty());
  for (int t = 0; t < 30; ++t) {
    Vec<double> x = random_vec(4, rng);
    CHECK(oracle.value(x) == doctest::Approx(lsq_value(m, x)).epsilon(1e-13));
    // Component gradients sum to the full gradient.
    Vec<double> g = Vec<double>::Zero(4);
    for (int i = 0; i < oracle.m; ++i) g += oracle.component_subgrad(i, x);
    CHECK((g - lsq_grad(m, x)).norm() <= 1e-12);
  }
}

TEST_CASE("synthesis 1-norm: value, subgradient bound, sign-flip invariance") {
  const Index side = 8, n = side * side;
  HaarTransform2D<double> H(side);
  std::mt19937_64 rng(10);
  CHECK(synthesis_norm_value(H, Vec<double>(Vec<double>::Zero(n))) == 0.0);
  for (int t = 0; t < 1000; ++t) {
    Vec<double> x = random_vec(n, rng);
    CHECK(synthesis_norm_subgrad(H, x).norm() <= std::sqrt(double(n)) + 1e-12);
  }
  // Flipping coefficient signs in the transform domain preserves the value.
  Vec<double> w = random_vec(n, rng);
  Vec<double> w2 = w;
  std::mt19937_64 flip(11);
  for (Index i = 0; i < n; ++i)
    if (uniform01(flip) < 0.5) w2[i] = -w2[i];
  CHECK(synthesis_norm_value(H, H.inverse(w)) ==
        doctest::Approx(synthesis_norm_value(H, H.inverse(w2))).epsilon(1e-12));
  // Subdifferential membership.
  for (int t = 0; t < 200; ++t) {
    Vec<double> x = random_vec(n, rng), y = random_vec(n, rng);
    const Vec<double> g = synthesis_norm_subgrad(H, x);
    CHECK(synthesis_norm_value(H, y) >=
          synthesis_norm_value(H, x) + g.dot(y - x) - 1e-10);
  }
}
