// Orthonormal multilevel Haar transform checks, including a brute-force
// matrix assembly oracle at small size.

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "bilevel/random.hpp"
#include "bilevel/transforms.hpp"

using namespace bilevel;

namespace {
Vec<double> random_vec(Index n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  Vec<double> v(n);
  for (Index i = 0; i < n; ++i) v[i] = uniform(rng, lo, hi);
  return v;
}
}  // namespace

TEST_CASE("haar: inverse undoes forward to near machine precision") {
  std::mt19937_64 rng(1);
  for (Index side : {2, 4, 8, 32, 64}) {
    HaarTransform2D<double> H(side);
    for (int t = 0; t < 5; ++t) {
      Vec<double> x = random_vec(side * side, rng);
      Vec<double> back = H.inverse(H.forward(x));
      CHECK((back - x).norm() <= 1e-12 * x.norm());
    }
  }
}

TEST_CASE("haar: transform matrix is orthonormal (brute force at side 4)") {
  const Index side = 4, n = side * side;
  HaarTransform2D<double> H(side);
  Eigen::MatrixXd M(n, n);
  for (Index j = 0; j < n; ++j) {
    Vec<double> e = Vec<double>::Zero(n);
    e[j] = 1.0;
    M.col(j) = H.forward(e);
  }
  CHECK((M.transpose() * M - Eigen::MatrixXd::Identity(n, n)).norm() <= 1e-13);
  // The inverse map is the adjoint of the forward map.
  std::mt19937_64 rng(2);
  Vec<double> x = random_vec(n, rng), y = random_vec(n, rng);
  CHECK(H.forward(x).dot(y) == doctest::Approx(x.dot(H.inverse(y))).epsilon(1e-13));
}

TEST_CASE("haar: a constant image concentrates into one scaling coefficient") {
  const Index side = 8, n = side * side;
  HaarTransform2D<double> H(side);
  const double c = 0.7;
  Vec<double> w = H.forward(Vec<double>::Constant(n, c));
  CHECK(w[0] == doctest::Approx(c * std::sqrt(double(n))).epsilon(1e-13));
  CHECK((w.tail(n - 1)).lpNorm<Eigen::Infinity>() <= 1e-13);
}

TEST_CASE("haar: energy is preserved") {
  std::mt19937_64 rng(3);
  HaarTransform2D<double> H(16);
  for (int t = 0; t < 10; ++t) {
    Vec<double> x = random_vec(256, rng);
    CHECK(H.forward(x).norm() == doctest::Approx(x.norm()).epsilon(1e-13));
  }
}

TEST_CASE("haar: construction rejects non-power-of-two sides") {
  CHECK_THROWS_AS(HaarTransform2D<double>(3), std::invalid_argument);
  CHECK_THROWS_AS(HaarTransform2D<double>(0), std::invalid_argument);
  CHECK_THROWS_AS(HaarTransform2D<double>(96), std::invalid_argument);
  HaarTransform2D<double> H(4);
  CHECK_THROWS_AS(H.forward(Vec<double>::Zero(15)), std::invalid_argument);
}

TEST_CASE("identity transform passes vectors through") {
  IdentityTransform<double> I;
  std::mt19937_64 rng(4);
  Vec<double> x = random_vec(10, rng);
  CHECK(I.forward(x) == x);
  CHECK(I.inverse(x) == x);
}
