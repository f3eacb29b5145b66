// Deterministic sampling primitives on top of std::mt19937_64.
//
// The mt19937_64 engine is fully specified by the C++ standard, but the
// standard distributions are implementation-defined. Everything here is
// written out explicitly so that a fixed seed yields bitwise-identical
// streams on any conforming standard library.

#ifndef BILEVEL_RANDOM_HPP
#define BILEVEL_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace bilevel {

/// Uniform double in [0, 1) with 53 random mantissa bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Standard normal deviate via the Box-Muller transform (one value per call;
/// the sine branch is discarded to keep the stream stateless).
inline double standard_normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

/// Unbiased uniform integer in [0, n) by rejection on the top bits.
inline std::uint64_t bounded_uint(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

/// In-place Fisher-Yates shuffle.
template <class T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded_uint(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

/// Random permutation of {0, ..., m-1}.
inline std::vector<int> random_permutation(int m, std::mt19937_64& rng) {
  std::vector<int> p(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) p[static_cast<std::size_t>(i)] = i;
  shuffle(p, rng);
  return p;
}

/// Poisson deviate. Knuth's product method for small means, normal
/// approximation (rounded, clamped at zero) for large ones where the product
/// method would need O(mean) draws.
inline std::uint64_t poisson(std::mt19937_64& rng, double mean) {
  if (mean <= 0.0) return 0;
  if (mean <= 1000.0) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = uniform01(rng);
    while (prod > limit) {
      ++k;
      prod *= uniform01(rng);
    }
    return k;
  }
  const double draw = std::round(mean + std::sqrt(mean) * standard_normal(rng));
  return draw <= 0.0 ? 0 : static_cast<std::uint64_t>(draw);
}

}  // namespace bilevel

#endif
