// Poisson measurement simulation through the transmitted-count model
// N_i ~ Poisson(N0 exp(-p_i)), b_i = ln(N0 / N_i), with the source intensity
// N0 calibrated by bisection to hit a requested relative data error.

#ifndef BILEVEL_TOMO_NOISE_HPP
#define BILEVEL_TOMO_NOISE_HPP

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "bilevel/random.hpp"
#include "bilevel/tomo/geometry.hpp"
#include "bilevel/types.hpp"

namespace bilevel::tomo {

/// Outcome of simulate_poisson: the noisy sinogram, the realized l2 relative
/// error ||b - p|| / ||p||, and the calibrated source count.
template <class Scalar>
struct PoissonSimulation {
  Sinogram<Scalar> sinogram;
  double achieved_rel_err = 0.0;
  double n0 = 0.0;
};

/// One noise realization at a fixed source intensity n0: transmitted counts
/// N_i ~ Poisson(n0 exp(-p_i)) become b_i = ln(n0 / N_i). The generator is
/// re-seeded on entry, so for a fixed seed the result is a deterministic
/// function of (clean, n0). Zero counts are clamped to one photon so the log
/// stays finite.
template <class Scalar>
PoissonSimulation<Scalar> poisson_realization(const Sinogram<Scalar>& clean, double n0,
                                              std::uint64_t seed) {
  if (!(n0 > 0.0) || !std::isfinite(n0))
    throw std::invalid_argument("poisson_realization: n0 must be positive and finite");
  if ((clean.data.array() < Scalar(0)).any())
    throw std::invalid_argument("poisson_realization: sinogram must be nonnegative");
  const double p_norm = static_cast<double>(clean.data.norm());
  if (p_norm <= 0.0)
    throw std::invalid_argument("poisson_realization: sinogram norm is zero");

  std::mt19937_64 rng(seed);
  const double log_n0 = std::log(n0);
  Vec<Scalar> b(clean.data.size());
  for (Index i = 0; i < clean.data.size(); ++i) {
    const double mean = n0 * std::exp(-static_cast<double>(clean.data[i]));
    std::uint64_t counts = poisson(rng, mean);
    if (counts == 0) counts = 1;
    b[i] = static_cast<Scalar>(log_n0 - std::log(static_cast<double>(counts)));
  }
  PoissonSimulation<Scalar> out;
  out.achieved_rel_err = static_cast<double>((b - clean.data).norm()) / p_norm;
  out.sinogram = Sinogram<Scalar>(clean.geom, std::move(b));
  out.n0 = n0;
  return out;
}

/// Simulates Poisson counting noise on a nonnegative sinogram `clean` and
/// returns log-transformed data whose l2 relative error is within +-10% of
/// `target_rel_err`. The source intensity N0 is found by bisection on its
/// exponent over N0 in [10^0, 10^16]; every candidate re-seeds the generator,
/// so the returned sinogram is a bitwise-reproducible function of
/// (clean, target_rel_err, seed). Throws if the target lies outside the error
/// range achievable within the N0 bounds, naming that range.
template <class Scalar>
PoissonSimulation<Scalar> simulate_poisson(const Sinogram<Scalar>& clean,
                                           double target_rel_err, std::uint64_t seed) {
  if (!(target_rel_err > 0.0 && target_rel_err < 1.0))
    throw std::invalid_argument("simulate_poisson: target_rel_err must lie in (0, 1)");
  if ((clean.data.array() < Scalar(0)).any())
    throw std::invalid_argument("simulate_poisson: sinogram must be nonnegative");
  const double p_norm = static_cast<double>(clean.data.norm());
  if (p_norm <= 0.0)
    throw std::invalid_argument("simulate_poisson: sinogram norm is zero");

  const double tol = 0.1 * target_rel_err;
  double lo_exp = 0.0, hi_exp = 16.0;

  // The error decreases in N0, so the achievable range is bracketed by the
  // exponent bounds.
  auto at_hi = poisson_realization(clean, std::pow(10.0, hi_exp), seed);
  auto at_lo = poisson_realization(clean, std::pow(10.0, lo_exp), seed);
  const double err_min = at_hi.achieved_rel_err, err_max = at_lo.achieved_rel_err;
  if (target_rel_err < err_min - tol || target_rel_err > err_max + tol) {
    std::ostringstream msg;
    msg << "simulate_poisson: target relative error " << target_rel_err
        << " unreachable; achievable range is [" << err_min << ", " << err_max
        << "] for N0 in [1e0, 1e16]";
    throw std::runtime_error(msg.str());
  }
  if (std::abs(err_max - target_rel_err) <= tol) return at_lo;
  if (std::abs(err_min - target_rel_err) <= tol) return at_hi;

  for (int it = 0; it < 200; ++it) {
    const double mid_exp = 0.5 * (lo_exp + hi_exp);
    auto cand = poisson_realization(clean, std::pow(10.0, mid_exp), seed);
    if (std::abs(cand.achieved_rel_err - target_rel_err) <= tol) return cand;
    if (cand.achieved_rel_err > target_rel_err)
      lo_exp = mid_exp;
    else
      hi_exp = mid_exp;
  }
  std::ostringstream msg;
  msg << "simulate_poisson: bisection failed to settle within +-10% of "
      << target_rel_err << "; achievable range is [" << err_min << ", " << err_max
      << "]";
  throw std::runtime_error(msg.str());
}

}  // namespace bilevel::tomo

#endif
