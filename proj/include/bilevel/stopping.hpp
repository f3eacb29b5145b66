// Certified stopping machinery. From a solver trace and evaluable error
// bounds it computes upper bounds sigma0 (on the best-so-far primary gap
// phi0^k - f0*) and sigma1 (on the windowed secondary gap phi1^{k0,k} - f1*),
// and drives the two-phase stopping procedure built on them.
//
//   sigma0^k = [D^2 + sum_i l_i (rho0(l_i,i) + beta*M*step0_i)
//                   + sum_i m_i (beta*N + rho1(m_i,i))] / (beta * sum_i l_i)
//
//   sigma1^{k0,k} = [D^2 + sum_i l_i (rho0(l_i,i) + beta*M*step0_i)
//                        + sum_i m_i (rho1(m_i,i) + beta*M*step1_i)]
//                   / (beta * sum_i m_i),  sums over i in [k0, k].
//
// sigma1's exact form carries the term [f0* - f0(x_{i+1/3})]_+, which needs
// the unknown optimal value; it is majorized here by M*step0_i (valid since
// f0* <= f0(x_i) and f0 has subgradients bounded by M along the iterates),
// keeping the bound computable from the trace alone.
//
// D bounds the distance from a window start x_{k0} to an optimal point; M
// bounds the subgradients of both objectives along the iterates; N bounds
// the secondary shortfall f1(x*) - f1(x_{i+2/3}) along the run (an upper
// bound of the optimal secondary value minus a lower bound of f1 along the
// secondary sub-iterates suffices).

#ifndef BILEVEL_STOPPING_HPP
#define BILEVEL_STOPPING_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bilevel/trace.hpp"
#include "bilevel/types.hpp"

namespace bilevel {

template <class Scalar>
struct StoppingParams {
  Scalar D;     ///< bound on ||x_{k0} - x*|| over window starts
  Scalar M;     ///< subgradient bound along iterates (both objectives)
  Scalar N;     ///< bound on the shortfall f1(x*) - f1(x_{i+2/3}) along the run
  Scalar beta;  ///< descent-inequality constant shared by both operators
  Scalar eps0;  ///< primary gap target
  Scalar eps1;  ///< secondary gap target

  void validate() const {
    if (!(D > 0) || !(M > 0) || !(N > 0) || !(beta > 0))
      throw std::invalid_argument("StoppingParams: D, M, N, beta must be positive");
  }
};

/// Evaluable error bounds of the two operators, per stepsize and iteration.
template <class Scalar>
struct RhoBounds {
  std::function<Scalar(Scalar, std::size_t)> rho0;
  std::function<Scalar(Scalar, std::size_t)> rho1;

  static RhoBounds zero() {
    return {[](Scalar, std::size_t) { return Scalar(0); },
            [](Scalar, std::size_t) { return Scalar(0); }};
  }
};

/// sigma0 over rows 0..upto (default: the whole trace).
template <class Scalar>
Scalar sigma0(const SolverTrace<Scalar>& trace, const StoppingParams<Scalar>& p,
              const RhoBounds<Scalar>& rho,
              std::size_t upto = std::numeric_limits<std::size_t>::max()) {
  if (trace.empty()) throw std::invalid_argument("sigma0: empty trace");
  p.validate();
  const std::size_t k = upto == std::numeric_limits<std::size_t>::max()
                            ? trace.size() - 1
                            : upto;
  if (k >= trace.size()) throw std::out_of_range("sigma0: index beyond trace");
  Scalar num = p.D * p.D, den = 0;
  for (std::size_t i = 0; i <= k; ++i) {
    const auto& r = trace[i];
    num += r.lambda * (rho.rho0(r.lambda, i) + p.beta * p.M * r.step0_norm);
    num += r.mu * (p.beta * p.N + rho.rho1(r.mu, i));
    den += r.lambda;
  }
  if (den <= Scalar(0))
    throw std::invalid_argument("sigma0: zero primary stepsize weight over window");
  return num / (p.beta * den);
}

/// sigma1 over the window [k0, upto] (default end: the whole trace).
template <class Scalar>
Scalar sigma1(const SolverTrace<Scalar>& trace, std::size_t k0,
              const StoppingParams<Scalar>& p, const RhoBounds<Scalar>& rho,
              std::size_t upto = std::numeric_limits<std::size_t>::max()) {
  if (trace.empty()) throw std::invalid_argument("sigma1: empty trace");
  p.validate();
  const std::size_t k = upto == std::numeric_limits<std::size_t>::max()
                            ? trace.size() - 1
                            : upto;
  if (k >= trace.size()) throw std::out_of_range("sigma1: index beyond trace");
  if (k0 > k) throw std::invalid_argument("sigma1: empty window");
  Scalar num = p.D * p.D, den = 0;
  for (std::size_t i = k0; i <= k; ++i) {
    const auto& r = trace[i];
    num += r.lambda * (rho.rho0(r.lambda, i) + p.beta * p.M * r.step0_norm);
    num += r.mu * (rho.rho1(r.mu, i) + p.beta * p.M * r.step1_norm);
    den += r.mu;
  }
  if (den <= Scalar(0))
    throw std::invalid_argument("sigma1: zero secondary stepsize weight over window");
  return num / (p.beta * den);
}

/// Partial-sum ratios sum(a[0..n]) / sum(b[0..n]); NaN where the b-prefix is
/// all zero.
template <class Scalar>
std::vector<Scalar> ratio_of_sums(const std::vector<Scalar>& a,
                                  const std::vector<Scalar>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("ratio_of_sums: length mismatch");
  std::vector<Scalar> out(a.size());
  Scalar sa = 0, sb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < Scalar(0) || b[i] < Scalar(0))
      throw std::invalid_argument("ratio_of_sums: sequences must be nonnegative");
    sa += a[i];
    sb += b[i];
    out[i] = sb > Scalar(0) ? sa / sb : std::numeric_limits<Scalar>::quiet_NaN();
  }
  return out;
}

template <class Scalar>
struct StoppingResult {
  bool complete = false;
  std::size_t k1 = 0;      ///< returned iterate index (secondary best in window)
  std::size_t k0 = 0;      ///< end of the primary phase
  std::size_t kappa = 0;   ///< start of the accepted secondary window
  std::size_t k_final = 0; ///< last iteration examined
  Scalar sigma0_achieved = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar sigma1_achieved = std::numeric_limits<Scalar>::quiet_NaN();
  std::string reason;      ///< empty on success, else why the run stopped early
};

/// Two-phase certified stopping driven by a resumable solver. `advance` must
/// append exactly one row to `trace` and return false once the iteration
/// budget is exhausted.
///
/// Phase A iterates until sigma0^k <= eps0 and pins k0. Phase B iterates
/// until sigma1^{kappa,k} <= eps1, takes k1 = argmin f1 over [kappa, k], and
/// accepts if f0(x_{k1}) <= phi0^{k0}; otherwise the window restarts at the
/// current iteration. On success the trace row at k1 certifies
/// f0(x_{k1}) - f0* <= eps0 and f1(x_{k1}) - f1* <= eps1.
///
/// Both bounds are accumulated incrementally in row order, so each test
/// reproduces sigma0()/sigma1() on the same window bitwise at O(1) cost per
/// iteration. Rows with an all-zero stepsize prefix, where the bounds are
/// undefined, never pass the tests.
template <class Scalar>
StoppingResult<Scalar> stopping_procedure(const std::function<bool()>& advance,
                                          const SolverTrace<Scalar>& trace,
                                          const StoppingParams<Scalar>& p,
                                          const RhoBounds<Scalar>& rho) {
  p.validate();
  StoppingResult<Scalar> res;
  auto ensure_row = [&](std::size_t k) {
    while (trace.size() <= k)
      if (!advance()) return false;
    return true;
  };

  Scalar num0 = p.D * p.D, den0 = 0;
  std::size_t k = 0;
  for (;;) {
    if (!ensure_row(k)) {
      res.reason = "budget exhausted before sigma0 reached eps0";
      res.k_final = trace.empty() ? 0 : trace.size() - 1;
      return res;
    }
    const auto& r = trace[k];
    num0 += r.lambda * (rho.rho0(r.lambda, k) + p.beta * p.M * r.step0_norm);
    num0 += r.mu * (p.beta * p.N + rho.rho1(r.mu, k));
    den0 += r.lambda;
    if (den0 > Scalar(0)) {
      res.sigma0_achieved = num0 / (p.beta * den0);
      if (res.sigma0_achieved <= p.eps0) break;
    }
    ++k;
  }
  res.k0 = k;
  const Scalar phi0_k0 = trace.phi0(res.k0);

  std::size_t kappa = k;
  Scalar num1 = p.D * p.D, den1 = 0;
  std::size_t accumulated = k;  // rows [kappa, accumulated) are in num1/den1
  for (;;) {
    for (;;) {
      if (!ensure_row(k)) {
        res.kappa = kappa;
        res.k_final = trace.size() - 1;
        res.reason = "budget exhausted before sigma1 reached eps1";
        return res;
      }
      while (accumulated <= k) {
        const auto& r = trace[accumulated];
        num1 += r.lambda *
                (rho.rho0(r.lambda, accumulated) + p.beta * p.M * r.step0_norm);
        num1 += r.mu * (rho.rho1(r.mu, accumulated) + p.beta * p.M * r.step1_norm);
        den1 += r.mu;
        ++accumulated;
      }
      if (den1 > Scalar(0)) {
        res.sigma1_achieved = num1 / (p.beta * den1);
        if (res.sigma1_achieved <= p.eps1) break;
      }
      ++k;
    }
    const std::size_t k1 = trace.argmin_f1(kappa, k);
    if (trace[k1].f0 <= phi0_k0) {
      res.complete = true;
      res.k1 = k1;
      res.kappa = kappa;
      res.k_final = k;
      return res;
    }
    // The window restarts at the current row. Advance before re-testing:
    // a single-row window that passes the sigma1 test but fails the
    // acceptance test would otherwise repeat without progress.
    kappa = k;
    ++k;
    num1 = p.D * p.D;
    den1 = 0;
    accumulated = kappa;
  }
}

}  // namespace bilevel

#endif
