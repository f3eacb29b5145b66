// Experiment configuration: a sectioned key/value text file mapped onto one
// struct per section, with validation errors that name the offending field by
// its dotted path (section.key).

#ifndef CTCLI_CONFIG_HPP
#define CTCLI_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctcli {

/// Invalid configuration contents. The message starts with the dotted path
/// of the offending field (for example "testbed.side: must be >= 2").
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

/// Phantom discretization, acquisition geometry, and noise simulation.
struct TestbedConfig {
  long side = 128;
  long n_angles = 64;
  long n_det = 128;
  /// Target l2 relative error of the simulated noisy sinogram; 0 disables
  /// noise and reconstructs from clean data.
  double noise_target = 0.1;
  std::uint64_t seed = 1;
};

/// Objectives and the feasible set of the bilevel problem.
struct ProblemConfig {
  /// "lsq-huber" (Huber data fidelity, least-squares row split for the
  /// incremental methods) or "l1" (l1 data fidelity, angle-stripe split).
  std::string primary = "lsq-huber";
  /// "haar" (l1 norm of the orthonormal Haar coefficients, synthesis prox),
  /// "tv" (periodic isotropic total variation, iterated subgradient
  /// operator), or "none".
  std::string secondary = "haar";
  /// "none", "nonneg", or "box".
  std::string constraint = "none";
  double box_lo = 0.0;
  double box_hi = 1.0;
};

/// Method selection and schedule parameters. Zero or negative sentinel
/// values select the per-method defaults documented next to each field.
struct SolverConfig {
  /// "fiba", "iiba", "inc", or "fista".
  std::string method = "fiba";
  /// Base primary stepsize; 0 picks it automatically (halving ladder on the
  /// squared residual for fiba/fista with the smooth fidelity, the
  /// alpha * s * f0(x0) / ||g0||^2 scale otherwise).
  double lambda = 0.0;
  /// Decay exponent of lambda_k; negative picks the per-method default
  /// (0.1 for fiba, 0.7 for iiba/inc, 0 for fista).
  double lambda_exponent = -1.0;
  /// Base secondary stepsize; 0 calibrates it from the first-iteration
  /// displacement ratio.
  double mu = 0.0;
  /// Decay exponent of mu_k; negative picks the per-method default
  /// (1.0 for fiba, lambda_exponent + 0.1 for iiba).
  double mu_exponent = -1.0;
  /// Target ratio ||x_{1/3} - x_{2/3}|| / ||x_0 - x_{1/3}|| of the automatic
  /// mu calibration; 0 picks the per-method default (1e-2 fiba, 1e-1 iiba).
  double mu_ratio = 0.0;
  /// Freeze threshold schedule zeta_k = zeta_base / (k+1)^zeta_exponent.
  double zeta_base = 1e6;
  double zeta_exponent = 0.1;
  /// Fraction of the f0(x0) / ||g0||^2 scale used when lambda is derived by
  /// formula rather than by ladder or grid search.
  double alpha = 0.5;
  /// Row subsets of the incremental sweep (contiguous angle stripes).
  long subsets = 1;
  /// Inner iterations of the iterated TV operator; 0 picks the per-method
  /// default (10 for fiba, 5 for iiba/inc).
  long tv_steps = 0;
  /// Synthesis weight of the one-level run (fista only).
  double gamma = 0.0;
  /// Gamma values compared by the classic comparison.
  std::vector<double> gamma_grid = {100.0, 10.0, 1.5, 1.0, 0.0};
  long max_iter = 400;
  /// Window length of the stepsize ladder probe.
  long probe_iters = 20;
  /// iiba/inc: search (alpha, exponent) over the standard grid instead of
  /// using the alpha/lambda_exponent fields directly.
  bool grid_search = false;
  long grid_budget = 10;
  /// Start point: "zero" or "consistent"; empty picks the per-method default
  /// (zero for fiba/fista, consistent for iiba/inc).
  std::string start = "";
  /// Comparison flavor: "classic" (bilevel vs the gamma grid of one-level
  /// runs) or "incremental" (iiba vs inc across subset counts).
  std::string compare = "classic";
  /// Subset counts visited by the incremental comparison.
  std::vector<long> subset_grid = {1, 4, 16};
};

struct OutputConfig {
  std::string directory = "out";
};

struct ExperimentConfig {
  TestbedConfig testbed;
  ProblemConfig problem;
  SolverConfig solver;
  OutputConfig output;
};

/// Parses sectioned key/value text ([testbed] / [problem] / [solver] /
/// [output]; '#' or ';' start a comment line). Unknown sections or keys and
/// malformed values throw ConfigError naming the field.
ExperimentConfig parse_config_text(const std::string& text);

/// Reads and parses a configuration file. Throws ConfigError on malformed
/// contents, std::runtime_error when the file cannot be read.
ExperimentConfig parse_config_file(const std::string& path);

/// Cross-field validation; throws ConfigError naming the offending field.
void validate(const ExperimentConfig& config);

}  // namespace ctcli

#endif
