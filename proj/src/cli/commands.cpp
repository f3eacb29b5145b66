#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bilevel/objectives.hpp"
#include "bilevel/operator.hpp"
#include "bilevel/operators.hpp"
#include "bilevel/random.hpp"
#include "bilevel/run.hpp"
#include "bilevel/schedule.hpp"
#include "bilevel/solvers/calibrate.hpp"
#include "bilevel/solvers/fiba.hpp"
#include "bilevel/solvers/fista.hpp"
#include "bilevel/solvers/iiba.hpp"
#include "bilevel/tomo/geometry.hpp"
#include "bilevel/tomo/io.hpp"
#include "bilevel/tomo/noise.hpp"
#include "bilevel/tomo/phantom.hpp"
#include "bilevel/tomo/siddon.hpp"
#include "bilevel/trace.hpp"
#include "bilevel/transforms.hpp"
#include "bilevel/tv.hpp"
#include "bilevel/types.hpp"

namespace ctcli {
namespace {

namespace tomo = bilevel::tomo;
using bilevel::Index;
using bilevel::Vec;
using Model = bilevel::LinearResidualModel<double>;

std::string out_path(const ExperimentConfig& config, const std::string& name) {
  return (std::filesystem::path(config.output.directory) / name).string();
}

void ensure_out_dir(const ExperimentConfig& config) {
  std::filesystem::create_directories(config.output.directory);
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

/// CSV field with quoting, for free-text cells such as abort reasons.
std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += '"';
  return out;
}

/// Contiguous angle stripes expressed as row offsets; the first
/// n_angles % s stripes hold one extra angle.
std::vector<Index> angle_stripe_offsets(Index n_angles, Index n_det, long s) {
  std::vector<Index> offsets(static_cast<std::size_t>(s) + 1, 0);
  const Index base = n_angles / s;
  const Index extra = n_angles % s;
  Index angle = 0;
  for (long i = 0; i < s; ++i) {
    angle += base + (i < extra ? 1 : 0);
    offsets[static_cast<std::size_t>(i) + 1] = angle * n_det;
  }
  return offsets;
}

struct Testbed {
  tomo::Geometry geom;
  bilevel::Image<double> phantom;
  Eigen::SparseMatrix<double, Eigen::RowMajor> R;
  tomo::Sinogram<double> clean;
  tomo::Sinogram<double> noisy;
  double n0 = 0.0;
  double achieved_rel_err = 0.0;
};

Testbed build_testbed(const ExperimentConfig& config) {
  const TestbedConfig& t = config.testbed;
  Testbed tb;
  tb.geom = tomo::Geometry(t.n_angles, t.n_det);
  tb.phantom = tomo::shepp_logan<double>(t.side);
  tb.R = tomo::radon_matrix<double>(tb.geom, t.side);
  tb.clean = tomo::Sinogram<double>(tb.geom, Vec<double>(tb.R * tb.phantom.data));
  if (t.noise_target > 0.0) {
    auto sim = tomo::simulate_poisson(tb.clean, t.noise_target, t.seed);
    tb.noisy = std::move(sim.sinogram);
    tb.n0 = sim.n0;
    tb.achieved_rel_err = sim.achieved_rel_err;
  } else {
    tb.noisy = tb.clean;
  }
  return tb;
}

std::shared_ptr<Model> make_model(const Testbed& tb, long subsets) {
  return std::make_shared<Model>(
      tb.R, tb.noisy.data,
      angle_stripe_offsets(tb.geom.n_angles, tb.geom.n_det, subsets));
}

/// The bilevel problem plus everything its closures reference.
struct Assembled {
  std::shared_ptr<Model> model;
  std::shared_ptr<bilevel::HaarTransform2D<double>> haar;
  bilevel::BilevelProblem<double> problem;
  bilevel::OptimalityOperator<double> op1;
  bool has_secondary = false;
  long tv_steps = 0;
};

Assembled assemble(const ExperimentConfig& config, std::shared_ptr<Model> model,
                   const std::string& method) {
  const ProblemConfig& p = config.problem;
  const Index side = config.testbed.side;
  Assembled a;
  a.model = std::move(model);
  bilevel::BilevelProblem<double>& prob = a.problem;

  if (p.primary == "lsq-huber") {
    const auto params =
        bilevel::huber_setup(*a.model, Vec<double>(Vec<double>::Zero(a.model->cols())));
    prob.f0_value = [m = a.model, params](const Vec<double>& x) {
      return bilevel::huber_value(*m, params, x);
    };
    prob.f0_subgrad = [m = a.model, params](const Vec<double>& x) {
      return bilevel::huber_grad(*m, params, x);
    };
    prob.f0_components = bilevel::lsq_component_oracle(*a.model);
  } else {
    prob.f0_value = [m = a.model](const Vec<double>& x) {
      return bilevel::l1_value(*m, x);
    };
    prob.f0_subgrad = [m = a.model](const Vec<double>& x) {
      return bilevel::l1_subgrad(*m, x);
    };
    prob.f0_components = bilevel::l1_component_oracle(*a.model);
  }

  const Index n = a.model->cols();
  if (p.secondary == "haar") {
    a.haar = std::make_shared<bilevel::HaarTransform2D<double>>(side);
    prob.f1_value = [H = a.haar](const Vec<double>& x) {
      return H->forward(x).lpNorm<1>();
    };
    a.op1 = bilevel::make_synthesis_prox_operator<double>(*a.haar, n);
    a.has_secondary = true;
  } else if (p.secondary == "tv") {
    a.tv_steps = config.solver.tv_steps > 0 ? config.solver.tv_steps
                                            : (method == "fiba" ? 10 : 5);
    prob.f1_value = [side](const Vec<double>& x) { return bilevel::tv_value(x, side); };
    const double bound = bilevel::tv_subgrad_bound<double>(n);
    auto base = bilevel::make_subgrad_operator<double>(
        [side](const Vec<double>& x) { return bilevel::tv_subgrad(x, side); }, bound);
    a.op1 = bilevel::make_iterated_operator<double>(std::move(base),
                                                    static_cast<int>(a.tv_steps), bound);
    a.has_secondary = true;
  } else {
    prob.f1_value = [](const Vec<double>&) { return 0.0; };
    a.op1 = bilevel::identity_operator<double>();
    a.has_secondary = false;
  }

  if (p.constraint == "nonneg")
    prob.project = bilevel::make_nonneg_projector<double>();
  else if (p.constraint == "box")
    prob.project = bilevel::make_box_projector<double>(p.box_lo, p.box_hi);
  else
    prob.project = bilevel::make_identity_projector<double>();
  return a;
}

Vec<double> resolve_start(const ExperimentConfig& config, const Assembled& a,
                          const std::string& method) {
  std::string kind = config.solver.start;
  if (kind.empty()) kind = (method == "iiba" || method == "inc") ? "consistent" : "zero";
  const Vec<double> raw = kind == "consistent"
                              ? bilevel::consistent_start(*a.model)
                              : Vec<double>(Vec<double>::Zero(a.model->cols()));
  return a.problem.project(raw);
}

/// Halving ladder on the squared residual of a short momentum run: the
/// largest stepsize in {start, start/2, ...} whose first probe_iters
/// objective values never increase. A probe run that leaves the finite range
/// counts as increasing.
double ladder_lambda(const Model& model, const Vec<double>& x0, long probe_iters) {
  const bilevel::IdentityTransform<double> id;
  auto probe = [&](double lambda) -> std::vector<double> {
    std::vector<double> values;
    try {
      const auto run = bilevel::run_fista(model, 0.0, id, std::nullopt, lambda, x0,
                                          probe_iters + 1);
      values.reserve(run.trace.rows().size());
      for (const auto& row : run.trace.rows()) values.push_back(row.f0);
    } catch (const std::runtime_error&) {
      return {0.0, 1.0};
    }
    return values;
  };
  return bilevel::choose_lambda<double>(probe, 2.0);
}

double formula_lambda(const bilevel::BilevelProblem<double>& problem,
                      const Vec<double>& x0, double alpha, double s) {
  const double f0 = problem.f0_value(x0);
  const double g0_sq = problem.f0_subgrad(x0).squaredNorm();
  if (!(g0_sq > 0.0))
    throw std::runtime_error("automatic stepsize: zero subgradient at the start point");
  return alpha * s * f0 / g0_sq;
}

struct ResolvedSchedules {
  bilevel::StepSchedule<double> lambda;
  bilevel::StepSchedule<double> mu;
  bilevel::StepSchedule<double> zeta;
  double lambda_base = 0.0;
  double lambda_exp = 0.0;
  double mu_base = 0.0;
  double mu_exp = 0.0;
};

ResolvedSchedules resolve_schedules(const ExperimentConfig& config, const Assembled& a,
                                    const std::string& method, const Vec<double>& x0) {
  const SolverConfig& s = config.solver;
  ResolvedSchedules r;

  if (method == "fista") {
    r.lambda_exp = 0.0;
    r.lambda_base =
        s.lambda > 0.0 ? s.lambda : ladder_lambda(*a.model, x0, s.probe_iters);
  } else if (method == "fiba") {
    r.lambda_exp = s.lambda_exponent >= 0.0 ? s.lambda_exponent : 0.1;
    if (s.lambda > 0.0)
      r.lambda_base = s.lambda;
    else if (config.problem.primary == "lsq-huber")
      r.lambda_base = ladder_lambda(*a.model, x0, s.probe_iters);
    else
      r.lambda_base = formula_lambda(a.problem, x0, s.alpha, 1.0);
  } else {
    if (s.lambda > 0.0) {
      r.lambda_base = s.lambda;
      r.lambda_exp = s.lambda_exponent >= 0.0 ? s.lambda_exponent : 0.7;
    } else if (s.grid_search) {
      bilevel::GridSearchParams<double> params;
      params.budget = s.grid_budget;
      const auto best =
          bilevel::grid_search_lambda(a.problem, params, x0, config.testbed.seed);
      r.lambda_base = best.lambda_base;
      r.lambda_exp = best.epsilon;
    } else {
      r.lambda_base = formula_lambda(a.problem, x0, s.alpha,
                                     static_cast<double>(a.model->subsets()));
      r.lambda_exp = s.lambda_exponent >= 0.0 ? s.lambda_exponent : 0.7;
    }
  }

  const bool wants_secondary =
      a.has_secondary && (method == "fiba" || method == "iiba");
  if (wants_secondary) {
    r.mu_exp = s.mu_exponent >= 0.0 ? s.mu_exponent
                                    : (method == "fiba" ? 1.0 : r.lambda_exp + 0.1);
    if (s.mu > 0.0) {
      r.mu_base = s.mu;
    } else {
      const double ratio =
          s.mu_ratio > 0.0 ? s.mu_ratio : (method == "fiba" ? 1e-2 : 1e-1);
      std::function<Vec<double>(double, const Vec<double>&)> primary_step;
      if (method == "fiba") {
        primary_step = [&a](double lambda, const Vec<double>& x) {
          return a.problem.project(Vec<double>(x - lambda * a.problem.f0_subgrad(x)));
        };
      } else {
        // The tentative sweep uses the same first permutation the run will
        // draw from this seed.
        std::mt19937_64 rng(config.testbed.seed);
        const std::vector<int> order =
            bilevel::random_permutation(a.problem.f0_components->m, rng);
        primary_step = [&a, order](double lambda, const Vec<double>& x) {
          return bilevel::incremental_subgrad(*a.problem.f0_components, lambda, x, order);
        };
      }
      r.mu_base =
          bilevel::calibrate_mu<double>(primary_step, a.op1, r.lambda_base, x0, ratio);
    }
  }

  r.lambda = bilevel::StepSchedule<double>(r.lambda_base, r.lambda_exp);
  r.mu = wants_secondary ? bilevel::StepSchedule<double>(r.mu_base, r.mu_exp)
                         : bilevel::StepSchedule<double>::zero();
  r.zeta = bilevel::StepSchedule<double>(s.zeta_base, s.zeta_exponent);
  return r;
}

struct MethodRun {
  std::string method;
  double gamma = 0.0;
  long subsets = 1;
  ResolvedSchedules sched;
  bilevel::SolverTrace<double> trace;
  std::vector<double> rel_errors;
  Vec<double> x;
  std::string status = "ok";
};

MethodRun run_method(const ExperimentConfig& config, const Testbed& tb,
                     std::shared_ptr<Model> model, const std::string& method,
                     double gamma) {
  const SolverConfig& s = config.solver;
  MethodRun out;
  out.method = method;
  out.gamma = gamma;
  Assembled a = assemble(config, std::move(model), method);
  out.subsets = a.model->subsets();
  const Vec<double> x0 = resolve_start(config, a, method);
  out.sched = resolve_schedules(config, a, method, x0);
  const Vec<double>* reference = &tb.phantom.data;

  if (method == "fiba") {
    auto res = bilevel::run_fiba(a.problem, a.op1, out.sched.lambda, out.sched.mu,
                                 out.sched.zeta, x0, s.max_iter, std::nullopt, reference);
    out.trace = std::move(res.trace);
    out.rel_errors = std::move(res.rel_errors);
    out.x = std::move(res.x);
  } else if (method == "iiba") {
    auto res = bilevel::run_iiba(a.problem, a.op1, out.sched.lambda, out.sched.mu, x0,
                                 s.max_iter, config.testbed.seed, reference);
    out.trace = std::move(res.trace);
    out.rel_errors = std::move(res.rel_errors);
    out.x = std::move(res.x);
  } else if (method == "inc") {
    auto res = bilevel::run_inc(a.problem, out.sched.lambda, x0, s.max_iter,
                                config.testbed.seed, reference);
    out.trace = std::move(res.trace);
    out.rel_errors = std::move(res.rel_errors);
    out.x = std::move(res.x);
  } else {
    std::optional<bilevel::Projector<double>> projector;
    if (gamma == 0.0 && config.problem.constraint != "none")
      projector = a.problem.project;
    if (a.haar) {
      auto res = bilevel::run_fista(*a.model, gamma, *a.haar, projector,
                                    out.sched.lambda_base, x0, s.max_iter, reference);
      out.trace = std::move(res.trace);
      out.rel_errors = std::move(res.rel_errors);
      out.x = std::move(res.x);
    } else {
      const bilevel::IdentityTransform<double> id;
      auto res = bilevel::run_fista(*a.model, gamma, id, projector,
                                    out.sched.lambda_base, x0, s.max_iter, reference);
      out.trace = std::move(res.trace);
      out.rel_errors = std::move(res.rel_errors);
      out.x = std::move(res.x);
    }
  }
  return out;
}

MethodRun run_method_guarded(const ExperimentConfig& config, const Testbed& tb,
                             std::shared_ptr<Model> model, const std::string& method,
                             double gamma) {
  try {
    return run_method(config, tb, std::move(model), method, gamma);
  } catch (const std::exception& e) {
    MethodRun failed;
    failed.method = method;
    failed.gamma = gamma;
    failed.subsets = config.solver.subsets;
    failed.status = e.what();
    return failed;
  }
}

std::size_t argmin(const std::vector<double>& v) {
  return static_cast<std::size_t>(
      std::min_element(v.begin(), v.end()) - v.begin());
}

void write_rel_error_csv(const std::vector<double>& rel_errors, const std::string& path) {
  auto out = open_csv(path);
  out << "k,rel_error\n";
  for (std::size_t k = 0; k < rel_errors.size(); ++k)
    out << k << ',' << bilevel::format_g17(rel_errors[k]) << '\n';
}

void write_phase_plane_csv(const std::vector<MethodRun>& runs, const std::string& path) {
  auto out = open_csv(path);
  out << "method,gamma,subsets,k,f0,f1,rel_error\n";
  for (const MethodRun& run : runs) {
    const std::string gamma = run.method == "fista" ? bilevel::format_g17(run.gamma) : "";
    const auto& rows = run.trace.rows();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out << run.method << ',' << gamma << ',' << run.subsets << ',' << rows[i].k << ','
          << bilevel::format_g17(rows[i].f0) << ',' << bilevel::format_g17(rows[i].f1)
          << ','
          << (i < run.rel_errors.size() ? bilevel::format_g17(run.rel_errors[i]) : "")
          << '\n';
    }
  }
}

/// Minimum secondary value among iterates whose primary value is at most
/// `level`; empty when no iterate qualifies.
std::optional<double> best_f1_at_level(const bilevel::SolverTrace<double>& trace,
                                       double level) {
  std::optional<double> best;
  for (const auto& row : trace.rows())
    if (row.f0 <= level && (!best || row.f1 < *best)) best = row.f1;
  return best;
}

struct MatchedGrid {
  std::vector<double> levels;
  std::vector<double> f1_a;
  std::vector<double> f1_b;
  double win_fraction_a = std::numeric_limits<double>::quiet_NaN();
};

/// Matched-primary comparison: 40 evenly spaced primary levels over the
/// intersection of the two runs' achieved f0 ranges; at each level the
/// methods are compared by the least secondary value among iterates whose f0
/// is at most that level.
MatchedGrid matched_f0_grid(const bilevel::SolverTrace<double>& a,
                            const bilevel::SolverTrace<double>& b) {
  constexpr int kLevels = 40;
  MatchedGrid grid;
  if (a.rows().empty() || b.rows().empty()) return grid;
  auto range = [](const bilevel::SolverTrace<double>& t) {
    double lo = t.rows().front().f0, hi = lo;
    for (const auto& row : t.rows()) {
      lo = std::min(lo, row.f0);
      hi = std::max(hi, row.f0);
    }
    return std::pair<double, double>(lo, hi);
  };
  const auto [lo_a, hi_a] = range(a);
  const auto [lo_b, hi_b] = range(b);
  const double lo = std::max(lo_a, lo_b) * 1.001;
  const double hi = std::min(hi_a, hi_b) * 0.999;
  if (!(hi > lo)) return grid;
  long wins = 0, total = 0;
  for (int i = 0; i < kLevels; ++i) {
    const double level = lo + (hi - lo) * static_cast<double>(i) / (kLevels - 1);
    const auto best_a = best_f1_at_level(a, level);
    const auto best_b = best_f1_at_level(b, level);
    if (!best_a || !best_b) continue;
    grid.levels.push_back(level);
    grid.f1_a.push_back(*best_a);
    grid.f1_b.push_back(*best_b);
    ++total;
    if (*best_a < *best_b) ++wins;
  }
  if (total > 0) grid.win_fraction_a = static_cast<double>(wins) / total;
  return grid;
}

void write_summary_csv(const std::vector<MethodRun>& runs,
                       const std::vector<std::string>& win_fractions,
                       const std::string& path) {
  auto out = open_csv(path);
  out << "method,gamma,subsets,lambda_base,lambda_exponent,mu_base,mu_exponent,"
         "best_rel_error,best_rel_error_k,min_f0,final_f0,final_f1,"
         "matched_win_fraction,status\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const MethodRun& run = runs[i];
    out << run.method << ','
        << (run.method == "fista" ? bilevel::format_g17(run.gamma) : "") << ','
        << run.subsets << ',';
    if (run.status == "ok") {
      double min_f0 = run.trace.rows().front().f0;
      for (const auto& row : run.trace.rows()) min_f0 = std::min(min_f0, row.f0);
      const std::size_t best_k = argmin(run.rel_errors);
      out << bilevel::format_g17(run.sched.lambda_base) << ','
          << bilevel::format_g17(run.sched.lambda_exp) << ','
          << bilevel::format_g17(run.sched.mu_base) << ','
          << bilevel::format_g17(run.sched.mu_exp) << ','
          << bilevel::format_g17(run.rel_errors[best_k]) << ',' << best_k << ','
          << bilevel::format_g17(min_f0) << ','
          << bilevel::format_g17(run.trace.rows().back().f0) << ','
          << bilevel::format_g17(run.trace.rows().back().f1) << ','
          << (i < win_fractions.size() ? win_fractions[i] : "") << ",ok\n";
    } else {
      out << ",,,,,,,,," << csv_quote(run.status) << '\n';
    }
  }
}

void print_run(const MethodRun& run) {
  std::cout << "method = " << run.method;
  if (run.method == "fista") std::cout << ", gamma = " << run.gamma;
  if (run.method == "iiba" || run.method == "inc")
    std::cout << ", subsets = " << run.subsets;
  std::cout << '\n';
  if (run.status != "ok") {
    std::cout << "  aborted: " << run.status << '\n';
    return;
  }
  std::cout << "  lambda = " << bilevel::format_g17(run.sched.lambda_base)
            << " / (k+1)^" << bilevel::format_g17(run.sched.lambda_exp) << '\n';
  if (run.sched.mu_base > 0.0)
    std::cout << "  mu = " << bilevel::format_g17(run.sched.mu_base) << " / (k+1)^"
              << bilevel::format_g17(run.sched.mu_exp) << '\n';
  const std::size_t best_k = argmin(run.rel_errors);
  std::cout << "  final f0 = " << bilevel::format_g17(run.trace.rows().back().f0)
            << ", final f1 = " << bilevel::format_g17(run.trace.rows().back().f1)
            << '\n'
            << "  best rel error = " << bilevel::format_g17(run.rel_errors[best_k])
            << " at k = " << best_k << '\n';
}

}  // namespace

int cmd_phantom(const ExperimentConfig& config) {
  ensure_out_dir(config);
  const auto phantom = tomo::shepp_logan<double>(config.testbed.side);
  tomo::write_image(phantom, out_path(config, "phantom.bimg"));
  tomo::write_pgm16(phantom, out_path(config, "phantom.pgm"));
  std::cout << "wrote " << out_path(config, "phantom.bimg") << " and "
            << out_path(config, "phantom.pgm") << " (side " << config.testbed.side
            << ")\n";
  return 0;
}

int cmd_project(const ExperimentConfig& config) {
  ensure_out_dir(config);
  const Testbed tb = build_testbed(config);
  tomo::write_sinogram(tb.clean, out_path(config, "sinogram_clean.bsin"));
  tomo::write_sinogram(tb.noisy, out_path(config, "sinogram.bsin"));
  std::cout << "wrote " << out_path(config, "sinogram_clean.bsin") << " and "
            << out_path(config, "sinogram.bsin") << '\n';
  if (config.testbed.noise_target > 0.0)
    std::cout << "noise: n0 = " << bilevel::format_g17(tb.n0)
              << ", achieved rel error = "
              << bilevel::format_g17(tb.achieved_rel_err) << '\n';
  else
    std::cout << "noise: disabled\n";
  return 0;
}

int cmd_reconstruct(const ExperimentConfig& config) {
  ensure_out_dir(config);
  const Testbed tb = build_testbed(config);
  const MethodRun run = run_method(config, tb, make_model(tb, config.solver.subsets),
                                   config.solver.method, config.solver.gamma);
  bilevel::write_csv(run.trace, out_path(config, "trace.csv"));
  write_rel_error_csv(run.rel_errors, out_path(config, "rel_error.csv"));
  const bilevel::Image<double> recon(config.testbed.side, run.x);
  tomo::write_image(recon, out_path(config, "reconstruction.bimg"));
  tomo::write_pgm16(recon, out_path(config, "reconstruction.pgm"));
  std::cout << "wrote " << out_path(config, "trace.csv") << ", "
            << out_path(config, "rel_error.csv") << ", "
            << out_path(config, "reconstruction.bimg") << ", "
            << out_path(config, "reconstruction.pgm") << '\n';
  print_run(run);
  return 0;
}

int cmd_compare(const ExperimentConfig& config) {
  ensure_out_dir(config);
  const Testbed tb = build_testbed(config);
  std::vector<MethodRun> runs;
  std::vector<std::string> win_fractions;

  if (config.solver.compare == "classic") {
    runs.push_back(run_method_guarded(config, tb, make_model(tb, config.solver.subsets),
                                      "fiba", 0.0));
    for (const double gamma : config.solver.gamma_grid)
      runs.push_back(run_method_guarded(config, tb, make_model(tb, 1), "fista", gamma));
    win_fractions.assign(runs.size(), "");
  } else {
    auto matched = open_csv(out_path(config, "matched_f0.csv"));
    matched << "subsets,level,f0_level,f1_iiba,f1_inc\n";
    for (const long s : config.solver.subset_grid) {
      MethodRun iiba = run_method_guarded(config, tb, make_model(tb, s), "iiba", 0.0);
      MethodRun inc = run_method_guarded(config, tb, make_model(tb, s), "inc", 0.0);
      std::string fraction;
      if (iiba.status == "ok" && inc.status == "ok") {
        const MatchedGrid grid = matched_f0_grid(iiba.trace, inc.trace);
        for (std::size_t i = 0; i < grid.levels.size(); ++i)
          matched << s << ',' << i << ',' << bilevel::format_g17(grid.levels[i]) << ','
                  << bilevel::format_g17(grid.f1_a[i]) << ','
                  << bilevel::format_g17(grid.f1_b[i]) << '\n';
        if (!std::isnan(grid.win_fraction_a))
          fraction = bilevel::format_g17(grid.win_fraction_a);
      }
      runs.push_back(std::move(iiba));
      win_fractions.push_back(fraction);
      runs.push_back(std::move(inc));
      win_fractions.emplace_back();
    }
    std::cout << "wrote " << out_path(config, "matched_f0.csv") << '\n';
  }

  write_phase_plane_csv(runs, out_path(config, "phase_plane.csv"));
  write_summary_csv(runs, win_fractions, out_path(config, "summary.csv"));
  std::cout << "wrote " << out_path(config, "phase_plane.csv") << " and "
            << out_path(config, "summary.csv") << '\n';
  for (const MethodRun& run : runs) print_run(run);
  return 0;
}

}  // namespace ctcli
