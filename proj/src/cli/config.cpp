#include "cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

namespace ctcli {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& path, const std::string& raw) {
  const std::string v = trim(raw);
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    throw ConfigError(path + ": cannot parse '" + raw + "' as a number");
  return value;
}

long parse_long(const std::string& path, const std::string& raw) {
  const std::string v = trim(raw);
  errno = 0;
  char* end = nullptr;
  const long value = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    throw ConfigError(path + ": cannot parse '" + raw + "' as an integer");
  return value;
}

std::uint64_t parse_u64(const std::string& path, const std::string& raw) {
  const std::string v = trim(raw);
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || v[0] == '-' || end != v.c_str() + v.size() || errno == ERANGE)
    throw ConfigError(path + ": cannot parse '" + raw + "' as an unsigned integer");
  return static_cast<std::uint64_t>(value);
}

bool parse_bool(const std::string& path, const std::string& raw) {
  std::string v = trim(raw);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(path + ": cannot parse '" + raw + "' as a boolean");
}

std::vector<std::string> split_list(const std::string& raw) {
  std::string v = raw;
  std::replace(v.begin(), v.end(), ',', ' ');
  std::istringstream in(v);
  return {std::istream_iterator<std::string>(in), std::istream_iterator<std::string>()};
}

std::vector<double> parse_double_list(const std::string& path, const std::string& raw) {
  std::vector<double> out;
  for (const std::string& item : split_list(raw)) out.push_back(parse_double(path, item));
  if (out.empty()) throw ConfigError(path + ": empty list");
  return out;
}

std::vector<long> parse_long_list(const std::string& path, const std::string& raw) {
  std::vector<long> out;
  for (const std::string& item : split_list(raw)) out.push_back(parse_long(path, item));
  if (out.empty()) throw ConfigError(path + ": empty list");
  return out;
}

void assign_testbed(TestbedConfig& t, const std::string& key, const std::string& value) {
  const std::string path = "testbed." + key;
  if (key == "side")
    t.side = parse_long(path, value);
  else if (key == "n_angles")
    t.n_angles = parse_long(path, value);
  else if (key == "n_det")
    t.n_det = parse_long(path, value);
  else if (key == "noise_target")
    t.noise_target = parse_double(path, value);
  else if (key == "seed")
    t.seed = parse_u64(path, value);
  else
    throw ConfigError(path + ": unknown key");
}

void assign_problem(ProblemConfig& p, const std::string& key, const std::string& value) {
  const std::string path = "problem." + key;
  if (key == "primary")
    p.primary = trim(value);
  else if (key == "secondary")
    p.secondary = trim(value);
  else if (key == "constraint")
    p.constraint = trim(value);
  else if (key == "box_lo")
    p.box_lo = parse_double(path, value);
  else if (key == "box_hi")
    p.box_hi = parse_double(path, value);
  else
    throw ConfigError(path + ": unknown key");
}

void assign_solver(SolverConfig& s, const std::string& key, const std::string& value) {
  const std::string path = "solver." + key;
  if (key == "method")
    s.method = trim(value);
  else if (key == "lambda")
    s.lambda = parse_double(path, value);
  else if (key == "lambda_exponent")
    s.lambda_exponent = parse_double(path, value);
  else if (key == "mu")
    s.mu = parse_double(path, value);
  else if (key == "mu_exponent")
    s.mu_exponent = parse_double(path, value);
  else if (key == "mu_ratio")
    s.mu_ratio = parse_double(path, value);
  else if (key == "zeta_base")
    s.zeta_base = parse_double(path, value);
  else if (key == "zeta_exponent")
    s.zeta_exponent = parse_double(path, value);
  else if (key == "alpha")
    s.alpha = parse_double(path, value);
  else if (key == "subsets")
    s.subsets = parse_long(path, value);
  else if (key == "tv_steps")
    s.tv_steps = parse_long(path, value);
  else if (key == "gamma")
    s.gamma = parse_double(path, value);
  else if (key == "gamma_grid")
    s.gamma_grid = parse_double_list(path, value);
  else if (key == "max_iter")
    s.max_iter = parse_long(path, value);
  else if (key == "probe_iters")
    s.probe_iters = parse_long(path, value);
  else if (key == "grid_search")
    s.grid_search = parse_bool(path, value);
  else if (key == "grid_budget")
    s.grid_budget = parse_long(path, value);
  else if (key == "start")
    s.start = trim(value);
  else if (key == "compare")
    s.compare = trim(value);
  else if (key == "subset_grid")
    s.subset_grid = parse_long_list(path, value);
  else
    throw ConfigError(path + ": unknown key");
}

void assign_output(OutputConfig& o, const std::string& key, const std::string& value) {
  const std::string path = "output." + key;
  if (key == "directory")
    o.directory = trim(value);
  else
    throw ConfigError(path + ": unknown key");
}

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
  for (const char* o : options)
    if (v == o) return true;
  return false;
}

bool power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!one_of(section, {"testbed", "problem", "solver", "output"}))
        throw ConfigError(section + ": unknown section");
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (section.empty())
      throw ConfigError(key + ": key/value pair before any section header");
    if (section == "testbed")
      assign_testbed(config.testbed, key, value);
    else if (section == "problem")
      assign_problem(config.problem, key, value);
    else if (section == "solver")
      assign_solver(config.solver, key, value);
    else
      assign_output(config.output, key, value);
  }
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

void validate(const ExperimentConfig& config) {
  const TestbedConfig& t = config.testbed;
  if (t.side < 2) throw ConfigError("testbed.side: must be >= 2");
  if (t.n_angles < 1) throw ConfigError("testbed.n_angles: must be >= 1");
  if (t.n_det < 1) throw ConfigError("testbed.n_det: must be >= 1");
  if (!(t.noise_target >= 0.0 && t.noise_target < 1.0))
    throw ConfigError("testbed.noise_target: must lie in [0, 1)");

  const ProblemConfig& p = config.problem;
  if (!one_of(p.primary, {"lsq-huber", "l1"}))
    throw ConfigError("problem.primary: must be lsq-huber or l1");
  if (!one_of(p.secondary, {"haar", "tv", "none"}))
    throw ConfigError("problem.secondary: must be haar, tv, or none");
  if (!one_of(p.constraint, {"none", "nonneg", "box"}))
    throw ConfigError("problem.constraint: must be none, nonneg, or box");
  if (p.secondary == "haar" && !power_of_two(t.side))
    throw ConfigError("problem.secondary: haar needs a power-of-two testbed.side");
  if (p.constraint == "box" && !(p.box_lo <= p.box_hi))
    throw ConfigError("problem.box_lo: must not exceed problem.box_hi");

  const SolverConfig& s = config.solver;
  if (!one_of(s.method, {"fiba", "iiba", "inc", "fista"}))
    throw ConfigError("solver.method: must be fiba, iiba, inc, or fista");
  if (s.lambda < 0.0) throw ConfigError("solver.lambda: must be >= 0 (0 = automatic)");
  if (s.mu < 0.0) throw ConfigError("solver.mu: must be >= 0 (0 = automatic)");
  if (s.mu_ratio < 0.0) throw ConfigError("solver.mu_ratio: must be >= 0 (0 = default)");
  if (!(s.zeta_base > 0.0)) throw ConfigError("solver.zeta_base: must be > 0");
  if (s.zeta_exponent < 0.0) throw ConfigError("solver.zeta_exponent: must be >= 0");
  if (!(s.alpha > 0.0)) throw ConfigError("solver.alpha: must be > 0");
  if (s.subsets < 1) throw ConfigError("solver.subsets: must be >= 1");
  if (s.subsets > t.n_angles)
    throw ConfigError("solver.subsets: must not exceed testbed.n_angles");
  if (s.tv_steps < 0) throw ConfigError("solver.tv_steps: must be >= 0 (0 = default)");
  if (s.gamma < 0.0) throw ConfigError("solver.gamma: must be >= 0");
  if (s.max_iter < 1) throw ConfigError("solver.max_iter: must be >= 1");
  if (s.probe_iters < 2) throw ConfigError("solver.probe_iters: must be >= 2");
  if (s.grid_budget < 1) throw ConfigError("solver.grid_budget: must be >= 1");
  if (!one_of(s.start, {"", "zero", "consistent"}))
    throw ConfigError("solver.start: must be zero or consistent (empty = default)");
  if (!one_of(s.compare, {"classic", "incremental"}))
    throw ConfigError("solver.compare: must be classic or incremental");
  for (const double g : s.gamma_grid)
    if (g < 0.0) throw ConfigError("solver.gamma_grid: entries must be >= 0");
  for (const long n : s.subset_grid) {
    if (n < 1) throw ConfigError("solver.subset_grid: entries must be >= 1");
    if (n > t.n_angles)
      throw ConfigError("solver.subset_grid: entries must not exceed testbed.n_angles");
  }

  if (s.method == "fista") {
    if (p.primary != "lsq-huber")
      throw ConfigError(
          "solver.method: fista minimizes the squared residual; set problem.primary = "
          "lsq-huber");
    if (p.secondary == "tv")
      throw ConfigError(
          "solver.method: fista supports problem.secondary haar (gamma > 0) or none");
    if (s.gamma > 0.0 && p.secondary != "haar")
      throw ConfigError("solver.gamma: gamma > 0 needs problem.secondary = haar");
    if (s.gamma > 0.0 && p.constraint != "none")
      throw ConfigError(
          "solver.gamma: the synthesis prox and a constraint are mutually exclusive");
  }
  if (s.compare == "classic" && p.secondary != "haar")
    throw ConfigError("solver.compare: classic compares against the gamma grid and needs "
                      "problem.secondary = haar");
  if (s.compare == "classic" && p.primary != "lsq-huber")
    throw ConfigError("solver.compare: classic runs one-level baselines and needs "
                      "problem.primary = lsq-huber");

  if (config.output.directory.empty())
    throw ConfigError("output.directory: must not be empty");
}

}  // namespace ctcli
