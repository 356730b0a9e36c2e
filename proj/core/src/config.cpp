#include "varexp/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "varexp/errors.hpp"

namespace varexp {

ExponentField ExponentSpec::make() const {
  switch (kind) {
    case ExponentKind::constant:
      return ExponentField::constant(value);
    case ExponentKind::paper_floor:
      return ExponentField::floor_form(scale, offset);
    default:
      throw ConfigError("ExponentSpec: user-defined exponents are API-only");
  }
}

void RunConfig::validate() const {
  if (!rect.valid()) throw ConfigError("config: rectangle is degenerate");
  if (nx < 1 || ny < 1) throw ConfigError("config: mesh.nx and mesh.ny must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("config: time.dt must be positive");
  if (!(T >= 0.0)) throw ConfigError("config: time.T must be non-negative");
  const double steps = T / dt;
  if (std::abs(steps - std::llround(steps)) > 1e-9 * std::max(1.0, steps))
    throw ConfigError("config: time.T must be a multiple of time.dt");
  if (!(report_every > 0.0))
    throw ConfigError("config: time.report_every must be positive");
  const double stride = report_every / dt;
  if (stride < 1.0 - 1e-12 ||
      std::abs(stride - std::llround(stride)) > 1e-12 * std::max(1.0, stride))
    throw ConfigError("config: time.report_every must be a positive multiple of time.dt");
  if (!(solver_tol > 0.0)) throw ConfigError("config: solver.tol must be positive");
  if (solver_maxiter < 0) throw ConfigError("config: solver.maxiter must be >= 0");
  if (sigma && !(*sigma > 0.0)) throw ConfigError("config: sigma must be positive");
  if (ascent_starts < 1 || ascent_steps < 1)
    throw ConfigError("config: estimators.starts/steps must be >= 1");
  if (u0.kind == U0Kind::nodal_file && u0.path.empty())
    throw ConfigError("config: u0.kind = nodal_file requires u0.path");
  for (double t : snapshot_times) {
    if (t < 0.0 || t > T + 1e-12)
      throw ConfigError("config: snapshot time outside [0, T]");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& value) {
  const double x = parse_number(key, value);
  if (std::abs(x - std::llround(x)) > 0.0)
    throw ConfigError("config: key '" + key + "' expects an integer");
  return static_cast<int>(std::llround(x));
}

ExponentKind parse_exponent_kind(const std::string& key, const std::string& v) {
  if (v == "constant") return ExponentKind::constant;
  if (v == "paper_floor") return ExponentKind::paper_floor;
  throw ConfigError("config: key '" + key + "' expects constant|paper_floor, got '" + v + "'");
}

std::vector<double> parse_number_list(const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_number(key, item));
  }
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream stream(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(stream, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key or value");

    if (key == "rect.xmin") cfg.rect.xmin = parse_number(key, value);
    else if (key == "rect.xmax") cfg.rect.xmax = parse_number(key, value);
    else if (key == "rect.ymin") cfg.rect.ymin = parse_number(key, value);
    else if (key == "rect.ymax") cfg.rect.ymax = parse_number(key, value);
    else if (key == "mesh.nx") cfg.nx = parse_int(key, value);
    else if (key == "mesh.ny") cfg.ny = parse_int(key, value);
    else if (key == "p.kind") cfg.p_spec.kind = parse_exponent_kind(key, value);
    else if (key == "p.value") cfg.p_spec.value = parse_number(key, value);
    else if (key == "p.scale") cfg.p_spec.scale = parse_number(key, value);
    else if (key == "p.offset") cfg.p_spec.offset = parse_number(key, value);
    else if (key == "q.kind") cfg.q_spec.kind = parse_exponent_kind(key, value);
    else if (key == "q.value") cfg.q_spec.value = parse_number(key, value);
    else if (key == "q.scale") cfg.q_spec.scale = parse_number(key, value);
    else if (key == "q.offset") cfg.q_spec.offset = parse_number(key, value);
    else if (key == "sigma") {
      if (value == "auto") cfg.sigma.reset();
      else cfg.sigma = parse_number(key, value);
    }
    else if (key == "u0.kind") {
      if (value == "gaussian") cfg.u0.kind = U0Kind::gaussian;
      else if (value == "product_sine") cfg.u0.kind = U0Kind::product_sine;
      else if (value == "nodal_file") cfg.u0.kind = U0Kind::nodal_file;
      else throw ConfigError("config: unknown u0.kind '" + value + "'");
    }
    else if (key == "u0.amplitude") cfg.u0.amplitude = parse_number(key, value);
    else if (key == "u0.width") cfg.u0.width = parse_number(key, value);
    else if (key == "u0.path") cfg.u0.path = value;
    else if (key == "time.T") cfg.T = parse_number(key, value);
    else if (key == "time.dt") cfg.dt = parse_number(key, value);
    else if (key == "time.report_every") cfg.report_every = parse_number(key, value);
    else if (key == "solver.tol") cfg.solver_tol = parse_number(key, value);
    else if (key == "solver.maxiter") cfg.solver_maxiter = parse_int(key, value);
    else if (key == "lambda1.mode") {
      if (value == "fem") cfg.lambda1_mode = Lambda1Mode::fem;
      else if (value == "analytic") cfg.lambda1_mode = Lambda1Mode::analytic_rectangle;
      else throw ConfigError("config: lambda1.mode expects fem|analytic");
    }
    else if (key == "estimators.starts") cfg.ascent_starts = parse_int(key, value);
    else if (key == "estimators.steps") cfg.ascent_steps = parse_int(key, value);
    else if (key == "seed") cfg.seed = static_cast<unsigned>(parse_int(key, value));
    else if (key == "zhikov_fan.M") cfg.zhikov_fan_M = parse_number(key, value);
    else if (key == "zhikov_fan.samples") cfg.zhikov_fan_samples = parse_int(key, value);
    else if (key == "output.csv") cfg.csv_path = value;
    else if (key == "output.svg") cfg.svg_path = value;
    else if (key == "output.snapshots") cfg.snapshot_times = parse_number_list(key, value);
    else if (key == "output.snapshot_prefix") cfg.snapshot_prefix = value;
    else throw ConfigError("config line " + std::to_string(lineno) +
                           ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig paper_config() {
  RunConfig cfg;
  cfg.rect = {-1.0, 1.0, -1.0, 1.0};
  cfg.nx = cfg.ny = 50;
  cfg.p_spec = {ExponentKind::paper_floor, 0.0, 0.2, 2.5};
  cfg.q_spec = {ExponentKind::paper_floor, 0.0, 0.1, 6.0};
  cfg.sigma = 0.1;
  cfg.u0 = {U0Kind::gaussian, 0.25, 1.0, ""};
  cfg.T = 1.0;
  cfg.dt = 0.01;
  cfg.report_every = 0.1;
  cfg.lambda1_mode = Lambda1Mode::analytic_rectangle;
  return cfg;
}

}  // namespace varexp
