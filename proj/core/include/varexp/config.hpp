#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varexp/exponents.hpp"
#include "varexp/functionals.hpp"
#include "varexp/mesh.hpp"

namespace varexp {

struct ExponentSpec {
  ExponentKind kind = ExponentKind::constant;
  double value = 2.0;   // constant
  double scale = 0.0;   // floor form: scale * |floor(x)| + offset
  double offset = 2.0;

  ExponentField make() const;
};

enum class U0Kind { gaussian, product_sine, nodal_file };

struct U0Spec {
  U0Kind kind = U0Kind::gaussian;
  double amplitude = 0.25;
  double width = 1.0;  // gaussian: amplitude * exp(-width*(x^2+y^2))
  std::string path;    // nodal_file
};

struct RunConfig {
  Rect rect{-1.0, 1.0, -1.0, 1.0};
  int nx = 50;
  int ny = 50;
  ExponentSpec p_spec;
  ExponentSpec q_spec;
  std::optional<double> sigma;  // absent: default_sigma()
  U0Spec u0;
  double T = 1.0;
  double dt = 0.01;
  double report_every = 0.1;
  double solver_tol = 1e-10;
  int solver_maxiter = 0;  // 0: 10 * dim
  Lambda1Mode lambda1_mode = Lambda1Mode::fem;
  int ascent_starts = 20;
  int ascent_steps = 200;
  unsigned seed = 0x5eed;
  double zhikov_fan_M = 1.0;
  int zhikov_fan_samples = 144;
  std::string csv_path;
  std::string svg_path;
  std::vector<double> snapshot_times;
  std::string snapshot_prefix;

  void validate() const;  // throws ConfigError
};

/// Flat "key = value" text, '#' comments, dotted keys. Unknown keys are
/// errors.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// The built-in Table-2 setup: [-1,1]^2, 50x50, floor-form exponents
/// 0.2|floor(x)|+2.5 and 0.1|floor(x)|+6, sigma 0.1, u0 = 0.25 e^{-x^2-y^2},
/// T = 1, dt = 0.01, analytic lambda1.
RunConfig paper_config();

}  // namespace varexp
