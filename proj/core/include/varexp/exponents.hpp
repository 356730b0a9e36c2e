#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "varexp/mesh.hpp"
#include "varexp/quadrature.hpp"

namespace varexp {

enum class ExponentKind { constant, paper_floor, user_defined };

/// Variable exponent p(.) with cached essential bounds. The bounds are the
/// inf/sup over the sample set of all element quadrature points plus mesh
/// vertices, which is exact for piecewise-constant exponents.
struct ExponentField {
  ExponentKind kind = ExponentKind::user_defined;
  std::function<double(double, double)> eval;
  double inf = 0.0;
  double sup = 0.0;
  bool bounded = false;

  double operator()(double x, double y) const { return eval(x, y); }

  static ExponentField constant(double value);
  // scale * |floor(x)| + offset
  static ExponentField floor_form(double scale, double offset);
  static ExponentField from_function(std::function<double(double, double)> f);
};

void resolve_bounds(ExponentField& field, const Mesh& mesh,
                    const QuadratureRule& rule);

struct LogHolderViolation {
  Point a;
  Point b;
  double gap = 0.0;    // |q(a) - q(b)|
  double bound = 0.0;  // M / |log|a - b||
};

struct AdmissibilityReport {
  bool ordering_ok = false;  // 2 <= p1 <= p2 < q1 <= q2
  bool sobolev_ok = false;   // q2 < inf p*(x)
  double p_star_inf = std::numeric_limits<double>::infinity();
  double sigma = 0.0;
  bool sigma_ok = false;
  std::vector<LogHolderViolation> log_holder_violations;

  bool admissible() const { return ordering_ok && sobolev_ok && sigma_ok; }
};

/// Checks the exponent ordering chain, the Sobolev gap q2 < inf p*(x) with
/// p*(x) = n p(x)/(n - p(x)) where p(x) < n (else +inf), and the sigma
/// window. Violations are reported, never thrown.
AdmissibilityReport check_admissibility(const ExponentField& p,
                                        const ExponentField& q, double sigma,
                                        int dim);

/// Samples point pairs in the rectangle and returns those with
/// |a-b| < 1/2 and |q(a)-q(b)| > M/|log|a-b||. The sample set is a uniform
/// grid of roughly `samples` points plus axis-aligned straddling pairs at
/// geometrically shrinking separations, so jump discontinuities are caught.
std::vector<LogHolderViolation> check_log_holder(const ExponentField& q,
                                                 const Rect& domain, double M,
                                                 int samples);

/// 0.1 when inf p*(x) = +inf (the gap condition is vacuous), otherwise the
/// midpoint of the admissible window (p_star_inf - q2)/2.
double default_sigma(double p_star_inf, double q2);

}  // namespace varexp
