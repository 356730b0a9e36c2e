#include "varexp/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "varexp/errors.hpp"

namespace varexp {

ExponentField ExponentField::constant(double value) {
  ExponentField f;
  f.kind = ExponentKind::constant;
  f.eval = [value](double, double) { return value; };
  f.inf = f.sup = value;
  f.bounded = true;
  return f;
}

ExponentField ExponentField::floor_form(double scale, double offset) {
  ExponentField f;
  f.kind = ExponentKind::paper_floor;
  f.eval = [scale, offset](double x, double) {
    return scale * std::abs(std::floor(x)) + offset;
  };
  return f;
}

ExponentField ExponentField::from_function(std::function<double(double, double)> fn) {
  ExponentField f;
  f.kind = ExponentKind::user_defined;
  f.eval = std::move(fn);
  return f;
}

void resolve_bounds(ExponentField& field, const Mesh& mesh,
                    const QuadratureRule& rule) {
  if (field.kind == ExponentKind::constant && field.bounded) return;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto take = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  for (const Point& v : mesh.vertices) take(field(v.x, v.y));
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (const auto& bary : rule.points) {
      const Point x = barycentric_to_physical(mesh, t, bary);
      take(field(x.x, x.y));
    }
  }
  field.inf = lo;
  field.sup = hi;
  field.bounded = true;
}

namespace {

double p_star_infimum(const ExponentField& p, int dim) {
  // p*(x) = n p(x)/(n - p(x)) is increasing in p(x) where p(x) < n, so the
  // infimum over the sample set is attained at the essential infimum.
  const double n = static_cast<double>(dim);
  if (p.inf >= n) return std::numeric_limits<double>::infinity();
  return n * p.inf / (n - p.inf);
}

}  // namespace

AdmissibilityReport check_admissibility(const ExponentField& p,
                                        const ExponentField& q, double sigma,
                                        int dim) {
  if (!p.bounded || !q.bounded)
    throw ConfigError("check_admissibility: resolve exponent bounds first");
  AdmissibilityReport report;
  report.sigma = sigma;
  report.ordering_ok =
      2.0 <= p.inf && p.inf <= p.sup && p.sup < q.inf && q.inf <= q.sup;
  report.p_star_inf = p_star_infimum(p, dim);
  report.sobolev_ok = q.sup < report.p_star_inf;
  report.sigma_ok = std::isinf(report.p_star_inf)
                        ? sigma > 0.0
                        : (sigma > 0.0 && sigma < report.p_star_inf - q.sup);
  return report;
}

std::vector<LogHolderViolation> check_log_holder(const ExponentField& q,
                                                 const Rect& domain, double M,
                                                 int samples) {
  if (!(M > 0.0)) throw ConfigError("check_log_holder: M must be positive");
  if (samples < 2) throw ConfigError("check_log_holder: need samples >= 2");

  // odd grid: the center lines of the rectangle are always sampled, so the
  // straddling pairs below can bracket jumps on them
  int k = std::max(3, static_cast<int>(std::lround(
                          std::sqrt(static_cast<double>(samples)))));
  if (k % 2 == 0) ++k;
  std::vector<Point> grid;
  grid.reserve(static_cast<std::size_t>(k) * k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) {
      grid.push_back({domain.xmin + domain.width() * i / (k - 1),
                      domain.ymin + domain.height() * j / (k - 1)});
    }
  }

  std::vector<LogHolderViolation> violations;
  auto check_pair = [&](const Point& a, const Point& b) {
    const double dist = std::hypot(a.x - b.x, a.y - b.y);
    if (!(dist > 0.0) || dist >= 0.5) return;
    const double gap = std::abs(q(a.x, a.y) - q(b.x, b.y));
    const double bound = M / std::abs(std::log(dist));
    if (gap > bound) violations.push_back({a, b, gap, bound});
  };

  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j)
      check_pair(grid[i], grid[j]);

  // Straddling pairs at geometric separations catch jump discontinuities
  // that no uniform grid can resolve.
  const auto inside = [&](const Point& p) {
    return p.x >= domain.xmin && p.x <= domain.xmax && p.y >= domain.ymin &&
           p.y <= domain.ymax;
  };
  for (const Point& base : grid) {
    for (int axis = 0; axis < 2; ++axis) {
      double sep = 0.25;
      while (sep > 1e-14) {
        Point a = base, b = base;
        if (axis == 0) {
          a.x -= 0.5 * sep;
          b.x += 0.5 * sep;
        } else {
          a.y -= 0.5 * sep;
          b.y += 0.5 * sep;
        }
        if (inside(a) && inside(b)) check_pair(a, b);
        sep *= 0.5;
      }
    }
  }
  return violations;
}

double default_sigma(double p_star_inf, double q2) {
  if (std::isinf(p_star_inf)) return 0.1;
  return 0.5 * (p_star_inf - q2);
}

}  // namespace varexp
