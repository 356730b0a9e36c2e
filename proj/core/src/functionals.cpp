#include "varexp/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "varexp/errors.hpp"

namespace varexp {

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;

/// modular(w/lambda) collapsed to sum_k C_k lambda^{-r_k} over the distinct
/// exponent values of the sample set; piecewise-constant exponents give a
/// handful of groups, so the bisection below costs next to nothing.
struct ModularProfile {
  std::vector<double> exps;
  std::vector<double> coeffs;
  double total = 0.0;  // modular at lambda = 1

  double at(double lambda) const {
    double s = 0.0;
    for (std::size_t k = 0; k < exps.size(); ++k)
      s += coeffs[k] * std::pow(lambda, -exps[k]);
    return s;
  }
};

ModularProfile build_profile(const Mesh& mesh, const ExponentField& r,
                             const NodalField& w, bool use_gradient,
                             const QuadratureRule& rule) {
  std::map<double, double> groups;
  std::vector<double> rk(rule.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t].v;
    const TriangleGeometry geom = triangle_geometry(mesh, t);
    bool r_constant = true;
    for (int k = 0; k < rule.size(); ++k) {
      const Point x = barycentric_to_physical(mesh, t, rule.points[k]);
      rk[k] = r(x.x, x.y);
      if (rk[k] != rk[0]) r_constant = false;
    }
    if (use_gradient) {
      double gx = 0.0, gy = 0.0;
      for (int a = 0; a < 3; ++a) {
        gx += w[tri[a]] * geom.grad[a][0];
        gy += w[tri[a]] * geom.grad[a][1];
      }
      const double s = std::hypot(gx, gy);
      if (s == 0.0) continue;
      if (r_constant) {
        // element-constant gradient and exponent: one power per element
        groups[rk[0]] += geom.area * std::pow(s, rk[0]);
      } else {
        for (int k = 0; k < rule.size(); ++k)
          groups[rk[k]] += geom.area * rule.weights[k] * std::pow(s, rk[k]);
      }
      continue;
    }
    for (int k = 0; k < rule.size(); ++k) {
      double uk = 0.0;
      for (int a = 0; a < 3; ++a) uk += w[tri[a]] * rule.points[k][a];
      const double base = std::abs(uk);
      if (base == 0.0) continue;
      groups[rk[k]] += geom.area * rule.weights[k] * std::pow(base, rk[k]);
    }
  }
  ModularProfile prof;
  prof.exps.reserve(groups.size());
  prof.coeffs.reserve(groups.size());
  for (const auto& [rk, ck] : groups) {
    prof.exps.push_back(rk);
    prof.coeffs.push_back(ck);
    prof.total += ck;
  }
  return prof;
}

double luxemburg_from_profile(const ModularProfile& prof, double r_inf,
                              double tol) {
  if (prof.total == 0.0) return 0.0;
  if (!std::isfinite(prof.total))
    return std::numeric_limits<double>::infinity();

  double lambda = std::pow(prof.total, 1.0 / r_inf);
  double lo = lambda, hi = lambda;
  int guard = 0;
  while (prof.at(hi) > 1.0 && guard++ < 4096) hi *= 2.0;
  guard = 0;
  while (prof.at(lo) <= 1.0 && lo > 0.0 && guard++ < 4096) lo *= 0.5;
  // modular is strictly decreasing in lambda: root bracketed in [lo, hi]
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (prof.at(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double modular(const Mesh& mesh, const ExponentField& r, const NodalField& w,
               bool use_gradient, const QuadratureRule& rule) {
  if (static_cast<int>(w.size()) != mesh.num_vertices())
    throw ConfigError("modular: field/mesh size mismatch");
  return build_profile(mesh, r, w, use_gradient, rule).total;
}

double luxemburg_norm(const Mesh& mesh, const ExponentField& r,
                      const NodalField& w, bool use_gradient, double tol,
                      const QuadratureRule& rule) {
  if (!(tol > 0.0)) throw ConfigError("luxemburg_norm: tol must be positive");
  if (!r.bounded) throw ConfigError("luxemburg_norm: unresolved exponent bounds");
  const ModularProfile prof = build_profile(mesh, r, w, use_gradient, rule);
  return luxemburg_from_profile(prof, r.inf, tol);
}

double h01_norm(const SparseMatrix& M, const SparseMatrix& K,
                const NodalField& w) {
  const double q = dot(w, M.multiply(w)) + dot(w, K.multiply(w));
  return std::sqrt(std::max(0.0, q));
}

EnergyBreakdown energy(const Mesh& mesh, const ExponentField& p,
                       const ExponentField& q, const NodalField& w,
                       const QuadratureRule& rule) {
  if (static_cast<int>(w.size()) != mesh.num_vertices())
    throw ConfigError("energy: field/mesh size mismatch");
  EnergyBreakdown out;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t].v;
    const TriangleGeometry geom = triangle_geometry(mesh, t);
    double gx = 0.0, gy = 0.0;
    for (int a = 0; a < 3; ++a) {
      gx += w[tri[a]] * geom.grad[a][0];
      gy += w[tri[a]] * geom.grad[a][1];
    }
    const double s = std::hypot(gx, gy);
    for (int k = 0; k < rule.size(); ++k) {
      const Point x = barycentric_to_physical(mesh, t, rule.points[k]);
      const double wk = geom.area * rule.weights[k];
      if (s > 0.0) {
        const double pk = p(x.x, x.y);
        out.gradient_term += wk * std::pow(s, pk) / pk;
      }
      double uk = 0.0;
      for (int a = 0; a < 3; ++a) uk += w[tri[a]] * rule.points[k][a];
      const double au = std::abs(uk);
      if (au > 0.0) {
        const double qk = q(x.x, x.y);
        const double powq = std::pow(au, qk);
        out.log_term += wk * powq * std::log(au) / qk;
        out.q2_term += wk * powq / (qk * qk);
      }
    }
  }
  out.E = out.gradient_term - out.log_term + out.q2_term;
  return out;
}

double g_eval(double xi, const ConstantsBundle& c) {
  if (xi == 0.0) return 0.0;
  const double first =
      std::min(std::pow(xi, c.p1 / c.p2), xi) / c.p2;
  const double second =
      std::max(std::pow(c.B1, c.q2 + c.sigma) * std::pow(xi, (c.q2 + c.sigma) / c.p2),
               std::pow(c.B1, c.q1 + c.sigma) * std::pow(xi, (c.q1 + c.sigma) / c.p2)) /
      (kE * c.sigma * c.q1);
  return first - second;
}

double h_eval(double xi, const ConstantsBundle& c) {
  if (xi == 0.0) return 0.0;
  return xi / c.p2 - std::pow(c.B1, c.q1 + c.sigma) *
                         std::pow(xi, (c.q1 + c.sigma) / c.p2) /
                         (kE * c.sigma * c.q1);
}

double first_eigenvalue(const SparseMatrix& Mc, const SparseMatrix& Kc,
                        const Mesh& mesh, double tol, double cg_tol) {
  const int n = Mc.dim();
  if (n != Kc.dim() || n != mesh.num_vertices())
    throw ConfigError("first_eigenvalue: dimension mismatch");

  NodalField x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = mesh.boundary[i] ? 0.0 : 1.0;
  {
    const double nx = std::sqrt(dot(x, Mc.multiply(x)));
    if (nx == 0.0)
      throw SolverError("first_eigenvalue: no interior vertices", 0.0);
    for (int i = 0; i < n; ++i) x[i] /= nx;
  }

  CgOptions cg{cg_tol, 0};
  double lambda_prev = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    const NodalField y = cg_solve(Kc, Mc.multiply(x), cg);
    const NodalField Ky = Kc.multiply(y);
    const NodalField My = Mc.multiply(y);
    const double yMy = dot(y, My);
    if (!(yMy > 0.0))
      throw SolverError("first_eigenvalue: iteration collapsed", yMy);
    const double lambda = dot(y, Ky) / yMy;
    const double scale = 1.0 / std::sqrt(yMy);
    for (int i = 0; i < n; ++i) x[i] = y[i] * scale;
    if (iter > 0 && std::abs(lambda - lambda_prev) <= tol * std::abs(lambda))
      return lambda;
    lambda_prev = lambda;
  }
  throw SolverError("first_eigenvalue: no convergence", lambda_prev);
}

namespace {

/// dlambda/dv of the Luxemburg norm, by implicit differentiation of
/// modular(v/lambda) = 1.
NodalField luxemburg_gradient(const Mesh& mesh, const ExponentField& r,
                              const NodalField& v, bool use_gradient,
                              double lambda, const QuadratureRule& rule) {
  NodalField out(v.size());
  if (!(lambda > 0.0) || !std::isfinite(lambda)) return out;
  double denom = 0.0;
  std::vector<double> rk_buf(rule.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t].v;
    const TriangleGeometry geom = triangle_geometry(mesh, t);
    double gx = 0.0, gy = 0.0, s = 0.0;
    if (use_gradient) {
      for (int a = 0; a < 3; ++a) {
        gx += v[tri[a]] * geom.grad[a][0];
        gy += v[tri[a]] * geom.grad[a][1];
      }
      s = std::hypot(gx, gy);
      if (s == 0.0) continue;
    }
    bool r_constant = true;
    for (int k = 0; k < rule.size(); ++k) {
      const Point x = barycentric_to_physical(mesh, t, rule.points[k]);
      rk_buf[k] = r(x.x, x.y);
      if (rk_buf[k] != rk_buf[0]) r_constant = false;
    }
    if (use_gradient && r_constant) {
      const double rk = rk_buf[0];
      const double z = s / lambda;
      const double common = geom.area * rk * std::pow(z, rk - 2.0);
      denom += common * z * z;
      for (int a = 0; a < 3; ++a) {
        const double gdot = gx * geom.grad[a][0] + gy * geom.grad[a][1];
        out[tri[a]] += common * gdot / (lambda * lambda);
      }
      continue;
    }
    for (int k = 0; k < rule.size(); ++k) {
      const double rk = rk_buf[k];
      const double wk = geom.area * rule.weights[k];
      if (use_gradient) {
        const double z = s / lambda;
        const double common = wk * rk * std::pow(z, rk - 2.0);
        denom += common * z * z;
        for (int a = 0; a < 3; ++a) {
          const double gdot = gx * geom.grad[a][0] + gy * geom.grad[a][1];
          out[tri[a]] += common * gdot / (lambda * lambda);
        }
      } else {
        double uk = 0.0;
        for (int a = 0; a < 3; ++a) uk += v[tri[a]] * rule.points[k][a];
        if (uk == 0.0) continue;
        const double z = uk / lambda;
        const double az = std::abs(z);
        const double common = wk * rk * std::pow(az, rk - 2.0);
        denom += common * z * z;
        for (int a = 0; a < 3; ++a)
          out[tri[a]] += common * z * rule.points[k][a] / lambda;
      }
    }
  }
  if (denom > 0.0)
    for (double& g : out.values) g *= lambda / denom;
  return out;
}

}  // namespace

NormFunctional luxemburg_functional(const Mesh& mesh, const ExponentField& r,
                                    bool use_gradient, double tol,
                                    const QuadratureRule& rule) {
  NormFunctional f;
  f.name = use_gradient ? "luxemburg(grad)" : "luxemburg";
  f.value = [&mesh, r, use_gradient, tol, &rule](const NodalField& v) {
    return luxemburg_norm(mesh, r, v, use_gradient, tol, rule);
  };
  f.gradient = [&mesh, r, use_gradient, tol, &rule](const NodalField& v) {
    const double lambda = luxemburg_norm(mesh, r, v, use_gradient, tol, rule);
    return luxemburg_gradient(mesh, r, v, use_gradient, lambda, rule);
  };
  return f;
}

NormFunctional lp_gradient_functional(const Mesh& mesh, double p,
                                      const QuadratureRule& rule) {
  NormFunctional f;
  f.name = "lp_gradient";
  const ExponentField pf = ExponentField::constant(p);
  f.value = [&mesh, pf, &rule](const NodalField& v) {
    return std::pow(modular(mesh, pf, v, true, rule), 1.0 / pf.inf);
  };
  f.gradient = [&mesh, pf, p, &rule](const NodalField& v) {
    const double mod = modular(mesh, pf, v, true, rule);
    NodalField g = assemble_plaplacian(mesh, pf, v, rule);
    if (mod > 0.0) {
      const double scale = std::pow(mod, 1.0 / p - 1.0);
      for (double& gi : g.values) gi *= scale;
    }
    return g;
  };
  return f;
}

NormFunctional h01_functional(const SparseMatrix& M, const SparseMatrix& K) {
  NormFunctional f;
  f.name = "h01";
  f.value = [&M, &K](const NodalField& v) { return h01_norm(M, K, v); };
  f.gradient = [&M, &K](const NodalField& v) {
    NodalField g = M.multiply(v);
    axpy(1.0, K.multiply(v), g);
    const double n = h01_norm(M, K, v);
    if (n > 0.0)
      for (double& gi : g.values) gi /= n;
    return g;
  };
  return f;
}

AscentResult embedding_constant(const Mesh& mesh, const NormFunctional& num,
                                const NormFunctional& den,
                                const AscentOptions& opts) {
  const int n = mesh.num_vertices();
  AscentResult best;
  best.value = 0.0;
  best.stagnated = true;

  auto project = [&](NodalField& v) {
    for (int i = 0; i < n; ++i)
      if (mesh.boundary[i]) v[i] = 0.0;
    const double nv = norm2(v);
    if (nv > 0.0)
      for (double& x : v.values) x /= nv;
  };
  auto ratio = [&](const NodalField& v) {
    const double d = den.value(v);
    if (!(d > 0.0)) return 0.0;
    return num.value(v) / d;
  };

  for (int start = 0; start < opts.starts; ++start) {
    std::mt19937 gen(opts.seed + static_cast<unsigned>(start));
    std::normal_distribution<double> normal;
    NodalField v(static_cast<std::size_t>(n));
    for (double& x : v.values) x = normal(gen);
    project(v);
    if (norm2(v) == 0.0) continue;

    double r = ratio(v);
    double tau = opts.initial_step;
    int accepted = 0;
    for (int it = 0; it < opts.steps; ++it) {
      const double nv = num.value(v);
      const double dv = den.value(v);
      if (!(nv > 0.0) || !(dv > 0.0)) break;
      NodalField g = num.gradient(v);
      const NodalField gd = den.gradient(v);
      for (int i = 0; i < n; ++i) g[i] = g[i] / nv - gd[i] / dv;
      for (int i = 0; i < n; ++i)
        if (mesh.boundary[i]) g[i] = 0.0;
      const double gn = norm2(g);
      if (gn < 1e-14) break;
      for (double& x : g.values) x /= gn;

      bool improved = false;
      for (int bt = 0; bt < 30 && tau > 1e-14; ++bt) {
        NodalField trial = v;
        axpy(tau, g, trial);
        project(trial);
        const double rt = ratio(trial);
        if (rt > r) {
          v = std::move(trial);
          r = rt;
          tau *= 1.5;
          improved = true;
          ++accepted;
          break;
        }
        tau *= 0.5;
      }
      if (!improved) break;
    }
    if (r > best.value) {
      best.value = r;
      best.maximizer = v;
      best.stagnated = (accepted == 0);
    }
  }
  return best;
}

ConstantsBundle compute_constants(const Mesh& mesh, const ExponentField& p,
                                  const ExponentField& q, double sigma,
                                  const SparseMatrix& M, const SparseMatrix& K,
                                  const SparseMatrix& Mc,
                                  const SparseMatrix& Kc,
                                  const ConstantsOptions& opts,
                                  const QuadratureRule& rule) {
  if (!p.bounded || !q.bounded)
    throw ConfigError("compute_constants: resolve exponent bounds first");
  ConstantsBundle c;
  c.p1 = p.inf;
  c.p2 = p.sup;
  c.q1 = q.inf;
  c.q2 = q.sup;
  c.sigma = sigma;
  if (!(c.q1 - c.p2 + sigma > 0.0))
    throw ConfigError("compute_constants: q1 - p2 + sigma must be positive");

  if (opts.lambda1_mode == Lambda1Mode::analytic_rectangle) {
    const double pi = 3.141592653589793238462643383279502884;
    c.lambda1 = pi * pi * (1.0 / (mesh.rect.width() * mesh.rect.width()) +
                           1.0 / (mesh.rect.height() * mesh.rect.height()));
  } else {
    c.lambda1 = first_eigenvalue(Mc, Kc, mesh, opts.lambda1_tol, opts.cg_tol);
  }

  ExponentField q_shift = ExponentField::from_function(
      [qe = q.eval, sigma](double x, double y) { return qe(x, y) + sigma; });
  q_shift.inf = q.inf + sigma;
  q_shift.sup = q.sup + sigma;
  q_shift.bounded = true;

  const NormFunctional lux_val = luxemburg_functional(mesh, q_shift, false);
  const NormFunctional lux_grad = luxemburg_functional(mesh, q_shift, true);
  c.B_sigma = embedding_constant(mesh, lux_val, lux_grad, opts.ascent).value;
  c.B1 = std::max(1.0, c.B_sigma);

  c.alpha1 = std::pow(kE * sigma * c.q1 / (c.q1 + sigma) *
                          std::pow(c.B1, -(c.q1 + sigma)),
                      c.p2 / (c.q1 - c.p2 + sigma));
  c.E1 = (1.0 / c.p2 - 1.0 / (c.q1 + sigma)) * c.alpha1;

  const NormFunctional h01f = h01_functional(M, K);
  c.C1 = embedding_constant(mesh, lp_gradient_functional(mesh, c.q1 + sigma),
                            h01f, opts.ascent)
             .value;
  c.C2 = embedding_constant(mesh, lp_gradient_functional(mesh, c.q2 + sigma),
                            h01f, opts.ascent)
             .value;

  c.A = std::pow(mesh.rect.area(), 0.5 * (2.0 - c.p1)) *
        std::pow(c.lambda1 / (2.0 * (c.lambda1 + 1.0)), 0.5 * c.p1);
  c.B = 4.0 / (kE * sigma) * c.B_sigma * std::pow(c.C1, c.q1 + sigma);
  c.C = 4.0 / (kE * sigma) * c.B_sigma * std::pow(c.C2, c.q2 + sigma);
  c.M_threshold =
      std::min(std::pow(c.A / (2.0 * c.B), 1.0 / (c.q1 - c.p1 + sigma)),
               std::pow(c.A / (2.0 * c.C), 1.0 / (c.q2 - c.p1 + sigma)));
  return c;
}

std::string ConstantsBundle::serialize(const std::string& line_prefix) const {
  char buf[160];
  std::string out;
  auto emit = [&](const char* key, double value) {
    std::snprintf(buf, sizeof(buf), "%s%s=%.9g\n", line_prefix.c_str(), key,
                  value);
    out += buf;
  };
  emit("p1", p1);
  emit("p2", p2);
  emit("q1", q1);
  emit("q2", q2);
  emit("sigma", sigma);
  emit("B_sigma", B_sigma);
  emit("B1", B1);
  emit("alpha1", alpha1);
  emit("E1", E1);
  emit("lambda1", lambda1);
  emit("C1_discrete", C1);
  emit("C2_discrete", C2);
  emit("A", A);
  emit("B", B);
  emit("C", C);
  emit("M_threshold", M_threshold);
  return out;
}

}  // namespace varexp
