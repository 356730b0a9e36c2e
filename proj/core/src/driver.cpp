#include "varexp/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "varexp/errors.hpp"

namespace varexp {

double overflow_threshold() { return 1e12; }

NodalField step(const NodalField& state, double dt, const StepContext& ctx) {
  NodalField rhs = ctx.system.multiply(state);
  const NodalField ap =
      assemble_plaplacian(ctx.mesh, ctx.p, state, ctx.rule, ctx.threads);
  axpy(-dt, ap, rhs);
  if (ctx.with_source) {
    const NodalField f =
        assemble_logsource(ctx.mesh, ctx.q, state, ctx.rule, ctx.threads);
    axpy(dt, f, rhs);
  }
  for (int i = 0; i < ctx.mesh.num_vertices(); ++i)
    if (ctx.mesh.boundary[i]) rhs[i] = 0.0;
  return cg_solve(ctx.constrained_system, rhs, ctx.cg);
}

NodalField interpolate_initial(const U0Spec& spec, const Mesh& mesh) {
  NodalField u(static_cast<std::size_t>(mesh.num_vertices()));
  switch (spec.kind) {
    case U0Kind::gaussian:
      for (int i = 0; i < mesh.num_vertices(); ++i) {
        const Point& v = mesh.vertices[i];
        u[i] = spec.amplitude * std::exp(-spec.width * (v.x * v.x + v.y * v.y));
      }
      break;
    case U0Kind::product_sine: {
      const double pi = 3.141592653589793238462643383279502884;
      const Rect& r = mesh.rect;
      for (int i = 0; i < mesh.num_vertices(); ++i) {
        const Point& v = mesh.vertices[i];
        u[i] = spec.amplitude * std::sin(pi * (v.x - r.xmin) / r.width()) *
               std::sin(pi * (v.y - r.ymin) / r.height());
      }
      break;
    }
    case U0Kind::nodal_file: {
      std::ifstream in(spec.path);
      if (!in) throw IoError("u0: cannot open nodal file '" + spec.path + "'");
      for (int i = 0; i < mesh.num_vertices(); ++i) {
        if (!(in >> u[i]))
          throw ConfigError("u0: nodal file '" + spec.path +
                            "' has fewer values than mesh vertices");
      }
      break;
    }
  }
  return u;
}

RunResult run(const RunConfig& config) {
  config.validate();
  RunResult result;
  const Mesh mesh = build_mesh(config.rect, config.nx, config.ny);
  const QuadratureRule& rule = default_rule();

  ExponentField p = config.p_spec.make();
  ExponentField q = config.q_spec.make();
  resolve_bounds(p, mesh, rule);
  resolve_bounds(q, mesh, rule);

  double sigma = 0.0;
  {
    const AdmissibilityReport probe = check_admissibility(p, q, 0.1, 2);
    sigma = config.sigma.value_or(default_sigma(probe.p_star_inf, q.sup));
  }
  result.admissibility = check_admissibility(p, q, sigma, 2);
  result.admissibility.log_holder_violations = check_log_holder(
      q, config.rect, config.zhikov_fan_M, config.zhikov_fan_samples);
  if (!result.admissibility.ordering_ok)
    std::cerr << "warning: exponent ordering 2 <= p1 <= p2 < q1 <= q2 violated\n";
  if (!result.admissibility.sigma_ok)
    std::cerr << "warning: sigma outside the admissible window\n";
  if (!result.admissibility.log_holder_violations.empty())
    std::cerr << "note: q(.) violates the log-Holder modulus at "
              << result.admissibility.log_holder_violations.size()
              << " sampled pairs (discontinuous exponents); continuing\n";

  const SparseMatrix M = assemble_mass(mesh, rule);
  const SparseMatrix K = assemble_stiffness(mesh, rule);
  const SparseMatrix S = M.plus(K);
  SparseMatrix Mc = M, Kc = K, Sc = S;
  apply_dirichlet(Mc, mesh);
  apply_dirichlet(Kc, mesh);
  apply_dirichlet(Sc, mesh);

  NodalField u = interpolate_initial(config.u0, mesh);
  {
    double bmax = 0.0;
    for (int i = 0; i < mesh.num_vertices(); ++i)
      if (mesh.boundary[i]) bmax = std::max(bmax, std::abs(u[i]));
    if (bmax > 0.0)
      std::cerr << "note: u0 carries nonzero boundary values (max " << bmax
                << "); the Dirichlet condition is imposed from the first "
                   "solve onward\n";
  }

  ConstantsOptions copts;
  copts.lambda1_mode = config.lambda1_mode;
  copts.cg_tol = config.solver_tol;
  copts.ascent.starts = config.ascent_starts;
  copts.ascent.steps = config.ascent_steps;
  copts.ascent.seed = config.seed;
  result.constants =
      compute_constants(mesh, p, q, sigma, M, K, Mc, Kc, copts, rule);

  result.blowup = check_blowup(mesh, p, q, M, K, u, result.constants, rule);
  try {
    result.decay = check_decay(h01_norm(M, K, u), result.constants);
  } catch (const ConfigError& err) {
    result.decay.u0_h01 = h01_norm(M, K, u);
    result.decay.M_threshold = result.constants.M_threshold;
    result.decay.cond_ok = false;
    result.decay.has_envelope = false;
    std::cerr << "note: " << err.what() << "\n";
  }

  CgOptions cg{config.solver_tol, config.solver_maxiter};
  StepContext ctx{mesh, rule, p, q, S, Sc, cg, true, 0};

  const long long nsteps = std::llround(config.T / config.dt);
  const long long stride = std::llround(config.report_every / config.dt);

  auto diagnose = [&](const NodalField& state, double t) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.h01 = h01_norm(M, K, state);
    rec.theta = rec.h01 * rec.h01;
    rec.phi = 0.5 * rec.theta;
    rec.energy = energy(mesh, p, q, state, rule);
    rec.H = h_functional(rec.energy.E, result.constants);
    rec.lux_grad_p = luxemburg_norm(mesh, p, state, true, 1e-10, rule);
    if (result.decay.has_envelope) rec.delta = result.decay.delta(t);
    rec.maxabs = max_abs(state);
    return rec;
  };
  auto wants_snapshot = [&](long long n) {
    const double t = n * config.dt;
    for (double ts : config.snapshot_times)
      if (std::abs(ts - t) <= 1e-9 * std::max(1.0, ts)) return true;
    return false;
  };

  result.records.push_back(diagnose(u, 0.0));
  if (wants_snapshot(0)) result.snapshots.emplace_back(0.0, u);

  result.termination = Termination::completed;
  result.termination_time = config.T;
  for (long long n = 1; n <= nsteps; ++n) {
    const double t = n * config.dt;
    try {
      u = step(u, config.dt, ctx);
    } catch (const SolverError& err) {
      result.termination = Termination::solver_failure;
      result.termination_time = t;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s (t=%.9g, residual=%.3g)", err.what(),
                    t, err.residual);
      result.termination_detail = buf;
      break;
    }
    const double mx = max_abs(u);
    if (!all_finite(u) || mx > overflow_threshold()) {
      result.termination = Termination::overflow;
      result.termination_time = t;
      char buf[120];
      std::snprintf(buf, sizeof(buf), "max|u|=%.9g at t=%.9g", mx, t);
      result.termination_detail = buf;
      break;
    }
    if (wants_snapshot(n)) result.snapshots.emplace_back(t, u);
    if (n % stride == 0) result.records.push_back(diagnose(u, t));
  }
  result.final_state = u;
  return result;
}

}  // namespace varexp
