// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Reference values are the published Table 1/Table 2
// numbers of the experiment this solver reproduces.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "varexp/assembly.hpp"
#include "varexp/certificates.hpp"
#include "varexp/config.hpp"
#include "varexp/driver.hpp"
#include "varexp/functionals.hpp"
#include "varexp/report.hpp"

using namespace varexp;

namespace {

constexpr double kPi = 3.14159265358979323846;

const double kTable2Norm[11] = {0.477344, 0.43491,  0.420828, 0.407467,
                                0.394777, 0.382713, 0.371233, 0.360298,
                                0.349873, 0.339927, 0.330429};
const double kTable2Delta[11] = {0.477344, 0.475403, 0.473474, 0.471557,
                                 0.469651, 0.467757, 0.465874, 0.464003,
                                 0.462143, 0.460294, 0.458456};
const double kReferenceM0 = 0.671566;  // published threshold at t = 0

int failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  if (!pass) ++failures;
}

double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

struct PaperSetup {
  Mesh mesh;
  ExponentField p, q;
  SparseMatrix M, K, Mc, Kc;
  NodalField u0;
  double u0_norm = 0.0;

  PaperSetup() : mesh(build_mesh({-1, 1, -1, 1}, 50, 50)) {
    p = ExponentField::floor_form(0.2, 2.5);
    q = ExponentField::floor_form(0.1, 6.0);
    resolve_bounds(p, mesh, default_rule());
    resolve_bounds(q, mesh, default_rule());
    M = assemble_mass(mesh);
    K = assemble_stiffness(mesh);
    Mc = M;
    Kc = K;
    apply_dirichlet(Mc, mesh);
    apply_dirichlet(Kc, mesh);
    u0 = interpolate_initial({U0Kind::gaussian, 0.25, 1.0, ""}, mesh);
    u0_norm = h01_norm(M, K, u0);
  }

  double delta(double t) const {
    const double lam = kPi * kPi / 2.0;
    const double A = std::pow(4.0, -0.25) * std::pow(lam / (2 * (lam + 1)), 1.25);
    return std::pow(
        4.0 / (A * 0.5 * t + 4.0 * std::pow(u0_norm, -0.5)), 2.0);
  }
};

void criterion1_delta_envelope(const PaperSetup& s) {
  Timer timer;
  const double d0 = s.delta(0.0);
  const double d5 = s.delta(0.5);
  const double d10 = s.delta(1.0);
  const double elapsed = timer.seconds();
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "delta(0)=%.6f/%.6f delta(0.5)=%.6f/%.6f delta(1)=%.6f/%.6f "
                "(computed/reference), formula time %.3gs",
                d0, kTable2Delta[0], d5, kTable2Delta[5], d10, kTable2Delta[10],
                elapsed);
  const bool pass = rel_err(d0, kTable2Delta[0]) < 0.005 &&
                    rel_err(d5, kTable2Delta[5]) < 0.005 &&
                    rel_err(d10, kTable2Delta[10]) < 0.005 && elapsed < 1.0;
  report(1, "delta envelope at t = 0, 0.5, 1 within 0.5%", pass, buf);
}

void criterion2_initial_norm(const PaperSetup& s) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "||u0||_H01 = %.6f, reference 0.477344 (%.3f%% off)",
                s.u0_norm, 100 * rel_err(s.u0_norm, 0.477344));
  report(2, "initial H01 norm on the 50x50 mesh within 0.5%",
         rel_err(s.u0_norm, 0.477344) < 0.005, buf);
}

void criterion3_lambda1(const PaperSetup& s) {
  Timer timer;
  auto eig = [](int n) {
    const Mesh mesh = build_mesh({-1, 1, -1, 1}, n, n);
    SparseMatrix Mc = assemble_mass(mesh);
    SparseMatrix Kc = assemble_stiffness(mesh);
    apply_dirichlet(Mc, mesh);
    apply_dirichlet(Kc, mesh);
    return first_eigenvalue(Mc, Kc, mesh);
  };
  const double lam10 = eig(10);
  const double lam50 = first_eigenvalue(s.Mc, s.Kc, s.mesh);
  const double exact = kPi * kPi / 2.0;
  const double elapsed = timer.seconds();
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "lambda1(10x10)=%.6f >= lambda1(50x50)=%.6f > pi^2/2=%.6f, "
                "rel err %.4f%%, %.2fs",
                lam10, lam50, exact, 100 * rel_err(lam50, exact), elapsed);
  const bool pass = lam10 >= lam50 && lam50 > exact &&
                    rel_err(lam50, exact) <= 0.002 && elapsed < 60.0;
  report(3, "fem lambda1 within 0.2% of pi^2/2, from above", pass, buf);
}

RunResult criterion4_trajectory() {
  Timer timer;
  const RunConfig cfg = paper_config();
  const RunResult res = run(cfg);
  const double elapsed = timer.seconds();

  bool pass = res.termination == Termination::completed &&
              res.records.size() == 11;
  bool theta_decreasing = true;
  bool below_envelope = true;
  double worst = 0.0;
  for (std::size_t k = 0; k < res.records.size() && pass; ++k) {
    const DiagnosticsRecord& r = res.records[k];
    if (k > 0 && !(r.theta < res.records[k - 1].theta))
      theta_decreasing = false;
    if (!r.delta || r.h01 > *r.delta * (1.0 + 1e-12)) below_envelope = false;
    if (k > 0) worst = std::max(worst, rel_err(r.h01, kTable2Norm[k]));
  }
  pass = pass && theta_decreasing && below_envelope && worst < 0.10 &&
         elapsed < 120.0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "theta decreasing=%d, norm<=delta=%d, worst Table-2 deviation "
                "%.2f%% (limit 10%%), %.1fs (limit 120s)",
                theta_decreasing ? 1 : 0, below_envelope ? 1 : 0, 100 * worst,
                elapsed);
  report(4, "paper-config decay trajectory matches Table 2", pass, buf);
  return res;
}

void criterion5_energy_dissipation(const PaperSetup& s, const RunResult& res) {
  // faithful check over all consecutive reported pairs, including the
  // t=0 -> t=0.1 transition from the raw interpolated datum
  const double tol = 1e-6 * (1.0 + std::abs(res.records.front().energy.E));
  bool pass_all = true;
  bool pass_from_first_step = true;
  std::size_t first_bad = 0;
  for (std::size_t k = 1; k < res.records.size(); ++k) {
    const double prev = res.records[k - 1].energy.E;
    const double cur = res.records[k].energy.E;
    if (cur > prev + tol) {
      if (pass_all) first_bad = k;
      pass_all = false;
      if (k > 1) pass_from_first_step = false;
    }
  }
  // per-step dissipation from the first constrained state
  const SparseMatrix S = s.M.plus(s.K);
  SparseMatrix Sc = S;
  apply_dirichlet(Sc, s.mesh);
  StepContext ctx2{s.mesh, default_rule(), s.p, s.q, S, Sc, {1e-10, 0}, true, 0};
  NodalField u = step(s.u0, 0.01, ctx2);
  double prevE = energy(s.mesh, s.p, s.q, u).E;
  bool per_step_ok = true;
  for (int n = 2; n <= 100; ++n) {
    u = step(u, 0.01, ctx2);
    const double curE = energy(s.mesh, s.p, s.q, u).E;
    if (curE > prevE + tol) per_step_ok = false;
    prevE = curE;
  }
  char buf[360];
  std::snprintf(
      buf, sizeof(buf),
      "E(0)=%.6g E(0.1)=%.6g; %s; from the first constrained state onward the "
      "property holds (reported rows %s, per-step %s). The t=0 pair rises "
      "because the datum violates the boundary condition and the first solve "
      "projects it; unavoidable given criteria 1/2/4 pin the raw datum (see "
      "ledger)",
      res.records[0].energy.E, res.records[1].energy.E,
      pass_all ? "all pairs dissipate" : "the first reported pair rises",
      pass_from_first_step ? "yes" : "no", per_step_ok ? "yes" : "no");
  report(5, "energy dissipation over the full paper run", pass_all, buf);
  (void)first_bad;
}

void criterion6_certificate_algebra() {
  std::mt19937 rng(20240801);
  bool pass = true;
  std::string why = "100 randomized admissible configurations";
  for (int trial = 0; trial < 100 && pass; ++trial) {
    const oracle::SyntheticConfig sc = oracle::random_certified_config(rng);
    const ConstantsBundle& c = sc.c;
    if (rel_err(h_eval(c.alpha1, c), c.E1) > 1e-12) {
      pass = false;
      why = "h(alpha1) != E1";
      break;
    }
    const BlowupCertificate cert =
        certify_blowup(sc.E0, sc.alpha0, std::sqrt(sc.theta0), c);
    if (!cert.certified()) {
      pass = false;
      why = "synthetic configuration unexpectedly uncertified";
      break;
    }
    if (rel_err(cert.script_B, cert.zeta * c.q1) > 1e-12) {
      pass = false;
      why = "zeta q1 != script_B";
      break;
    }
    if (rel_err(*cert.t_star, *cert.t_star_norm) > 1e-10) {
      pass = false;
      why = "the two T* closed forms disagree";
      break;
    }
    if (std::abs(h_eval(cert.alpha2, c) - sc.E0) >
        1e-10 * std::max(1.0, sc.E0)) {
      pass = false;
      why = "alpha2 root residual too large";
      break;
    }
    const double bound =
        std::pow((c.q1 + c.sigma) * (1.0 / c.p2 - sc.E0 / c.alpha1),
                 c.p2 / (c.q1 + c.sigma - c.p2));
    if (cert.alpha2 / c.alpha1 < bound * (1.0 - 1e-12) || !(bound > 1.0)) {
      pass = false;
      why = "alpha2/alpha1 lower bound violated";
      break;
    }
  }
  report(6, "certificate algebra on randomized configurations", pass, why);
}

void criterion7_norm_machinery() {
  const Mesh mesh = build_mesh({-1, 1, -1, 1}, 8, 8);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto random_field = [&] {
    NodalField f(static_cast<std::size_t>(mesh.num_vertices()));
    for (double& v : f.values) v = uni(rng);
    return f;
  };

  bool pass = true;
  std::string why = "Lp collapse on 12 fields, homogeneity and unit ball on 50";
  for (double rho : {2.0, 3.0, 6.0}) {
    const ExponentField r = ExponentField::constant(rho);
    for (int k = 0; k < 4 && pass; ++k) {
      const NodalField w = random_field();
      const double lux = luxemburg_norm(mesh, r, w, false, 1e-10);
      const double lp = std::pow(modular(mesh, r, w, false), 1.0 / rho);
      if (rel_err(lux, lp) > 1e-8) {
        pass = false;
        why = "constant-exponent Luxemburg norm misses the Lp norm";
      }
    }
  }
  ExponentField q = ExponentField::floor_form(0.1, 6.0);
  resolve_bounds(q, mesh, default_rule());
  const double tol = 1e-10;
  for (int k = 0; k < 50 && pass; ++k) {
    const NodalField w = random_field();
    const double norm = luxemburg_norm(mesh, q, w, false, tol);
    for (double cfac : {0.5, 2.0, -3.0}) {
      NodalField cw = w;
      for (double& v : cw.values) v *= cfac;
      if (rel_err(luxemburg_norm(mesh, q, cw, false, tol),
                  std::abs(cfac) * norm) > 1e-8) {
        pass = false;
        why = "homogeneity violated";
      }
    }
    NodalField unit = w;
    for (double& v : unit.values) v /= norm;
    if (std::abs(modular(mesh, q, unit, false) - 1.0) > 10 * tol) {
      pass = false;
      why = "unit-ball property violated";
    }
  }
  report(7, "Luxemburg norm machinery", pass, why);
}

void criterion8_operator_consistency() {
  const Mesh mesh = build_mesh({-1, 1, -1, 1}, 6, 6);
  ExponentField p = ExponentField::floor_form(0.2, 2.5);
  ExponentField q = ExponentField::floor_form(0.1, 6.0);
  resolve_bounds(p, mesh, default_rule());
  resolve_bounds(q, mesh, default_rule());
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto interior_field = [&] {
    NodalField f(static_cast<std::size_t>(mesh.num_vertices()));
    for (int i = 0; i < mesh.num_vertices(); ++i)
      f[i] = mesh.boundary[i] ? 0.0 : uni(rng);
    return f;
  };
  const NodalField u = interior_field();
  const NodalField v = interior_field();
  const double eps = 1e-4;

  auto fd = [&](auto&& J) {
    NodalField up = u, um = u;
    axpy(eps, v, up);
    axpy(-eps, v, um);
    return (J(up) - J(um)) / (2 * eps);
  };
  const double fd_plap =
      fd([&](const NodalField& w) { return energy(mesh, p, q, w).gradient_term; });
  const double pair_plap = dot(assemble_plaplacian(mesh, p, u), v);
  const double fd_src = fd([&](const NodalField& w) {
    const EnergyBreakdown e = energy(mesh, p, q, w);
    return e.log_term - e.q2_term;
  });
  const double pair_src = dot(assemble_logsource(mesh, q, u), v);

  const ExponentField p2f = ExponentField::constant(2.0);
  const SparseMatrix K = assemble_stiffness(mesh);
  const NodalField ap2 = assemble_plaplacian(mesh, p2f, u);
  NodalField ku = K.multiply(u);
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (mesh.boundary[i]) ku[i] = 0.0;
  double lin_err = 0.0, lin_ref = 0.0;
  for (std::size_t i = 0; i < ku.size(); ++i) {
    lin_err += (ap2[i] - ku[i]) * (ap2[i] - ku[i]);
    lin_ref += ku[i] * ku[i];
  }
  const double lin_rel = std::sqrt(lin_err / std::max(lin_ref, 1e-300));

  const bool pass = rel_err(pair_plap, fd_plap) < 1e-5 &&
                    rel_err(pair_src, fd_src) < 1e-5 && lin_rel < 1e-12;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "p-Laplacian FD rel %.2e, log-source FD rel %.2e, p=2 "
                "reduction rel %.2e",
                rel_err(pair_plap, fd_plap), rel_err(pair_src, fd_src),
                lin_rel);
  report(8, "operator consistency (Gateaux derivatives, p=2 reduction)", pass,
         buf);
}

void criterion9_blowup_demonstration() {
  RunConfig cfg;
  cfg.nx = cfg.ny = 50;
  cfg.p_spec = {ExponentKind::constant, 2.5, 0.0, 0.0};
  cfg.q_spec = {ExponentKind::constant, 6.0, 0.0, 0.0};
  cfg.sigma = 0.1;
  cfg.u0 = {U0Kind::gaussian, 5.0, 1.0, ""};
  cfg.T = 1.0;
  cfg.dt = 0.01;
  cfg.report_every = 0.01;
  const RunResult res = run(cfg);

  bool phi_increasing = true;
  double crossing_time = -1.0;
  for (std::size_t k = 1; k < res.records.size(); ++k) {
    if (!(res.records[k].phi > res.records[k - 1].phi)) phi_increasing = false;
    if (crossing_time < 0.0 && res.records[k].maxabs > 50.0)
      crossing_time = res.records[k].t;
  }
  const bool pass = res.termination == Termination::overflow &&
                    phi_increasing && crossing_time > 0.0 &&
                    crossing_time < res.termination_time;
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "termination=%s at t=%.3g, phi increasing=%d, max|u| crossed "
                "10*max|u0|=50 at t=%.3g; artifact M=%.4g (discrete suprema) "
                "vs published M(0)=%.6f — not reproduced by design",
                res.termination == Termination::overflow ? "overflow"
                : res.termination == Termination::completed ? "completed"
                                                            : "solver_failure",
                res.termination_time, phi_increasing ? 1 : 0, crossing_time,
                res.constants.M_threshold, kReferenceM0);
  report(9, "blow-up demonstration with overflow termination", pass, buf);
}

}  // namespace

int main() {
  std::printf("acceptance suite (paper configuration: 50x50 mesh on [-1,1]^2, "
              "sigma = 0.1)\n");
  const PaperSetup setup;
  criterion1_delta_envelope(setup);
  criterion2_initial_norm(setup);
  criterion3_lambda1(setup);
  const RunResult paper_run = criterion4_trajectory();
  criterion5_energy_dissipation(setup, paper_run);
  criterion6_certificate_algebra();
  criterion7_norm_machinery();
  criterion8_operator_consistency();
  criterion9_blowup_demonstration();
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
