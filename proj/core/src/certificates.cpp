#include "varexp/certificates.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "varexp/errors.hpp"

namespace varexp {

namespace {
constexpr double kTolAlpha2 = 1e-13;  // relative bracket width
}

double solve_alpha2(double E0, const ConstantsBundle& c) {
  if (!(E0 >= 0.0) || !(E0 < c.E1))
    throw ConfigError("solve_alpha2: requires 0 <= E0 < E1");
  // h decreases from h(alpha1) = E1 towards -infinity; bracket the root.
  double lo = c.alpha1;
  double hi = 2.0 * c.alpha1;
  const double cap = 1e6 * c.alpha1;
  while (h_eval(hi, c) >= E0) {
    hi *= 2.0;
    if (hi > cap)
      throw SolverError("solve_alpha2: bracket exceeded 1e6 * alpha1", hi);
  }
  while (hi - lo > kTolAlpha2 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (h_eval(mid, c) >= E0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

BlowupCertificate certify_blowup(double E0, double grad_norm_pow,
                                 double u0_h01, const ConstantsBundle& c) {
  BlowupCertificate cert;
  cert.E0 = E0;
  cert.grad_norm0_pow = grad_norm_pow;
  cert.alpha1 = c.alpha1;
  cert.phi0 = 0.5 * u0_h01 * u0_h01;

  const double energy_bound =
      c.p2 / (c.q1 + c.p2) * (c.E1 - c.sigma * c.alpha1 / (c.p2 * (c.q1 + c.sigma)));
  cert.energy_cond_ok = E0 >= 0.0 && E0 < energy_bound;
  cert.norm_cond_ok = c.alpha1 < grad_norm_pow &&
                      grad_norm_pow <= std::pow(c.B1, -c.p2);
  if (!cert.certified()) return cert;

  cert.alpha2 = solve_alpha2(E0, c);
  cert.zeta = (c.q1 - c.p2) / c.q1 *
              (1.0 - std::pow(cert.alpha1 / cert.alpha2,
                              (c.q1 + c.sigma) / c.p2));
  cert.script_B = (c.q1 - c.p2) *
                  (1.0 - std::pow(cert.alpha1 / cert.alpha2,
                                  (c.sigma + c.q1) / c.p2));
  cert.psi0 = -(cert.zeta * c.q1 + c.p2) * E0 +
              c.p2 * (c.E1 - c.sigma * c.alpha1 / (c.p2 * (c.q1 + c.sigma)));
  cert.t_star =
      2.0 * cert.phi0 / ((cert.zeta * c.q1 + c.p2 - 2.0) * cert.psi0);
  cert.t_star_norm =
      u0_h01 * u0_h01 /
      ((cert.script_B + c.p2 - 2.0) *
       ((c.q1 - c.p2) / (c.q1 + c.sigma) * c.alpha1 -
        (cert.script_B + c.p2) * E0));
  return cert;
}

BlowupCertificate check_blowup(const Mesh& mesh, const ExponentField& p,
                               const ExponentField& q, const SparseMatrix& M,
                               const SparseMatrix& K, const NodalField& u0,
                               const ConstantsBundle& c,
                               const QuadratureRule& rule) {
  const double E0 = energy(mesh, p, q, u0, rule).E;
  const double grad_norm = luxemburg_norm(mesh, p, u0, true, 1e-10, rule);
  return certify_blowup(E0, std::pow(grad_norm, c.p2), h01_norm(M, K, u0), c);
}

double DecayCertificate::delta(double t) const {
  if (!has_envelope) return std::numeric_limits<double>::quiet_NaN();
  if (kind == EnvelopeKind::power) {
    return std::pow(4.0 / (A * (p1 - 2.0) * t + 4.0 * std::pow(u0_h01, 2.0 - p1)),
                    1.0 / (p1 - 2.0));
  }
  return exp_prefactor * std::exp(-exp_rate * t);
}

DecayCertificate check_decay(double u0_h01, const ConstantsBundle& c) {
  DecayCertificate cert;
  cert.u0_h01 = u0_h01;
  cert.M_threshold = c.M_threshold;
  cert.cond_ok = u0_h01 < c.M_threshold;
  cert.A = c.A;
  cert.p1 = c.p1;
  if (c.p1 > 2.0) {
    cert.kind = EnvelopeKind::power;
    cert.has_envelope = u0_h01 > 0.0;
  } else {
    cert.kind = EnvelopeKind::exponential;
    const double pow_u0 = std::pow(u0_h01, c.q1 - 2.0 + c.sigma);
    const double denom = c.A - c.B * pow_u0;
    if (!(denom > 0.0))
      throw ConfigError(
          "check_decay: p1 = 2 and A <= B ||u0||^{q1-2+sigma}; exponential "
          "envelope prefactor undefined");
    cert.exp_prefactor =
        std::pow(c.A * pow_u0 / denom, 1.0 / (c.q1 - 2.0 + c.sigma));
    cert.exp_rate = 0.5 * c.A;
    cert.has_envelope = u0_h01 > 0.0;
  }
  return cert;
}

DecayCertificate check_decay(const Mesh& mesh, const SparseMatrix& M,
                             const SparseMatrix& K, const NodalField& u0,
                             const ConstantsBundle& c) {
  (void)mesh;
  return check_decay(h01_norm(M, K, u0), c);
}

double h_functional(double E_t, const ConstantsBundle& c) {
  return c.E1 - c.sigma * c.alpha1 / (c.p2 * (c.q1 + c.sigma)) - E_t;
}

namespace {

const char* yesno(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string render_blowup_report(const BlowupCertificate& blowup,
                                 const ConstantsBundle& c) {
  (void)c;
  char buf[256];
  std::string out;
  auto line = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    out += buf;
    out += '\n';
  };
  line("%s", "blow-up certificate (finite-time blow-up criterion)");
  line("  E(0)                     = %.9g", blowup.E0);
  line("  ||grad u0||_{p(.)}^p2    = %.9g", blowup.grad_norm0_pow);
  line("  alpha1                   = %.9g", blowup.alpha1);
  line("  energy condition         : %s", yesno(blowup.energy_cond_ok));
  line("  norm condition           : %s", yesno(blowup.norm_cond_ok));
  if (blowup.certified()) {
    line("  alpha2                   = %.9g", blowup.alpha2);
    line("  zeta                     = %.9g", blowup.zeta);
    line("  script_B (= zeta*q1)     = %.9g", blowup.script_B);
    line("  psi(0)                   = %.9g", blowup.psi0);
    line("  phi(0)                   = %.9g", blowup.phi0);
    line("  T* (upper bound)         = %.9g", *blowup.t_star);
    line("  T* (norm form)           = %.9g", *blowup.t_star_norm);
  } else {
    line("%s", "  verdict                  : hypotheses not met; no T* bound");
  }
  return out;
}

std::string render_decay_report(const DecayCertificate& decay,
                                const ConstantsBundle& c) {
  (void)c;
  char buf[256];
  std::string out;
  auto line = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    out += buf;
    out += '\n';
  };
  line("%s", "decay certificate (smallness criterion)");
  line("  ||u0||_{H01}             = %.9g", decay.u0_h01);
  line("  M threshold (discrete)   = %.9g", decay.M_threshold);
  line("  ||u0|| < M               : %s", yesno(decay.cond_ok));
  line("%s", "  (C1, C2 are discrete suprema over the P1 space; the threshold is");
  line("%s", "   mesh-dependent and conservative)");
  if (decay.has_envelope) {
    line("  envelope kind            : %s",
         decay.kind == EnvelopeKind::power ? "power" : "exponential");
    line("  delta(0)                 = %.9g", decay.delta(0.0));
    line("  delta(1)                 = %.9g", decay.delta(1.0));
  }
  return out;
}

std::string render_certificates(const BlowupCertificate& blowup,
                                const DecayCertificate& decay,
                                const ConstantsBundle& c) {
  std::string out = render_blowup_report(blowup, c);
  out += render_decay_report(decay, c);
  out += c.serialize("  const.");
  return out;
}

std::string serialize_certificates(const BlowupCertificate& blowup,
                                   const DecayCertificate& decay,
                                   const std::string& prefix) {
  char buf[160];
  std::string out;
  auto emit = [&](const char* key, double value) {
    std::snprintf(buf, sizeof(buf), "%s%s=%.9g\n", prefix.c_str(), key, value);
    out += buf;
  };
  auto emit_flag = [&](const char* key, bool value) {
    out += prefix + key + (value ? "=1\n" : "=0\n");
  };
  emit("blowup.E0", blowup.E0);
  emit("blowup.grad_norm0_pow", blowup.grad_norm0_pow);
  emit_flag("blowup.energy_cond_ok", blowup.energy_cond_ok);
  emit_flag("blowup.norm_cond_ok", blowup.norm_cond_ok);
  emit_flag("blowup.certified", blowup.certified());
  if (blowup.certified()) {
    emit("blowup.alpha2", blowup.alpha2);
    emit("blowup.zeta", blowup.zeta);
    emit("blowup.script_B", blowup.script_B);
    emit("blowup.psi0", blowup.psi0);
    emit("blowup.phi0", blowup.phi0);
    emit("blowup.t_star", *blowup.t_star);
    emit("blowup.t_star_norm", *blowup.t_star_norm);
  }
  emit("decay.u0_h01", decay.u0_h01);
  emit("decay.M_threshold", decay.M_threshold);
  emit_flag("decay.cond_ok", decay.cond_ok);
  emit_flag("decay.has_envelope", decay.has_envelope);
  if (decay.has_envelope) {
    out += prefix + "decay.envelope_kind=" +
           (decay.kind == EnvelopeKind::power ? "power" : "exponential") + "\n";
  }
  return out;
}

}  // namespace varexp
