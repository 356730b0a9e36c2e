#pragma once

#include <optional>
#include <string>

#include "varexp/functionals.hpp"

namespace varexp {

struct BlowupCertificate {
  double E0 = 0.0;
  double grad_norm0_pow = 0.0;  // ||grad u0||_{p(.)}^{p2}
  double alpha1 = 0.0;
  double alpha2 = 0.0;  // meaningful only when certified
  bool energy_cond_ok = false;
  bool norm_cond_ok = false;
  double zeta = 0.0;
  double script_B = 0.0;  // equals zeta * q1
  double psi0 = 0.0;
  double phi0 = 0.0;  // (1/2) ||u0||^2_{H01}
  std::optional<double> t_star;       // 2 phi0 / ((zeta q1 + p2 - 2) psi0)
  std::optional<double> t_star_norm;  // ||u0||^2 / ((B+p2-2)((q1-p2)/(q1+s) a1 - (B+p2) E0))

  bool certified() const { return energy_cond_ok && norm_cond_ok; }
};

/// Root of h on its decreasing branch: the alpha2 > alpha1 with
/// h(alpha2) = E0, by bisection on [alpha1, hi] with hi grown geometrically
/// (factor 2, cap 1e6 * alpha1). Requires 0 <= E0 < E1.
double solve_alpha2(double E0, const ConstantsBundle& c);

/// Certificate from precomputed scalar measurements; also the entry point
/// used by randomized identity tests.
BlowupCertificate certify_blowup(double E0, double grad_norm_pow,
                                 double u0_h01, const ConstantsBundle& c);

BlowupCertificate check_blowup(const Mesh& mesh, const ExponentField& p,
                               const ExponentField& q, const SparseMatrix& M,
                               const SparseMatrix& K, const NodalField& u0,
                               const ConstantsBundle& c,
                               const QuadratureRule& rule = default_rule());

enum class EnvelopeKind { power, exponential };

struct DecayCertificate {
  double u0_h01 = 0.0;
  double M_threshold = 0.0;
  bool cond_ok = false;  // ||u0||_{H01} < M_threshold
  EnvelopeKind kind = EnvelopeKind::power;
  bool has_envelope = false;
  // envelope parameters
  double A = 0.0;
  double p1 = 0.0;
  double exp_prefactor = 0.0;  // exponential kind only
  double exp_rate = 0.0;       // A/2

  double delta(double t) const;
};

/// Decay certificate of the smallness criterion; the power envelope
/// (p1 > 2) needs only A and ||u0||, so it is attached regardless of
/// cond_ok. For p1 = 2 an undefined prefactor (A <= B ||u0||^{q1-2+sigma})
/// throws ConfigError.
DecayCertificate check_decay(double u0_h01, const ConstantsBundle& c);
DecayCertificate check_decay(const Mesh& mesh, const SparseMatrix& M,
                             const SparseMatrix& K, const NodalField& u0,
                             const ConstantsBundle& c);

/// H(t) = E1 - sigma alpha1 / (p2 (q1 + sigma)) - E(t).
double h_functional(double E_t, const ConstantsBundle& c);

std::string render_blowup_report(const BlowupCertificate& blowup,
                                 const ConstantsBundle& c);
std::string render_decay_report(const DecayCertificate& decay,
                                const ConstantsBundle& c);
std::string render_certificates(const BlowupCertificate& blowup,
                                const DecayCertificate& decay,
                                const ConstantsBundle& c);

/// key=value lines for the diagnostics CSV header block.
std::string serialize_certificates(const BlowupCertificate& blowup,
                                   const DecayCertificate& decay,
                                   const std::string& line_prefix);

}  // namespace varexp
