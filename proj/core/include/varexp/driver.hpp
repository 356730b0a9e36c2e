#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "varexp/certificates.hpp"
#include "varexp/config.hpp"
#include "varexp/functionals.hpp"

namespace varexp {

struct DiagnosticsRecord {
  double t = 0.0;
  double theta = 0.0;  // ||u||^2_{H01}
  double h01 = 0.0;
  double phi = 0.0;  // theta / 2
  EnergyBreakdown energy;
  double H = 0.0;
  double lux_grad_p = 0.0;  // ||grad u||_{p(.)}
  std::optional<double> delta;
  double maxabs = 0.0;
};

enum class Termination { completed, overflow, solver_failure };

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  NodalField final_state;
  ConstantsBundle constants;
  BlowupCertificate blowup;
  DecayCertificate decay;
  AdmissibilityReport admissibility;
  Termination termination = Termination::completed;
  double termination_time = 0.0;
  std::string termination_detail;
  std::vector<std::pair<double, NodalField>> snapshots;
};

/// Everything the time step needs; assembled once, reused each step
/// (the system matrix of the scheme is constant in time).
struct StepContext {
  const Mesh& mesh;
  const QuadratureRule& rule;
  const ExponentField& p;
  const ExponentField& q;
  const SparseMatrix& system;              // M + K, unconstrained
  const SparseMatrix& constrained_system;  // M + K with Dirichlet rows
  CgOptions cg;
  bool with_source = true;
  int threads = 0;
};

/// One semi-implicit step: solves
///   (M+K) u^{n+1} = (M+K) u^n + dt (F(u^n) - A_p(u^n))
/// with Dirichlet constraints; the returned state has exact boundary zeros.
NodalField step(const NodalField& state, double dt, const StepContext& ctx);

/// Nodal interpolation of the configured datum. Boundary values are kept
/// as sampled; the constrained system imposes u = 0 on the boundary from
/// the first solve onward.
NodalField interpolate_initial(const U0Spec& spec, const Mesh& mesh);

double overflow_threshold();  // 1e12 on max|u|

RunResult run(const RunConfig& config);

}  // namespace varexp
