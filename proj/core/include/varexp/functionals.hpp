#pragma once

#include <functional>
#include <string>

#include "varexp/assembly.hpp"
#include "varexp/exponents.hpp"
#include "varexp/linalg.hpp"
#include "varexp/mesh.hpp"
#include "varexp/quadrature.hpp"

namespace varexp {

/// integral of |w|^{r(x)} dx (or |grad w|^{r(x)} with use_gradient).
double modular(const Mesh& mesh, const ExponentField& r, const NodalField& w,
               bool use_gradient, const QuadratureRule& rule = default_rule());

/// Luxemburg norm: the lambda > 0 with modular(w/lambda) = 1, located by
/// monotone bisection after a geometric bracket from modular^{1/r_inf};
/// relative tolerance on lambda. Zero field gives zero.
double luxemburg_norm(const Mesh& mesh, const ExponentField& r,
                      const NodalField& w, bool use_gradient,
                      double tol = 1e-10,
                      const QuadratureRule& rule = default_rule());

/// sqrt(w'Mw + w'Kw) with the unconstrained mass and stiffness matrices.
double h01_norm(const SparseMatrix& M, const SparseMatrix& K,
                const NodalField& w);

struct EnergyBreakdown {
  double gradient_term = 0.0;  // integral (1/p(x)) |grad u|^{p(x)}
  double log_term = 0.0;       // integral (1/q(x)) |u|^{q(x)} ln|u|
  double q2_term = 0.0;        // integral (1/q(x)^2) |u|^{q(x)}
  double E = 0.0;              // gradient_term - log_term + q2_term
};

EnergyBreakdown energy(const Mesh& mesh, const ExponentField& p,
                       const ExponentField& q, const NodalField& w,
                       const QuadratureRule& rule = default_rule());

/// Scalar constants of the blow-up/decay certificates. C1 and C2 are
/// discrete suprema over the P1 space (the continuum embeddings they stand
/// for fail above exponent 2); every consumer of this struct treats them as
/// mesh-dependent estimates.
struct ConstantsBundle {
  double p1 = 0.0, p2 = 0.0, q1 = 0.0, q2 = 0.0;
  double sigma = 0.0;
  double B_sigma = 0.0;
  double B1 = 0.0;      // max(1, B_sigma)
  double alpha1 = 0.0;  // (e sigma q1/(q1+sigma) B1^{-(q1+sigma)})^{p2/(q1-p2+sigma)}
  double E1 = 0.0;      // (1/p2 - 1/(q1+sigma)) alpha1
  double lambda1 = 0.0;
  double C1 = 0.0, C2 = 0.0;
  double A = 0.0, B = 0.0, C = 0.0;
  double M_threshold = 0.0;  // min((A/2B)^{1/(q1-p1+sigma)}, (A/2C)^{1/(q2-p1+sigma)})

  std::string serialize(const std::string& line_prefix) const;
};

/// Comparison functions of the energy estimates.
double g_eval(double xi, const ConstantsBundle& c);
double h_eval(double xi, const ConstantsBundle& c);

/// Smallest generalized eigenvalue of Kc x = lambda Mc x on the interior
/// block, by inverse power iteration with CG inner solves. Both matrices
/// must be Dirichlet-constrained.
double first_eigenvalue(const SparseMatrix& Mc, const SparseMatrix& Kc,
                        const Mesh& mesh, double tol = 1e-8,
                        double cg_tol = 1e-10);

/// A norm on nodal fields together with its Euclidean gradient, as needed
/// by the embedding-constant ascent.
struct NormFunctional {
  std::function<double(const NodalField&)> value;
  std::function<NodalField(const NodalField&)> gradient;
  std::string name;
};

NormFunctional luxemburg_functional(const Mesh& mesh, const ExponentField& r,
                                    bool use_gradient, double tol = 1e-10,
                                    const QuadratureRule& rule = default_rule());
/// Constant-exponent (integral |grad v|^p)^{1/p}.
NormFunctional lp_gradient_functional(const Mesh& mesh, double p,
                                      const QuadratureRule& rule = default_rule());
NormFunctional h01_functional(const SparseMatrix& M, const SparseMatrix& K);

struct AscentOptions {
  int starts = 20;
  int steps = 200;
  unsigned seed = 0x5eed;
  double initial_step = 0.25;
};

struct AscentResult {
  double value = 0.0;
  NodalField maximizer;
  bool stagnated = false;
};

/// max over the discrete space (boundary zeros) of num(v)/den(v), by
/// normalized-gradient ascent with backtracking from seeded random starts;
/// deterministic given the seed, max-reduced by start index.
AscentResult embedding_constant(const Mesh& mesh, const NormFunctional& num,
                                const NormFunctional& den,
                                const AscentOptions& opts = {});

enum class Lambda1Mode { fem, analytic_rectangle };

struct ConstantsOptions {
  Lambda1Mode lambda1_mode = Lambda1Mode::fem;
  double lambda1_tol = 1e-8;
  double cg_tol = 1e-10;
  AscentOptions ascent;
};

/// Evaluates the whole bundle: lambda1 (FEM or the rectangle eigenvalue
/// pi^2(1/Lx^2 + 1/Ly^2)), B_sigma/C1/C2 by ascent, then the closed forms
/// for alpha1, E1, A, B, C and the smallness threshold M.
ConstantsBundle compute_constants(const Mesh& mesh, const ExponentField& p,
                                  const ExponentField& q, double sigma,
                                  const SparseMatrix& M, const SparseMatrix& K,
                                  const SparseMatrix& Mc,
                                  const SparseMatrix& Kc,
                                  const ConstantsOptions& opts = {},
                                  const QuadratureRule& rule = default_rule());

}  // namespace varexp
