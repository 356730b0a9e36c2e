#pragma once

#include "varexp/exponents.hpp"
#include "varexp/linalg.hpp"
#include "varexp/mesh.hpp"
#include "varexp/quadrature.hpp"

namespace varexp {

/// Mass matrix, entry (i,j) = integral of phi_i phi_j. SPD before
/// constraints.
SparseMatrix assemble_mass(const Mesh& mesh,
                           const QuadratureRule& rule = default_rule());

/// Stiffness matrix, entry (i,j) = integral of grad phi_i . grad phi_j.
/// Symmetric positive semidefinite with zero row sums before constraints.
SparseMatrix assemble_stiffness(const Mesh& mesh,
                                const QuadratureRule& rule = default_rule());

/// Variable-exponent p-Laplacian load vector:
///   out_i = integral of |grad u_h|^{p(x)-2} grad u_h . grad phi_i,
/// with the element-constant gradient and per-quadrature-point exponent.
/// Rows of Dirichlet vertices are returned as zero.
NodalField assemble_plaplacian(const Mesh& mesh, const ExponentField& p,
                               const NodalField& u,
                               const QuadratureRule& rule = default_rule(),
                               int threads = 0);

/// Logarithmic source vector: out_i = integral of f(u_h(x)) phi_i with
/// f(s) = |s|^{q(x)-2} s ln|s| and f(0) = 0; u_h is evaluated as the P1
/// interpolant at the quadrature points. Dirichlet rows are zero.
NodalField assemble_logsource(const Mesh& mesh, const ExponentField& q,
                              const NodalField& u,
                              const QuadratureRule& rule = default_rule(),
                              int threads = 0);

/// Pointwise kernel of the logarithmic source.
double log_kernel(double s, double q);

/// Thread cap for the element loops of the nonlinear assemblies; reads
/// VAREXP_THREADS, defaults to 1. Per-chunk buffers are merged in fixed
/// chunk order so results are deterministic for a fixed thread count.
int assembly_thread_cap();

}  // namespace varexp
