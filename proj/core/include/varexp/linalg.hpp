#pragma once

#include <cstddef>
#include <vector>

#include "varexp/mesh.hpp"

namespace varexp {

/// One value per mesh vertex at a fixed time level.
struct NodalField {
  std::vector<double> values;

  NodalField() = default;
  explicit NodalField(std::size_t n, double fill = 0.0) : values(n, fill) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double* data() { return values.data(); }
  const double* data() const { return values.data(); }
};

double dot(const NodalField& a, const NodalField& b);
double norm2(const NodalField& a);
double max_abs(const NodalField& a);
bool all_finite(const NodalField& a);
// y += alpha * x
void axpy(double alpha, const NodalField& x, NodalField& y);

/// CSR matrix with the symmetric sparsity pattern of the P1 vertex
/// adjacency (diagonal included). The pattern is fixed at construction;
/// assembly adds into existing slots only.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  static SparseMatrix from_mesh_pattern(const Mesh& mesh);

  int dim() const { return static_cast<int>(row_offsets_.size()) - 1; }
  void add(int r, int c, double v);
  double entry(int r, int c) const;  // zero if (r,c) is outside the pattern

  NodalField multiply(const NodalField& x) const;
  void multiply_into(const NodalField& x, NodalField& y) const;

  /// Entry-wise sum; both operands must share the pattern.
  SparseMatrix plus(const SparseMatrix& other) const;

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  std::vector<int> row_offsets_;
  std::vector<int> cols_;
  std::vector<double> values_;
  int slot(int r, int c) const;  // -1 if absent
};

/// Reduce Dirichlet rows/columns to identity-row form and zero the
/// corresponding rhs entries. Symmetry is preserved (homogeneous data).
void apply_dirichlet(SparseMatrix& matrix, NodalField& rhs, const Mesh& mesh);
void apply_dirichlet(SparseMatrix& matrix, const Mesh& mesh);

struct CgOptions {
  double tol = 1e-10;
  int maxiter = 0;  // 0 means 10 * dim
};

/// Jacobi-preconditioned conjugate gradients for an SPD system.
/// Throws SolverError carrying the final residual on non-convergence.
NodalField cg_solve(const SparseMatrix& matrix, const NodalField& rhs,
                    const CgOptions& opts = {});

}  // namespace varexp
