#include "varexp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varexp/errors.hpp"

namespace varexp {

double dot(const NodalField& a, const NodalField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const NodalField& a) { return std::sqrt(dot(a, a)); }

double max_abs(const NodalField& a) {
  double m = 0.0;
  for (double v : a.values) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const NodalField& a) {
  for (double v : a.values)
    if (!std::isfinite(v)) return false;
  return true;
}

void axpy(double alpha, const NodalField& x, NodalField& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

SparseMatrix SparseMatrix::from_mesh_pattern(const Mesh& mesh) {
  const int n = mesh.num_vertices();
  std::vector<std::vector<int>> adjacency(n);
  for (int i = 0; i < n; ++i) adjacency[i].push_back(i);
  for (const Triangle& t : mesh.triangles) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (a != b) adjacency[t.v[a]].push_back(t.v[b]);
      }
    }
  }
  SparseMatrix m;
  m.row_offsets_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    auto& row = adjacency[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    m.row_offsets_[i + 1] = m.row_offsets_[i] + static_cast<int>(row.size());
  }
  m.cols_.reserve(m.row_offsets_[n]);
  for (int i = 0; i < n; ++i)
    m.cols_.insert(m.cols_.end(), adjacency[i].begin(), adjacency[i].end());
  m.values_.assign(m.cols_.size(), 0.0);
  return m;
}

int SparseMatrix::slot(int r, int c) const {
  const int lo = row_offsets_[r];
  const int hi = row_offsets_[r + 1];
  auto it = std::lower_bound(cols_.begin() + lo, cols_.begin() + hi, c);
  if (it == cols_.begin() + hi || *it != c) return -1;
  return static_cast<int>(it - cols_.begin());
}

void SparseMatrix::add(int r, int c, double v) {
  const int s = slot(r, c);
  if (s < 0) throw ConfigError("SparseMatrix::add outside pattern");
  values_[s] += v;
}

double SparseMatrix::entry(int r, int c) const {
  const int s = slot(r, c);
  return s < 0 ? 0.0 : values_[s];
}

NodalField SparseMatrix::multiply(const NodalField& x) const {
  NodalField y(static_cast<std::size_t>(dim()));
  multiply_into(x, y);
  return y;
}

void SparseMatrix::multiply_into(const NodalField& x, NodalField& y) const {
  if (static_cast<int>(x.size()) != dim() || static_cast<int>(y.size()) != dim())
    throw ConfigError("SparseMatrix::multiply: dimension mismatch");
  const int n = dim();
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      s += values_[k] * x[cols_[k]];
    y[i] = s;
  }
}

SparseMatrix SparseMatrix::plus(const SparseMatrix& other) const {
  if (row_offsets_ != other.row_offsets_ || cols_ != other.cols_)
    throw ConfigError("SparseMatrix::plus: pattern mismatch");
  SparseMatrix out = *this;
  for (std::size_t k = 0; k < values_.size(); ++k)
    out.values_[k] += other.values_[k];
  return out;
}

void apply_dirichlet(SparseMatrix& matrix, NodalField& rhs, const Mesh& mesh) {
  if (static_cast<int>(rhs.size()) != matrix.dim() ||
      matrix.dim() != mesh.num_vertices())
    throw ConfigError("apply_dirichlet: dimension mismatch");
  apply_dirichlet(matrix, mesh);
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (mesh.boundary[i]) rhs[i] = 0.0;
}

void apply_dirichlet(SparseMatrix& matrix, const Mesh& mesh) {
  if (matrix.dim() != mesh.num_vertices())
    throw ConfigError("apply_dirichlet: dimension mismatch");
  const auto& offsets = matrix.row_offsets();
  const auto& cols = matrix.cols();
  auto& vals = matrix.values();
  const int n = matrix.dim();
  for (int i = 0; i < n; ++i) {
    const bool row_constrained = mesh.boundary[i] != 0;
    for (int k = offsets[i]; k < offsets[i + 1]; ++k) {
      const bool col_constrained = mesh.boundary[cols[k]] != 0;
      if (!row_constrained && !col_constrained) continue;
      vals[k] = (cols[k] == i) ? 1.0 : 0.0;
    }
  }
}

NodalField cg_solve(const SparseMatrix& matrix, const NodalField& rhs,
                    const CgOptions& opts) {
  const int n = matrix.dim();
  if (static_cast<int>(rhs.size()) != n)
    throw ConfigError("cg_solve: dimension mismatch");
  if (!(opts.tol > 0.0)) throw ConfigError("cg_solve: tol must be positive");

  const double bnorm = norm2(rhs);
  NodalField x(static_cast<std::size_t>(n));
  if (bnorm == 0.0) return x;

  std::vector<double> inv_diag(n, 1.0);
  for (int i = 0; i < n; ++i) {
    const double d = matrix.entry(i, i);
    inv_diag[i] = (d != 0.0) ? 1.0 / d : 1.0;
  }

  NodalField r = rhs;
  NodalField z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  NodalField p = z;
  NodalField Ap(static_cast<std::size_t>(n));
  double rz = dot(r, z);

  const int maxiter = opts.maxiter > 0 ? opts.maxiter : 10 * n;
  double rnorm = bnorm;
  for (int iter = 0; iter < maxiter; ++iter) {
    matrix.multiply_into(p, Ap);
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0) || !std::isfinite(pAp))
      throw SolverError("cg_solve: matrix not positive definite on iterate",
                        rnorm);
    const double alpha = rz / pAp;
    axpy(alpha, p, x);
    axpy(-alpha, Ap, r);
    rnorm = norm2(r);
    if (rnorm <= opts.tol * bnorm) return x;
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError("cg_solve: no convergence within max iterations", rnorm);
}

}  // namespace varexp
