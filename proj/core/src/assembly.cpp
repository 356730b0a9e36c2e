#include "varexp/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "varexp/errors.hpp"

namespace varexp {

namespace {

template <typename PerElement>
void for_elements_deterministic(const Mesh& mesh, int threads,
                                NodalField& out, PerElement&& body) {
  const int ntri = mesh.num_triangles();
  const int cap = threads > 0 ? threads : assembly_thread_cap();
  if (cap <= 1 || ntri < 256) {
    for (int t = 0; t < ntri; ++t) body(t, out);
    return;
  }
  const int nchunks = std::min(cap, ntri);
  std::vector<NodalField> buffers(nchunks,
                                  NodalField(static_cast<std::size_t>(out.size())));
  std::vector<std::thread> workers;
  workers.reserve(nchunks);
  for (int c = 0; c < nchunks; ++c) {
    workers.emplace_back([&, c] {
      const int begin = static_cast<int>(static_cast<long long>(ntri) * c / nchunks);
      const int end =
          static_cast<int>(static_cast<long long>(ntri) * (c + 1) / nchunks);
      for (int t = begin; t < end; ++t) body(t, buffers[c]);
    });
  }
  for (auto& w : workers) w.join();
  // merge in fixed chunk order
  for (int c = 0; c < nchunks; ++c) axpy(1.0, buffers[c], out);
}

}  // namespace

int assembly_thread_cap() {
  static const int cap = [] {
    const char* env = std::getenv("VAREXP_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v > 0 ? v : 1;
  }();
  return cap;
}

SparseMatrix assemble_mass(const Mesh& mesh, const QuadratureRule& rule) {
  SparseMatrix M = SparseMatrix::from_mesh_pattern(mesh);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t].v;
    const TriangleGeometry geom = triangle_geometry(mesh, t);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double s = 0.0;
        for (int k = 0; k < rule.size(); ++k)
          s += rule.weights[k] * rule.points[k][a] * rule.points[k][b];
        M.add(tri[a], tri[b], geom.area * s);
      }
    }
  }
  return M;
}

SparseMatrix assemble_stiffness(const Mesh& mesh, const QuadratureRule& rule) {
  (void)rule;  // gradients are element-constant, any rule integrates exactly
  SparseMatrix K = SparseMatrix::from_mesh_pattern(mesh);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t].v;
    const TriangleGeometry geom = triangle_geometry(mesh, t);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double gg = geom.grad[a][0] * geom.grad[b][0] +
                          geom.grad[a][1] * geom.grad[b][1];
        K.add(tri[a], tri[b], geom.area * gg);
      }
    }
  }
  return K;
}

NodalField assemble_plaplacian(const Mesh& mesh, const ExponentField& p,
                               const NodalField& u, const QuadratureRule& rule,
                               int threads) {
  if (static_cast<int>(u.size()) != mesh.num_vertices())
    throw ConfigError("assemble_plaplacian: field/mesh size mismatch");
  NodalField out(u.size());
  for_elements_deterministic(mesh, threads, out, [&](int t, NodalField& acc) {
    const auto& tri = mesh.triangles[t].v;
    const TriangleGeometry geom = triangle_geometry(mesh, t);
    double gx = 0.0, gy = 0.0;
    for (int a = 0; a < 3; ++a) {
      gx += u[tri[a]] * geom.grad[a][0];
      gy += u[tri[a]] * geom.grad[a][1];
    }
    const double s = std::hypot(gx, gy);
    if (s == 0.0) return;  // the term vanishes for every p(x) >= 2
    double p0 = 0.0;
    bool p_constant = true;
    for (int k = 0; k < rule.size(); ++k) {
      const Point x = barycentric_to_physical(mesh, t, rule.points[k]);
      const double pk = p(x.x, x.y);
      if (k == 0)
        p0 = pk;
      else if (pk != p0)
        p_constant = false;
      if (!p_constant) break;
    }
    double factor = 0.0;
    if (p_constant) {
      factor = std::pow(s, p0 - 2.0);
    } else {
      for (int k = 0; k < rule.size(); ++k) {
        const Point x = barycentric_to_physical(mesh, t, rule.points[k]);
        factor += rule.weights[k] * std::pow(s, p(x.x, x.y) - 2.0);
      }
    }
    factor *= geom.area;
    for (int a = 0; a < 3; ++a) {
      const double gdot = gx * geom.grad[a][0] + gy * geom.grad[a][1];
      acc[tri[a]] += factor * gdot;
    }
  });
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (mesh.boundary[i]) out[i] = 0.0;
  return out;
}

double log_kernel(double s, double q) {
  if (s == 0.0) return 0.0;
  const double a = std::abs(s);
  return std::pow(a, q - 2.0) * s * std::log(a);
}

NodalField assemble_logsource(const Mesh& mesh, const ExponentField& q,
                              const NodalField& u, const QuadratureRule& rule,
                              int threads) {
  if (static_cast<int>(u.size()) != mesh.num_vertices())
    throw ConfigError("assemble_logsource: field/mesh size mismatch");
  NodalField out(u.size());
  for_elements_deterministic(mesh, threads, out, [&](int t, NodalField& acc) {
    const auto& tri = mesh.triangles[t].v;
    const TriangleGeometry geom = triangle_geometry(mesh, t);
    for (int k = 0; k < rule.size(); ++k) {
      double uk = 0.0;
      for (int a = 0; a < 3; ++a) uk += u[tri[a]] * rule.points[k][a];
      const Point x = barycentric_to_physical(mesh, t, rule.points[k]);
      const double f = log_kernel(uk, q(x.x, x.y));
      if (f == 0.0) continue;
      const double w = geom.area * rule.weights[k] * f;
      for (int a = 0; a < 3; ++a) acc[tri[a]] += w * rule.points[k][a];
    }
  });
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (mesh.boundary[i]) out[i] = 0.0;
  return out;
}

}  // namespace varexp
