#include "varexp/mesh.hpp"

#include <cmath>
#include <fstream>

#include "varexp/errors.hpp"

namespace varexp {

int Mesh::num_boundary_vertices() const {
  int count = 0;
  for (unsigned char b : boundary) count += b;
  return count;
}

Mesh build_mesh(const Rect& rect, int nx, int ny) {
  if (!rect.valid()) throw ConfigError("build_mesh: degenerate rectangle");
  if (nx < 1 || ny < 1) throw ConfigError("build_mesh: need nx >= 1 and ny >= 1");

  Mesh mesh;
  mesh.rect = rect;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  mesh.boundary.assign(static_cast<std::size_t>(nx + 1) * (ny + 1), 0);

  const double hx = rect.width() / nx;
  const double hy = rect.height() / ny;
  for (int j = 0; j <= ny; ++j) {
    // exact endpoints so boundary flags are reproducible
    const double y = (j == ny) ? rect.ymax : rect.ymin + j * hy;
    for (int i = 0; i <= nx; ++i) {
      const double x = (i == nx) ? rect.xmax : rect.xmin + i * hx;
      mesh.vertices.push_back({x, y});
      if (i == 0 || i == nx || j == 0 || j == ny)
        mesh.boundary[mesh.vertex_index(i, j)] = 1;
    }
  }

  mesh.triangles.reserve(2u * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = mesh.vertex_index(i, j);
      const int v10 = mesh.vertex_index(i + 1, j);
      const int v01 = mesh.vertex_index(i, j + 1);
      const int v11 = mesh.vertex_index(i + 1, j + 1);
      // lower-left to upper-right diagonal in every cell
      mesh.triangles.push_back({{v00, v10, v11}});
      mesh.triangles.push_back({{v00, v11, v01}});
    }
  }
  return mesh;
}

TriangleGeometry triangle_geometry(const Mesh& mesh, int t) {
  if (t < 0 || t >= mesh.num_triangles())
    throw ConfigError("triangle_geometry: triangle index out of range");
  const auto& tri = mesh.triangles[t].v;
  const Point& a = mesh.vertices[tri[0]];
  const Point& b = mesh.vertices[tri[1]];
  const Point& c = mesh.vertices[tri[2]];
  const double d1x = b.x - a.x, d1y = b.y - a.y;
  const double d2x = c.x - a.x, d2y = c.y - a.y;
  const double det = d1x * d2y - d1y * d2x;
  if (!(det > 0.0))
    throw ConfigError("triangle_geometry: degenerate or inverted triangle");

  TriangleGeometry geom;
  geom.area = 0.5 * det;
  geom.grad[1] = {d2y / det, -d2x / det};
  geom.grad[2] = {-d1y / det, d1x / det};
  geom.grad[0] = {-geom.grad[1][0] - geom.grad[2][0],
                  -geom.grad[1][1] - geom.grad[2][1]};
  return geom;
}

void write_mesh_dump(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("write_mesh_dump: cannot open " + path);
  out << "vertices " << mesh.num_vertices() << " triangles "
      << mesh.num_triangles() << "\n";
  char line[128];
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g %.17g %d\n", mesh.vertices[i].x,
                  mesh.vertices[i].y, mesh.boundary[i] ? 1 : 0);
    out << line;
  }
  for (const Triangle& t : mesh.triangles)
    out << t.v[0] << " " << t.v[1] << " " << t.v[2] << "\n";
  if (!out) throw IoError("write_mesh_dump: write failed for " + path);
}

}  // namespace varexp
