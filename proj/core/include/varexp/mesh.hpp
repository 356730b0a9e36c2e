#pragma once

#include <array>
#include <string>
#include <vector>

namespace varexp {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Rect {
  double xmin = -1.0;
  double xmax = 1.0;
  double ymin = -1.0;
  double ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool valid() const { return xmin < xmax && ymin < ymax; }
};

struct Triangle {
  std::array<int, 3> v{};  // counter-clockwise vertex indices
};

/// Structured triangulation of a rectangle with P1 connectivity.
/// Vertices are ordered row-major by j*(nx+1)+i; every grid cell is split
/// along its lower-left to upper-right diagonal.
struct Mesh {
  Rect rect;
  int nx = 0;
  int ny = 0;
  std::vector<Point> vertices;
  std::vector<Triangle> triangles;
  std::vector<unsigned char> boundary;  // 1 if the vertex lies on the Dirichlet boundary

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_boundary_vertices() const;
  int vertex_index(int i, int j) const { return j * (nx + 1) + i; }
};

Mesh build_mesh(const Rect& rect, int nx, int ny);

struct TriangleGeometry {
  double area = 0.0;
  // Gradients of the three P1 basis functions; they sum to the zero vector.
  std::array<std::array<double, 2>, 3> grad{};
};

TriangleGeometry triangle_geometry(const Mesh& mesh, int t);

/// Plain-text dump: "vertices <N> triangles <M>", then N lines "x y b",
/// then M lines "i j k".
void write_mesh_dump(const Mesh& mesh, const std::string& path);

}  // namespace varexp
