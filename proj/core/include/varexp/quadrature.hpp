#pragma once

#include <array>
#include <vector>

#include "varexp/mesh.hpp"

namespace varexp {

/// Symmetric quadrature rule on the reference triangle, barycentric
/// coordinates, weights summing to one (scaled by the element area at the
/// use site).
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int order = 0;  // polynomial exactness degree

  int size() const { return static_cast<int>(points.size()); }
};

/// 6-point degree-4 rule used for all assembly and functional integrals.
const QuadratureRule& default_rule();

inline Point barycentric_to_physical(const Mesh& mesh, int t,
                                     const std::array<double, 3>& bary) {
  const auto& tri = mesh.triangles[t].v;
  const Point& a = mesh.vertices[tri[0]];
  const Point& b = mesh.vertices[tri[1]];
  const Point& c = mesh.vertices[tri[2]];
  return {bary[0] * a.x + bary[1] * b.x + bary[2] * c.x,
          bary[0] * a.y + bary[1] * b.y + bary[2] * c.y};
}

}  // namespace varexp
