#include "varexp/quadrature.hpp"

namespace varexp {

const QuadratureRule& default_rule() {
  // Two symmetric 3-orbits, exact through degree 4.
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    r.order = 4;
    const double a = 0.445948490915965;
    const double wa = 0.223381589678011;
    const double b = 0.091576213509771;
    const double wb = 0.109951743655322;
    r.points = {{1 - 2 * a, a, a}, {a, 1 - 2 * a, a}, {a, a, 1 - 2 * a},
                {1 - 2 * b, b, b}, {b, 1 - 2 * b, b}, {b, b, 1 - 2 * b}};
    r.weights = {wa, wa, wa, wb, wb, wb};
    return r;
  }();
  return rule;
}

}  // namespace varexp
