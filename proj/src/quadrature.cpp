#include "sdg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdg {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton iteration on the Legendre polynomial P_n over (-1,1), then map to [0,1].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Redo one function evaluation at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = 0.5 * (x + 1.0);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule segment_rule(int n) {
  QuadratureRule rule;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  rule.points.reserve(n);
  for (int i = 0; i < n; ++i) {
    rule.points.push_back({x[i], 0.0});
    rule.weights.push_back(w[i]);
  }
  rule.exactness_degree = 2 * n - 1;
  return rule;
}

namespace {

// Rotation of reference coordinates induced by the cyclic vertex map
// v0 -> v1 -> v2 -> v0 of the unit triangle.
Vec2 rotate_ref(Vec2 p) { return {1.0 - p.x - p.y, p.x}; }

QuadratureRule collapsed_rule(int degree) {
  // Tensor Gauss rule mapped onto the triangle by (u,v) -> (u, v(1-u));
  // the Jacobian raises the u-degree by one, hence the m below.
  const int m = (degree + 3) / 2;
  std::vector<double> x, w;
  gauss_legendre(m, x, w);

  QuadratureRule rule;
  rule.exactness_degree = degree;
  rule.points.reserve(3 * m * m);
  rule.weights.reserve(3 * m * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Vec2 p{x[i], x[j] * (1.0 - x[i])};
      const double wt = w[i] * w[j] * (1.0 - x[i]) / 3.0;
      for (int r = 0; r < 3; ++r) {
        rule.points.push_back(p);
        rule.weights.push_back(wt);
        p = rotate_ref(p);
      }
    }
  }
  return rule;
}

}  // namespace

QuadratureRule triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
  QuadratureRule rule;
  if (degree <= 1) {
    rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
    rule.weights = {0.5};
    rule.exactness_degree = 1;
  } else if (degree == 2) {
    rule.points = {{2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}, {1.0 / 6.0, 1.0 / 6.0}};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    rule.exactness_degree = 2;
  } else if (degree <= 5) {
    // Classical 7-point rule, exact to degree 5.
    const double s = std::sqrt(15.0);
    const double a1 = (6.0 - s) / 21.0, w1 = (155.0 - s) / 2400.0;
    const double a2 = (6.0 + s) / 21.0, w2 = (155.0 + s) / 2400.0;
    rule.points = {{1.0 / 3.0, 1.0 / 3.0},
                   {1.0 - 2.0 * a1, a1}, {a1, 1.0 - 2.0 * a1}, {a1, a1},
                   {1.0 - 2.0 * a2, a2}, {a2, 1.0 - 2.0 * a2}, {a2, a2}};
    rule.weights = {9.0 / 80.0, w1, w1, w1, w2, w2, w2};
    rule.exactness_degree = 5;
  } else {
    rule = collapsed_rule(degree);
  }
  return rule;
}

}  // namespace sdg
