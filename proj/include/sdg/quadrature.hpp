#pragma once

#include <vector>

#include "sdg/geometry.hpp"

namespace sdg {

/// Quadrature rule on a reference element.
///
/// Triangle rules live on the unit triangle with vertices (0,0), (1,0), (0,1)
/// and their weights sum to 1/2.  Segment rules live on [0,1] (the point is
/// stored in .x, .y is zero) and their weights sum to 1.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness_degree = 0;
};

/// Gauss-Legendre nodes and weights on [0,1]; exact for degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Symmetric triangle rule with positive weights, exact for polynomials of
/// total degree <= degree.  Low orders use classical closed-form rules; higher
/// orders use a collapsed tensor rule averaged over the three rotations of the
/// triangle, which keeps the weights positive for any degree.
QuadratureRule triangle_rule(int degree);

/// Gauss-Legendre rule on [0,1] with n points.
QuadratureRule segment_rule(int n);

}  // namespace sdg
