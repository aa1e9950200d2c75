#pragma once

// Shared helpers for the unit tests: independent quadrature and enumeration
// oracles that do not reuse the library's assembly or rule construction.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sdg/forms.hpp"
#include "sdg/mesh.hpp"

namespace testsupport {

using sdg::Vec2;

/// Exact integral of x^a y^b over the unit triangle: a! b! / (a + b + 2)!.
inline double exact_monomial_integral(int a, int b) {
  // a! b! / (a+b+2)! as the product of k/(a+k) over k = 1..b, which equals
  // a! b! / (a+b)!, then divided by the two remaining factors.
  double v = 1.0;
  for (int k = 1; k <= b; ++k) v *= static_cast<double>(k) / (a + k);
  for (int k = a + b + 1; k <= a + b + 2; ++k) v /= k;
  return v;
}

/// Degree-5 exact rule on a physical triangle, written out here so the oracle
/// shares nothing with the library's quadrature construction.
inline double deg5_rule(Vec2 a, Vec2 b, Vec2 c, const std::function<double(Vec2)>& f) {
  const double s = std::sqrt(15.0);
  const double a1 = (6.0 - s) / 21.0, w1 = (155.0 - s) / 1200.0;
  const double a2 = (6.0 + s) / 21.0, w2 = (155.0 + s) / 1200.0;
  const double area = 0.5 * std::abs(sdg::cross(b - a, c - a));
  struct P { double l0, l1, l2, w; };
  const P pts[7] = {{1.0 / 3, 1.0 / 3, 1.0 / 3, 9.0 / 40.0},
                    {1 - 2 * a1, a1, a1, w1}, {a1, 1 - 2 * a1, a1, w1}, {a1, a1, 1 - 2 * a1, w1},
                    {1 - 2 * a2, a2, a2, w2}, {a2, 1 - 2 * a2, a2, w2}, {a2, a2, 1 - 2 * a2, w2}};
  double total = 0.0;
  for (const P& p : pts) {
    const Vec2 x = p.l0 * a + p.l1 * b + p.l2 * c;
    total += p.w * f(x);
  }
  return area * total;
}

/// Composite oracle: recursive 4-way subdivision (depth levels) with the
/// degree-5 rule on each piece.  Depth 5 gives ~1e-10 accuracy for smooth
/// trigonometric integrands on coarse-mesh sub-triangles.
inline double oracle_integrate(Vec2 a, Vec2 b, Vec2 c, const std::function<double(Vec2)>& f,
                               int depth = 5) {
  if (depth == 0) return deg5_rule(a, b, c, f);
  const Vec2 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
  return oracle_integrate(a, ab, ca, f, depth - 1) + oracle_integrate(ab, b, bc, f, depth - 1) +
         oracle_integrate(ca, bc, c, f, depth - 1) + oracle_integrate(ab, bc, ca, f, depth - 1);
}

/// Composite Gauss oracle on a segment (two-panel 8-point rule per recursion).
inline double oracle_integrate_edge(Vec2 p0, Vec2 p1, const std::function<double(Vec2)>& f,
                                    int panels = 64) {
  // 8-point Gauss-Legendre nodes on (0,1), written out explicitly.
  static const double xs[8] = {0.01985507175123188, 0.10166676129318664,
                               0.2372337950418355,  0.40828267875217505,
                               0.5917173212478249,  0.7627662049581645,
                               0.8983332387068134,  0.9801449282487681};
  static const double ws[8] = {0.05061426814518813, 0.11119051722668724,
                               0.15685332293894363, 0.18134189168918097,
                               0.18134189168918097, 0.15685332293894363,
                               0.11119051722668724, 0.05061426814518813};
  const double len = sdg::norm(p1 - p0);
  double total = 0.0;
  for (int panel = 0; panel < panels; ++panel) {
    const double t0 = static_cast<double>(panel) / panels;
    const double dt = 1.0 / panels;
    for (int q = 0; q < 8; ++q) {
      const double t = t0 + xs[q] * dt;
      total += ws[q] * dt * len * f(p0 + t * (p1 - p0));
    }
  }
  return total;
}

/// Brute-force enumeration of the edges of the structured staggered mesh,
/// straight from grid arithmetic (no mesh code involved).
struct StructuredEdgeCounts {
  int primal_total = 0;
  int primal_boundary = 0;
  int primal_interior = 0;
  int dual = 0;
};

inline StructuredEdgeCounts enumerate_structured_edges(int N) {
  std::set<std::pair<int, int>> primal;
  auto vid = [N](int i, int j) { return j * (N + 1) + i; };
  auto add = [&](int p, int q) { primal.insert({std::min(p, q), std::max(p, q)}); };
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      add(vid(i, j), vid(i + 1, j));
      add(vid(i, j + 1), vid(i + 1, j + 1));
      add(vid(i, j), vid(i, j + 1));
      add(vid(i + 1, j), vid(i + 1, j + 1));
      add(vid(i, j), vid(i + 1, j + 1));
    }
  }
  StructuredEdgeCounts counts;
  counts.primal_total = static_cast<int>(primal.size());
  for (const auto& [p, q] : primal) {
    const int pi = p % (N + 1), pj = p / (N + 1);
    const int qi = q % (N + 1), qj = q / (N + 1);
    const bool boundary = (pi == 0 && qi == 0) || (pi == N && qi == N) ||
                          (pj == 0 && qj == 0) || (pj == N && qj == N);
    if (boundary) ++counts.primal_boundary;
  }
  counts.primal_interior = counts.primal_total - counts.primal_boundary;
  counts.dual = 3 * 2 * N * N;   // three dual edges per macro triangle
  return counts;
}

inline Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

inline Vec2 random_point_in_sub(const sdg::StaggeredMesh& mesh, int sub, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double r0 = dist(rng), r1 = dist(rng);
  if (r0 + r1 > 1.0) {
    r0 = 1.0 - r0;
    r1 = 1.0 - r1;
  }
  const auto c = mesh.sub_coords(sub);
  return c[0] + r0 * (c[1] - c[0]) + r1 * (c[2] - c[0]);
}

/// Dense symmetric eigenvalues of a sparse matrix restricted to given rows.
inline Eigen::VectorXd dense_eigenvalues(const sdg::SpMat& m, const std::vector<int>& keep) {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(keep.size(), keep.size());
  std::vector<int> slot(m.rows(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) slot[keep[i]] = static_cast<int>(i);
  for (int k = 0; k < m.outerSize(); ++k)
    for (sdg::SpMat::InnerIterator it(m, k); it; ++it)
      if (slot[it.row()] >= 0 && slot[it.col()] >= 0)
        dense(slot[it.row()], slot[it.col()]) = it.value();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  return solver.eigenvalues();
}

inline std::vector<int> free_dofs(const sdg::DofSpace& space) {
  std::vector<int> keep;
  for (int i = 0; i < space.n_dofs; ++i)
    if (!space.boundary_dof[i]) keep.push_back(i);
  return keep;
}

}  // namespace testsupport
