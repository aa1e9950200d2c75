#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdg/geometry.hpp"

namespace sdg {

enum class EdgeKind { PrimalInterior, PrimalBoundary, Dual };

/// Mesh edge with a fixed unit normal.
///
/// Primal edges come from the initial triangulation; dual edges connect the
/// interior point of a macro triangle to its vertices.  The stored normal is
/// the outward normal of the first adjacent sub-triangle; for boundary edges
/// it points out of the domain.  side_sign[i] is the dot product of the normal
/// with the outward normal of adjacent_subs[i], always exactly +1 or -1.
struct Edge {
  std::array<int, 2> vertices{-1, -1};        // endpoint vertex ids, lower id first
  EdgeKind kind = EdgeKind::Dual;
  std::array<int, 2> adjacent_subs{-1, -1};   // lower sub id first; [1] is -1 on the boundary
  Vec2 normal;
  std::array<double, 2> side_sign{0.0, 0.0};
  double length = 0.0;
};

/// Staggered two-level triangulation of a polygonal domain.
///
/// The initial (macro) triangulation is refined by connecting each macro
/// triangle's interior point to its three vertices, producing three
/// sub-triangles per macro.  Macro m owns sub-triangles 3m, 3m+1, 3m+2; each
/// sub-triangle is stored as (a, b, nu) with (a, b) its primal edge and nu the
/// interior point, oriented counter-clockwise.
struct StaggeredMesh {
  std::vector<Vec2> vertices;                     // macro vertices first, then interior points
  int n_macro_vertices = 0;
  std::vector<std::array<int, 3>> macro_triangles;
  std::vector<int> interior_point;                // vertex id of nu, per macro
  std::vector<std::array<int, 3>> sub_triangles;
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> sub_edges;      // edge ids per sub: primal, (b,nu), (nu,a)
  int structured_N = 0;                           // grid resolution when built structured, else 0

  int n_macros() const { return static_cast<int>(macro_triangles.size()); }
  int n_subs() const { return static_cast<int>(sub_triangles.size()); }
  int macro_of_sub(int sub) const { return sub / 3; }

  Vec2 vertex(int v) const { return vertices[v]; }
  std::array<Vec2, 3> sub_coords(int sub) const;
  double sub_area(int sub) const;
  Vec2 sub_centroid(int sub) const;

  /// Counts by edge kind.
  int count(EdgeKind kind) const;
};

/// Area-weighted centroid of a triangle; rejects degenerate input.
Vec2 centroid(Vec2 a, Vec2 b, Vec2 c);

/// Builds the staggered mesh over an arbitrary conforming macro triangulation.
/// Interior points are placed at the centroids.  Macro triangles are given as
/// vertex-id triples into `vertices`; orientation is normalized internally.
StaggeredMesh build_staggered(std::vector<Vec2> vertices,
                              std::vector<std::array<int, 3>> macro_triangles);

/// Uniform N x N staggered mesh of the unit square.  Each grid square is split
/// by the diagonal running from its lower-left to its upper-right corner.
StaggeredMesh build_structured(int N);

/// Jump value (n.n+) phi+ + (n.n-) phi- across an interior edge.
double jump(const Edge& edge, double trace_plus, double trace_minus);

/// Flips the stored normal of one edge (and the side signs with it).  The
/// normal orientation is a bookkeeping choice; assembled operators must not
/// depend on it.
void flip_edge_normal(StaggeredMesh& mesh, int edge);

/// Sub-triangle ids of the macro region S(nu) around the interior point of a
/// macro triangle, and of the union region R(e) of a primal edge.
std::array<int, 3> region_around_interior_point(const StaggeredMesh& mesh, int macro);
std::vector<int> region_of_primal_edge(const StaggeredMesh& mesh, int edge);

/// Locates the sub-triangle containing p (lowest id wins on shared edges).
/// Falls back to a linear scan on non-structured meshes.  Returns -1 if p is
/// outside the mesh.
int locate_sub(const StaggeredMesh& mesh, Vec2 p);

/// Plain-text mesh dump: VERTICES / SUBTRIANGLES / EDGES sections.
void dump_mesh(const StaggeredMesh& mesh, std::ostream& out);

}  // namespace sdg
