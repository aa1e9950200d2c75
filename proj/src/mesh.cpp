#include "sdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace sdg {

std::array<Vec2, 3> StaggeredMesh::sub_coords(int sub) const {
  const auto& t = sub_triangles[sub];
  return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
}

double StaggeredMesh::sub_area(int sub) const {
  const auto c = sub_coords(sub);
  return 0.5 * cross(c[1] - c[0], c[2] - c[0]);
}

Vec2 StaggeredMesh::sub_centroid(int sub) const {
  const auto c = sub_coords(sub);
  return (c[0] + c[1] + c[2]) / 3.0;
}

int StaggeredMesh::count(EdgeKind kind) const {
  int n = 0;
  for (const auto& e : edges)
    if (e.kind == kind) ++n;
  return n;
}

Vec2 centroid(Vec2 a, Vec2 b, Vec2 c) {
  const double twice_area = cross(b - a, c - a);
  const double scale = norm(b - a) * norm(c - a);
  if (scale == 0.0 || std::abs(twice_area) <= 1e-14 * scale)
    throw std::invalid_argument("centroid: degenerate triangle");
  return (a + b + c) / 3.0;
}

namespace {

// Outward side sign of sub `sub` on edge `e`: +1 when the edge normal points
// away from the sub-triangle, -1 otherwise.
double outward_sign(const StaggeredMesh& mesh, const Edge& e, int sub) {
  const Vec2 mid = 0.5 * (mesh.vertices[e.vertices[0]] + mesh.vertices[e.vertices[1]]);
  const double d = dot(e.normal, mesh.sub_centroid(sub) - mid);
  if (d == 0.0) throw std::runtime_error("edge normal: ambiguous side");
  return d < 0.0 ? 1.0 : -1.0;
}

}  // namespace

StaggeredMesh build_staggered(std::vector<Vec2> vertices,
                              std::vector<std::array<int, 3>> macro_triangles) {
  StaggeredMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.n_macro_vertices = static_cast<int>(mesh.vertices.size());
  mesh.macro_triangles = std::move(macro_triangles);

  const int n_macro = mesh.n_macros();
  if (n_macro == 0) throw std::invalid_argument("build_staggered: empty triangulation");

  mesh.interior_point.resize(n_macro);
  mesh.sub_triangles.reserve(3 * n_macro);
  for (int m = 0; m < n_macro; ++m) {
    auto& tri = mesh.macro_triangles[m];
    for (int v : tri)
      if (v < 0 || v >= mesh.n_macro_vertices)
        throw std::invalid_argument("build_staggered: vertex id out of range");
    const Vec2 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    if (cross(b - a, c - a) < 0.0) std::swap(tri[1], tri[2]);
    const Vec2 nu = centroid(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
    const int nu_id = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(nu);
    mesh.interior_point[m] = nu_id;
    mesh.sub_triangles.push_back({tri[0], tri[1], nu_id});
    mesh.sub_triangles.push_back({tri[1], tri[2], nu_id});
    mesh.sub_triangles.push_back({tri[2], tri[0], nu_id});
  }

  // Edge table keyed by the sorted endpoint pair; vertex ids are exact, so no
  // coordinate comparison is involved.
  std::map<std::pair<int, int>, int> edge_index;
  auto get_edge = [&](int p, int q) {
    const int lo = std::min(p, q), hi = std::max(p, q);
    auto [it, inserted] = edge_index.try_emplace({lo, hi}, static_cast<int>(mesh.edges.size()));
    if (inserted) {
      Edge e;
      e.vertices = {lo, hi};
      e.length = norm(mesh.vertices[hi] - mesh.vertices[lo]);
      mesh.edges.push_back(e);
    }
    return it->second;
  };

  mesh.sub_edges.resize(mesh.n_subs());
  for (int s = 0; s < mesh.n_subs(); ++s) {
    const auto& t = mesh.sub_triangles[s];
    const int e0 = get_edge(t[0], t[1]);
    const int e1 = get_edge(t[1], t[2]);
    const int e2 = get_edge(t[2], t[0]);
    mesh.sub_edges[s] = {e0, e1, e2};
    for (int e : {e0, e1, e2}) {
      auto& adj = mesh.edges[e].adjacent_subs;
      if (adj[0] < 0) adj[0] = s;
      else if (adj[1] < 0) adj[1] = s;
      else throw std::invalid_argument("build_staggered: edge shared by more than two triangles");
    }
  }

  for (auto& e : mesh.edges) {
    const bool is_dual = e.vertices[0] >= mesh.n_macro_vertices ||
                         e.vertices[1] >= mesh.n_macro_vertices;
    if (is_dual) {
      if (e.adjacent_subs[1] < 0)
        throw std::invalid_argument("build_staggered: dangling dual edge");
      if (mesh.macro_of_sub(e.adjacent_subs[0]) != mesh.macro_of_sub(e.adjacent_subs[1]))
        throw std::runtime_error("build_staggered: dual edge crosses macro triangles");
      e.kind = EdgeKind::Dual;
    } else {
      e.kind = e.adjacent_subs[1] < 0 ? EdgeKind::PrimalBoundary : EdgeKind::PrimalInterior;
    }

    // Fix the normal as the outward normal of the first adjacent sub-triangle.
    const Vec2 tangent = normalized(mesh.vertices[e.vertices[1]] - mesh.vertices[e.vertices[0]]);
    e.normal = rot90(tangent);
    if (outward_sign(mesh, e, e.adjacent_subs[0]) < 0.0) e.normal = -1.0 * e.normal;
    e.side_sign[0] = outward_sign(mesh, e, e.adjacent_subs[0]);
    e.side_sign[1] = e.adjacent_subs[1] >= 0 ? outward_sign(mesh, e, e.adjacent_subs[1]) : 0.0;
    if (e.side_sign[0] != 1.0)
      throw std::runtime_error("build_staggered: inconsistent edge orientation");
    if (e.adjacent_subs[1] >= 0 && e.side_sign[0] + e.side_sign[1] != 0.0)
      throw std::runtime_error("build_staggered: edge normals do not cancel");
  }
  return mesh;
}

StaggeredMesh build_structured(int N) {
  if (N < 1) throw std::invalid_argument("build_structured: N must be positive");
  std::vector<Vec2> vertices;
  vertices.reserve((N + 1) * (N + 1));
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i)
      vertices.push_back({static_cast<double>(i) / N, static_cast<double>(j) / N});

  auto vid = [N](int i, int j) { return j * (N + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * N * N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      // Diagonal from (i,j) to (i+1,j+1); both halves counter-clockwise.
      tris.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      tris.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  StaggeredMesh mesh = build_staggered(std::move(vertices), std::move(tris));
  mesh.structured_N = N;
  return mesh;
}

double jump(const Edge& edge, double trace_plus, double trace_minus) {
  if (edge.adjacent_subs[1] < 0)
    throw std::invalid_argument("jump: boundary edge has a single trace");
  return edge.side_sign[0] * trace_plus + edge.side_sign[1] * trace_minus;
}

void flip_edge_normal(StaggeredMesh& mesh, int edge) {
  Edge& e = mesh.edges.at(edge);
  e.normal = -1.0 * e.normal;
  e.side_sign[0] = -e.side_sign[0];
  e.side_sign[1] = -e.side_sign[1];
}

std::array<int, 3> region_around_interior_point(const StaggeredMesh& mesh, int macro) {
  if (macro < 0 || macro >= mesh.n_macros())
    throw std::invalid_argument("region_around_interior_point: macro id out of range");
  return {3 * macro, 3 * macro + 1, 3 * macro + 2};
}

std::vector<int> region_of_primal_edge(const StaggeredMesh& mesh, int edge) {
  const Edge& e = mesh.edges.at(edge);
  if (e.kind == EdgeKind::Dual)
    throw std::invalid_argument("region_of_primal_edge: edge is not primal");
  std::vector<int> subs{e.adjacent_subs[0]};
  if (e.adjacent_subs[1] >= 0) subs.push_back(e.adjacent_subs[1]);
  return subs;
}

namespace {

bool sub_contains(const StaggeredMesh& mesh, int sub, Vec2 p, double tol) {
  const auto c = mesh.sub_coords(sub);
  const double d = cross(c[1] - c[0], c[2] - c[0]);
  const double l0 = cross(c[1] - p, c[2] - p) / d;
  const double l1 = cross(c[2] - p, c[0] - p) / d;
  const double l2 = cross(c[0] - p, c[1] - p) / d;
  return l0 >= -tol && l1 >= -tol && l2 >= -tol;
}

}  // namespace

int locate_sub(const StaggeredMesh& mesh, Vec2 p) {
  const double tol = 1e-12;
  if (mesh.structured_N > 0) {
    const int N = mesh.structured_N;
    if (p.x < -tol || p.x > 1.0 + tol || p.y < -tol || p.y > 1.0 + tol) return -1;
    const int i = std::min(static_cast<int>(p.x * N), N - 1);
    const int j = std::min(static_cast<int>(p.y * N), N - 1);
    // Candidate squares: points on grid lines belong to several cells, so look
    // one cell back in each direction and keep the lowest matching sub id.
    for (int jj = std::max(0, j - 1); jj <= std::min(N - 1, j + 1); ++jj) {
      for (int ii = std::max(0, i - 1); ii <= std::min(N - 1, i + 1); ++ii) {
        const int macro0 = 2 * (jj * N + ii);
        for (int s = 3 * macro0; s < 3 * macro0 + 6; ++s)
          if (sub_contains(mesh, s, p, tol)) return s;
      }
    }
    return -1;
  }
  for (int s = 0; s < mesh.n_subs(); ++s)
    if (sub_contains(mesh, s, p, tol)) return s;
  return -1;
}

void dump_mesh(const StaggeredMesh& mesh, std::ostream& out) {
  out.precision(17);
  out << "VERTICES " << mesh.vertices.size() << "\n";
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    out << v << " " << mesh.vertices[v].x << " " << mesh.vertices[v].y << "\n";
  out << "SUBTRIANGLES " << mesh.n_subs() << "\n";
  for (int s = 0; s < mesh.n_subs(); ++s) {
    const auto& t = mesh.sub_triangles[s];
    out << s << " " << t[0] << " " << t[1] << " " << t[2] << " " << mesh.macro_of_sub(s) << "\n";
  }
  out << "EDGES " << mesh.edges.size() << "\n";
  for (std::size_t i = 0; i < mesh.edges.size(); ++i) {
    const Edge& e = mesh.edges[i];
    const char* kind = e.kind == EdgeKind::PrimalInterior ? "primal_interior"
                       : e.kind == EdgeKind::PrimalBoundary ? "primal_boundary"
                                                            : "dual";
    out << i << " " << e.vertices[0] << " " << e.vertices[1] << " " << kind << " "
        << e.normal.x << " " << e.normal.y << "\n";
  }
}

}  // namespace sdg
