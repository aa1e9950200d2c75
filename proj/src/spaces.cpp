#include "sdg/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sdg {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

int local_index_of_vertex(const std::array<int, 3>& tri, int v) {
  for (int l = 0; l < 3; ++l)
    if (tri[l] == v) return l;
  throw std::logic_error("vertex not part of sub-triangle");
}

// Intrinsic frame of an edge: unit tangent from the lower to the higher
// endpoint id and its +90 degree rotation.  Depends only on the endpoint
// order, never on the stored normal, so dof directions are unaffected by
// normal flips.
void edge_frame(const StaggeredMesh& mesh, const Edge& e, Vec2& m, Vec2& t) {
  t = normalized(mesh.vertices[e.vertices[1]] - mesh.vertices[e.vertices[0]]);
  m = rot90(t);
}

// Direction d with d.m1 = 1 and d.m2 = 0 (dual to the pair of frame normals
// meeting at an interior point).
Vec2 dual_direction(Vec2 m1, Vec2 m2) {
  const Vec2 t2 = rot90(m2);
  const double denom = dot(m1, t2);
  if (std::abs(denom) < 1e-12)
    throw std::runtime_error("build_space: parallel dual edges at interior point");
  return t2 / denom;
}

DofSpace build_scalar_space(const StaggeredMesh& mesh, SpaceKind kind) {
  DofSpace space;
  space.kind = kind;
  space.degree = 1;
  space.mesh = &mesh;
  space.n_local = 3;

  const int n_slots = 3 * mesh.n_subs();
  UnionFind uf(n_slots);
  auto slot = [](int sub, int l) { return 3 * sub + l; };

  // Continuity across interior primal edges: identify the endpoint values of
  // the two adjacent sub-triangles.
  for (const Edge& e : mesh.edges) {
    if (e.kind != EdgeKind::PrimalInterior) continue;
    const int s0 = e.adjacent_subs[0], s1 = e.adjacent_subs[1];
    for (int v : e.vertices)
      uf.merge(slot(s0, local_index_of_vertex(mesh.sub_triangles[s0], v)),
               slot(s1, local_index_of_vertex(mesh.sub_triangles[s1], v)));
  }

  // Point continuity at macro vertices for the embedded space.
  if (kind == SpaceKind::UhTilde) {
    std::vector<int> first_slot(mesh.n_macro_vertices, -1);
    for (int s = 0; s < mesh.n_subs(); ++s) {
      for (int l = 0; l < 3; ++l) {
        const int v = mesh.sub_triangles[s][l];
        if (v >= mesh.n_macro_vertices) continue;
        if (first_slot[v] < 0) first_slot[v] = slot(s, l);
        else uf.merge(first_slot[v], slot(s, l));
      }
    }
  }

  // Number the classes in order of their smallest slot.
  std::vector<int> dof_of_root(n_slots, -1);
  space.links.resize(n_slots);
  space.local_node.resize(n_slots);
  for (int s = 0; s < mesh.n_subs(); ++s) {
    for (int l = 0; l < 3; ++l) {
      const int root = uf.find(slot(s, l));
      if (dof_of_root[root] < 0) {
        dof_of_root[root] = space.n_dofs++;
        space.dof_position.push_back(mesh.vertices[mesh.sub_triangles[s][l]]);
      }
      space.links[slot(s, l)] = {dof_of_root[root], 1.0};
      space.local_node[slot(s, l)] = l;
    }
  }

  // Dirichlet carriers: every dof whose class touches a boundary primal edge.
  space.boundary_dof.assign(space.n_dofs, false);
  for (const Edge& e : mesh.edges) {
    if (e.kind != EdgeKind::PrimalBoundary) continue;
    const int s = e.adjacent_subs[0];
    for (int v : e.vertices)
      space.boundary_dof[space.link(s, local_index_of_vertex(mesh.sub_triangles[s], v)).dof] = true;
  }
  return space;
}

DofSpace build_flux_space(const StaggeredMesh& mesh) {
  DofSpace space;
  space.kind = SpaceKind::Wh;
  space.degree = 1;
  space.mesh = &mesh;
  space.n_local = 6;

  const int n_subs = mesh.n_subs();
  space.links.resize(6 * n_subs);
  space.local_node.resize(6 * n_subs);
  space.local_dir.resize(6 * n_subs);
  space.block_offset.assign(mesh.n_macros() + 1, 0);

  // Normal dofs are shared between the two sub-triangles meeting at a dual
  // edge, keyed by (dual edge, endpoint).  Tangential dofs are private to a
  // (sub-triangle, macro-vertex corner) pair.  All dofs of one macro triangle
  // are numbered contiguously, giving the block structure of the mass matrix.
  for (int m = 0; m < mesh.n_macros(); ++m) {
    space.block_offset[m] = space.n_dofs;

    std::vector<int> dual_edges;
    for (int s = 3 * m; s < 3 * m + 3; ++s)
      for (int e : {mesh.sub_edges[s][1], mesh.sub_edges[s][2]})
        if (std::find(dual_edges.begin(), dual_edges.end(), e) == dual_edges.end())
          dual_edges.push_back(e);
    std::sort(dual_edges.begin(), dual_edges.end());
    if (dual_edges.size() != 3)
      throw std::logic_error("build_space: macro triangle without three dual edges");

    // (edge, endpoint slot) -> global dof; endpoint slot 0/1 follows the
    // stored endpoint order of the edge.
    std::array<std::array<int, 2>, 3> normal_dof;
    for (int k = 0; k < 3; ++k) {
      const Edge& e = mesh.edges[dual_edges[k]];
      Vec2 mdir, tdir;
      edge_frame(mesh, e, mdir, tdir);
      for (int p = 0; p < 2; ++p) {
        normal_dof[k][p] = space.n_dofs++;
        space.dof_position.push_back(mesh.vertices[e.vertices[p]]);
        space.dof_direction.push_back(mdir);
      }
    }
    auto normal_dof_at = [&](int edge, int v) {
      for (int k = 0; k < 3; ++k) {
        if (dual_edges[k] != edge) continue;
        const Edge& e = mesh.edges[edge];
        return normal_dof[k][v == e.vertices[0] ? 0 : 1];
      }
      throw std::logic_error("build_space: dual edge lookup failed");
    };

    for (int s = 3 * m; s < 3 * m + 3; ++s) {
      const auto& tri = mesh.sub_triangles[s];
      const int ea = mesh.sub_edges[s][2];  // edge (nu, a)
      const int eb = mesh.sub_edges[s][1];  // edge (b, nu)
      Vec2 ma, ta, mb, tb;
      edge_frame(mesh, mesh.edges[ea], ma, ta);
      edge_frame(mesh, mesh.edges[eb], mb, tb);

      auto set_local = [&](int l, int node, Vec2 dir, int dof) {
        space.local_node[6 * s + l] = node;
        space.local_dir[6 * s + l] = dir;
        space.links[6 * s + l] = {dof, 1.0};
      };
      auto new_tangential_dof = [&](int vertex, Vec2 tdir) {
        space.dof_position.push_back(mesh.vertices[vertex]);
        space.dof_direction.push_back(tdir);
        return space.n_dofs++;
      };

      // Corner a: normal and tangential components in the frame of edge (a, nu).
      set_local(0, 0, ma, normal_dof_at(ea, tri[0]));
      set_local(1, 0, ta, new_tangential_dof(tri[0], ta));

      // Corner b: frame of edge (b, nu).
      set_local(2, 1, mb, normal_dof_at(eb, tri[1]));
      set_local(3, 1, tb, new_tangential_dof(tri[1], tb));

      // Corner nu: directions dual to the two frame normals, so that each
      // coefficient is exactly the normal component on its own edge.
      set_local(4, 2, dual_direction(ma, mb), normal_dof_at(ea, tri[2]));
      set_local(5, 2, dual_direction(mb, ma), normal_dof_at(eb, tri[2]));
    }
  }
  space.block_offset[mesh.n_macros()] = space.n_dofs;
  space.boundary_dof.assign(space.n_dofs, false);
  return space;
}

}  // namespace

DofSpace build_space(const StaggeredMesh& mesh, SpaceKind kind, int degree) {
  if (degree != 1)
    throw std::invalid_argument("build_space: only degree 1 is implemented");
  if (kind == SpaceKind::Wh) return build_flux_space(mesh);
  return build_scalar_space(mesh, kind);
}

ScalarBasis DofSpace::scalar_basis(int sub, Vec2 p) const {
  const auto c = mesh->sub_coords(sub);
  const double d = cross(c[1] - c[0], c[2] - c[0]);
  ScalarBasis basis;
  basis.value = {cross(c[1] - p, c[2] - p) / d,
                 cross(c[2] - p, c[0] - p) / d,
                 cross(c[0] - p, c[1] - p) / d};
  for (double v : basis.value)
    if (v < -1e-10)
      throw std::invalid_argument("scalar_basis: point outside sub-triangle");
  basis.grad = {rot90(c[2] - c[1]) / d, rot90(c[0] - c[2]) / d, rot90(c[1] - c[0]) / d};
  return basis;
}

VectorBasis DofSpace::vector_basis(int sub, Vec2 p) const {
  if (kind != SpaceKind::Wh)
    throw std::invalid_argument("vector_basis: scalar space");
  const ScalarBasis s = scalar_basis(sub, p);
  VectorBasis basis;
  for (int l = 0; l < 6; ++l) {
    const int node = local_node[6 * sub + l];
    const Vec2 dir = local_dir[6 * sub + l];
    basis.value[l] = s.value[node] * dir;
    basis.div[l] = dot(s.grad[node], dir);
  }
  return basis;
}

int DofSpace::n_boundary_dofs() const {
  return static_cast<int>(std::count(boundary_dof.begin(), boundary_dof.end(), true));
}

EmbeddingMatrix build_embedding(const DofSpace& uh, const DofSpace& uh_tilde) {
  if (uh.kind != SpaceKind::Uh || uh_tilde.kind != SpaceKind::UhTilde)
    throw std::invalid_argument("build_embedding: expects (Uh, UhTilde)");
  if (uh.mesh != uh_tilde.mesh || uh.degree != uh_tilde.degree)
    throw std::invalid_argument("build_embedding: spaces built on different meshes or degrees");

  std::vector<int> tilde_of(uh.n_dofs, -1);
  for (std::size_t i = 0; i < uh.links.size(); ++i) {
    const int u = uh.links[i].dof, t = uh_tilde.links[i].dof;
    if (tilde_of[u] >= 0 && tilde_of[u] != t)
      throw std::runtime_error("build_embedding: spaces are not nested");
    tilde_of[u] = t;
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(uh.n_dofs);
  for (int u = 0; u < uh.n_dofs; ++u)
    trips.emplace_back(tilde_of[u], u, 1.0);
  EmbeddingMatrix emb;
  emb.P.resize(uh_tilde.n_dofs, uh.n_dofs);
  emb.P.setFromTriplets(trips.begin(), trips.end());
  return emb;
}

double eval_scalar(const DofSpace& space, const Eigen::VectorXd& coeffs, int sub, Vec2 p) {
  const ScalarBasis basis = space.scalar_basis(sub, p);
  double v = 0.0;
  for (int l = 0; l < 3; ++l) {
    const DofLink& link = space.link(sub, l);
    v += coeffs[link.dof] * link.weight * basis.value[l];
  }
  return v;
}

Vec2 eval_vector(const DofSpace& space, const Eigen::VectorXd& coeffs, int sub, Vec2 p) {
  const VectorBasis basis = space.vector_basis(sub, p);
  Vec2 v{0.0, 0.0};
  for (int l = 0; l < 6; ++l) {
    const DofLink& link = space.link(sub, l);
    v += coeffs[link.dof] * link.weight * basis.value[l];
  }
  return v;
}

}  // namespace sdg
