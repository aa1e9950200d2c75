#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "sdg/mesh.hpp"
#include "support.hpp"

using namespace sdg;

TEST_CASE("centroid of simple triangles") {
  const Vec2 c1 = centroid({0, 0}, {1, 0}, {0, 1});
  CHECK(c1.x == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(c1.y == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const Vec2 c2 = centroid({0, 0}, {2, 0}, {1, 3});
  CHECK(c2.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c2.y == doctest::Approx(1.0).epsilon(1e-15));
  const Vec2 c3 = centroid({-1, -1}, {1, -1}, {0, 2});
  CHECK(c3.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c3.y == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(centroid({0, 0}, {1, 1}, {2, 2}), std::invalid_argument);
}

TEST_CASE("structured mesh basic counts") {
  const StaggeredMesh mesh = build_structured(4);
  CHECK(mesh.n_macros() == 32);
  CHECK(mesh.n_subs() == 96);
  CHECK(mesh.count(EdgeKind::Dual) == 96);
  CHECK(mesh.n_macro_vertices == 25);
  CHECK(mesh.vertices.size() == 25 + 32);
}

TEST_CASE("edge counts match brute-force enumeration and closed forms") {
  for (int N = 1; N <= 8; ++N) {
    const StaggeredMesh mesh = build_structured(N);
    const auto counts = testsupport::enumerate_structured_edges(N);

    const int primal_total =
        mesh.count(EdgeKind::PrimalInterior) + mesh.count(EdgeKind::PrimalBoundary);
    CHECK(primal_total == counts.primal_total);
    CHECK(mesh.count(EdgeKind::PrimalBoundary) == counts.primal_boundary);
    CHECK(mesh.count(EdgeKind::PrimalInterior) == counts.primal_interior);
    CHECK(mesh.count(EdgeKind::Dual) == counts.dual);

    CHECK(primal_total == 3 * N * N + 2 * N);
    CHECK(mesh.count(EdgeKind::PrimalInterior) == 3 * N * N - 2 * N);
    CHECK(mesh.count(EdgeKind::Dual) == 6 * N * N);
  }
}

TEST_CASE("N=2 primal edge split") {
  const StaggeredMesh mesh = build_structured(2);
  const int total = mesh.count(EdgeKind::PrimalInterior) + mesh.count(EdgeKind::PrimalBoundary);
  CHECK(total == 16);
  CHECK(mesh.count(EdgeKind::PrimalBoundary) == 8);
}

TEST_CASE("euler characteristic of the refined triangulation") {
  for (int N : {1, 2, 3, 5}) {
    const StaggeredMesh mesh = build_structured(N);
    const int V = static_cast<int>(mesh.vertices.size());
    const int E = static_cast<int>(mesh.edges.size());
    const int F = mesh.n_subs();
    CHECK(V - E + F == 1);
  }
}

TEST_CASE("sub-triangle geometry: positive areas summing to macro areas") {
  const StaggeredMesh mesh = build_structured(3);
  double total = 0.0;
  for (int s = 0; s < mesh.n_subs(); ++s) {
    const double area = mesh.sub_area(s);
    CHECK(area > 0.0);
    total += area;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  for (int m = 0; m < mesh.n_macros(); ++m) {
    const auto& tri = mesh.macro_triangles[m];
    const Vec2 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    const double macro_area = 0.5 * cross(b - a, c - a);
    double sub_total = 0.0;
    for (int s : region_around_interior_point(mesh, m)) sub_total += mesh.sub_area(s);
    CHECK(sub_total == doctest::Approx(macro_area).epsilon(1e-12));
  }
}

TEST_CASE("interior points are strict centroids") {
  const StaggeredMesh mesh = build_structured(2);
  for (int m = 0; m < mesh.n_macros(); ++m) {
    const auto& tri = mesh.macro_triangles[m];
    const Vec2 expected =
        (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
    const Vec2 nu = mesh.vertices[mesh.interior_point[m]];
    CHECK(norm(nu - expected) < 1e-15);
  }
}

TEST_CASE("no hanging edges and consistent adjacency") {
  const StaggeredMesh mesh = build_structured(3);
  for (const Edge& e : mesh.edges) {
    CHECK(e.adjacent_subs[0] >= 0);
    if (e.kind == EdgeKind::PrimalBoundary) {
      CHECK(e.adjacent_subs[1] == -1);
    } else {
      CHECK(e.adjacent_subs[1] > e.adjacent_subs[0]);
    }
    if (e.kind == EdgeKind::Dual)
      CHECK(mesh.macro_of_sub(e.adjacent_subs[0]) == mesh.macro_of_sub(e.adjacent_subs[1]));
    if (e.kind == EdgeKind::PrimalInterior)
      CHECK(mesh.macro_of_sub(e.adjacent_subs[0]) != mesh.macro_of_sub(e.adjacent_subs[1]));
  }
}

TEST_CASE("normals are unit length and the side signs cancel exactly") {
  const StaggeredMesh mesh = build_structured(3);
  for (const Edge& e : mesh.edges) {
    CHECK(std::abs(norm(e.normal) - 1.0) < 1e-14);
    CHECK(e.side_sign[0] == 1.0);
    if (e.adjacent_subs[1] >= 0) {
      CHECK(e.side_sign[0] + e.side_sign[1] == 0.0);
    } else {
      // Boundary normals point out of the unit square.
      const Vec2 mid = 0.5 * (mesh.vertices[e.vertices[0]] + mesh.vertices[e.vertices[1]]);
      const Vec2 outward = mid - Vec2{0.5, 0.5};
      CHECK(dot(e.normal, outward) > 0.0);
    }
  }
}

TEST_CASE("jump combines one-sided traces with the side signs") {
  const StaggeredMesh mesh = build_structured(2);
  for (const Edge& e : mesh.edges) {
    if (e.kind == EdgeKind::PrimalBoundary) {
      CHECK_THROWS_AS(jump(e, 1.0, 0.0), std::invalid_argument);
      continue;
    }
    CHECK(jump(e, 1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(jump(e, 1.0, 0.0) == doctest::Approx(e.side_sign[0]));
    CHECK(jump(e, 0.0, 1.0) == doctest::Approx(e.side_sign[1]));
    CHECK(jump(e, 3.0, 2.0) == doctest::Approx(e.side_sign[0] * 3.0 + e.side_sign[1] * 2.0));
  }
}

TEST_CASE("jump flips sign with the stored normal") {
  StaggeredMesh mesh = build_structured(2);
  int target = -1;
  for (std::size_t i = 0; i < mesh.edges.size(); ++i)
    if (mesh.edges[i].kind == EdgeKind::Dual) { target = static_cast<int>(i); break; }
  REQUIRE(target >= 0);
  const double before = jump(mesh.edges[target], 2.0, -1.0);
  flip_edge_normal(mesh, target);
  CHECK(jump(mesh.edges[target], 2.0, -1.0) == doctest::Approx(-before));
  CHECK(mesh.edges[target].side_sign[0] == -1.0);
}

TEST_CASE("macro regions") {
  const StaggeredMesh mesh = build_structured(2);
  const auto s_region = region_around_interior_point(mesh, 3);
  CHECK(s_region == std::array<int, 3>{9, 10, 11});
  for (int s : s_region) CHECK(mesh.macro_of_sub(s) == 3);

  int interior_edge = -1, boundary_edge = -1;
  for (std::size_t i = 0; i < mesh.edges.size(); ++i) {
    if (mesh.edges[i].kind == EdgeKind::PrimalInterior && interior_edge < 0)
      interior_edge = static_cast<int>(i);
    if (mesh.edges[i].kind == EdgeKind::PrimalBoundary && boundary_edge < 0)
      boundary_edge = static_cast<int>(i);
  }
  CHECK(region_of_primal_edge(mesh, interior_edge).size() == 2);
  CHECK(region_of_primal_edge(mesh, boundary_edge).size() == 1);

  int dual_edge = -1;
  for (std::size_t i = 0; i < mesh.edges.size(); ++i)
    if (mesh.edges[i].kind == EdgeKind::Dual) { dual_edge = static_cast<int>(i); break; }
  CHECK_THROWS_AS(region_of_primal_edge(mesh, dual_edge), std::invalid_argument);
}

TEST_CASE("sub-triangle vertex layout: primal edge first, interior point last") {
  const StaggeredMesh mesh = build_structured(3);
  for (int s = 0; s < mesh.n_subs(); ++s) {
    const auto& tri = mesh.sub_triangles[s];
    CHECK(tri[0] < mesh.n_macro_vertices);
    CHECK(tri[1] < mesh.n_macro_vertices);
    CHECK(tri[2] == mesh.interior_point[mesh.macro_of_sub(s)]);
    const Edge& primal = mesh.edges[mesh.sub_edges[s][0]];
    CHECK(primal.kind != EdgeKind::Dual);
  }
}

TEST_CASE("locate_sub finds containing sub-triangles") {
  const StaggeredMesh mesh = build_structured(4);
  std::mt19937 rng(99u);
  for (int s = 0; s < mesh.n_subs(); s += 7) {
    const Vec2 p = testsupport::random_point_in_sub(mesh, s, rng);
    const int found = locate_sub(mesh, p);
    REQUIRE(found >= 0);
    // The point may sit on a shared edge; containment is what matters.
    const auto c = mesh.sub_coords(found);
    const double d = cross(c[1] - c[0], c[2] - c[0]);
    CHECK(cross(c[1] - p, c[2] - p) / d >= -1e-12);
    CHECK(cross(c[2] - p, c[0] - p) / d >= -1e-12);
    CHECK(cross(c[0] - p, c[1] - p) / d >= -1e-12);
  }
  CHECK(locate_sub(mesh, {1.5, 0.5}) == -1);
  CHECK(locate_sub(mesh, {0.0, 0.0}) >= 0);
  CHECK(locate_sub(mesh, {1.0, 1.0}) >= 0);
}

TEST_CASE("mesh dump has the advertised sections") {
  const StaggeredMesh mesh = build_structured(2);
  std::ostringstream out;
  dump_mesh(mesh, out);
  const std::string text = out.str();
  CHECK(text.find("VERTICES 17") != std::string::npos);
  CHECK(text.find("SUBTRIANGLES 24") != std::string::npos);
  CHECK(text.find("EDGES 40") != std::string::npos);
  CHECK(text.find("primal_boundary") != std::string::npos);
  CHECK(text.find("dual") != std::string::npos);
}

TEST_CASE("rejects invalid structured sizes") {
  CHECK_THROWS_AS(build_structured(0), std::invalid_argument);
  CHECK_THROWS_AS(build_structured(-2), std::invalid_argument);
}

TEST_CASE("general construction normalizes orientation") {
  // One clockwise macro triangle: the builder must flip it.
  StaggeredMesh mesh = build_staggered({{0, 0}, {0, 1}, {1, 0}}, {{0, 1, 2}});
  CHECK(mesh.n_macros() == 1);
  for (int s = 0; s < mesh.n_subs(); ++s) CHECK(mesh.sub_area(s) > 0.0);
  CHECK(mesh.count(EdgeKind::PrimalBoundary) == 3);
  CHECK(mesh.count(EdgeKind::Dual) == 3);
}
