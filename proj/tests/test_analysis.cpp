#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "sdg/analysis.hpp"
#include "sdg/quadrature.hpp"
#include "sdg/system.hpp"
#include "support.hpp"

using namespace sdg;
using std::numbers::pi;

TEST_CASE("manufactured problems carry consistent data") {
  SUBCASE("boundary layer") {
    const ManufacturedProblem p = make_problem(1, 1.0);
    CHECK(p.mu == 1.0);
    // Solution vanishes on the whole boundary of the unit square.
    for (double t : {0.0, 0.25, 0.7, 1.0}) {
      CHECK(std::abs(p.u_exact({t, 0.0})) < 1e-13);
      CHECK(std::abs(p.u_exact({t, 1.0})) < 1e-13);
      CHECK(std::abs(p.u_exact({0.0, t})) < 1e-13);
      CHECK(std::abs(p.u_exact({1.0, t})) < 1e-13);
    }
    const Vec2 bval = p.b.value({0.3, 0.9});
    CHECK(bval.x == 20.0);
    CHECK(bval.y == 20.0);
  }

  SUBCASE("smooth solution with rotating convection") {
    const ManufacturedProblem p = make_problem(2, 1e-3);
    CHECK(p.u_exact({0.25, 0.0}) == doctest::Approx(std::sin(pi / 2.0)).epsilon(1e-14));
    const Vec2 bval = p.b.value({0.25, 0.25});
    CHECK(bval.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(bval.y == doctest::Approx(-1.0).epsilon(1e-14));
    // The trace data equals the solution on the boundary and is not zero.
    CHECK(p.g({0.25, 0.0}) == doctest::Approx(p.u_exact({0.25, 0.0})).epsilon(1e-14));
    CHECK(std::abs(p.g({0.25, 0.0})) > 0.5);
  }

  SUBCASE("robustness sweep problem") {
    const ManufacturedProblem p = make_problem(3, 1e-4);
    for (double t : {0.0, 0.3, 1.0}) {
      CHECK(std::abs(p.u_exact({t, 0.0})) < 1e-13);
      CHECK(std::abs(p.u_exact({0.0, t})) < 1e-13);
      CHECK(std::abs(p.g({t, 1.0})) < 1e-13);
    }
    // Gradient norm of sin(2 pi x) sin(2 pi y) over the unit square.
    const StaggeredMesh mesh = build_structured(8);
    const QuadratureRule rule = triangle_rule(12);
    double grad_sq = 0.0;
    for (int s = 0; s < mesh.n_subs(); ++s) {
      const auto co = mesh.sub_coords(s);
      const Vec2 e1 = co[1] - co[0], e2 = co[2] - co[0];
      const double jac = cross(e1, e2);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Vec2 p_phys = co[0] + rule.points[q].x * e1 + rule.points[q].y * e2;
        const Vec2 gu = p.grad_u_exact(p_phys);
        grad_sq += rule.weights[q] * jac * dot(gu, gu);
      }
    }
    CHECK(std::sqrt(grad_sq) == doctest::Approx(std::sqrt(2.0) * pi).epsilon(1e-10));
  }

  SUBCASE("unknown experiment is rejected") {
    CHECK_THROWS_AS(make_problem(4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_problem(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_problem(1, 0.0), std::invalid_argument);
  }
}

TEST_CASE("finite difference validation rejects inconsistent sources") {
  ManufacturedProblem p = make_problem(2, 1.0);
  CHECK_NOTHROW(validate_problem(p));
  p.f = [orig = p.f](Vec2 q) { return orig(q) + 0.05; };
  CHECK_THROWS_AS(validate_problem(p), std::invalid_argument);
}

TEST_CASE("interpolation reproduces member functions exactly") {
  const StaggeredMesh mesh = build_structured(3);
  const DofSpace uh = build_space(mesh, SpaceKind::Uh, 1);
  auto linear = [](Vec2 p) { return 2.0 * p.x - 0.7 * p.y + 0.25; };
  const Eigen::VectorXd coeffs = interpolate_scalar(uh, linear);
  CHECK(l2_error_scalar(uh, coeffs, linear) < 1e-14);

  const DofSpace w = build_space(mesh, SpaceKind::Wh, 1);
  auto lin_field = [](Vec2 p) { return Vec2{p.y + 0.1, 3.0 * p.x - p.y}; };
  CHECK(l2_error_vector(w, interpolate_vector(w, lin_field), lin_field) < 1e-13);
}

TEST_CASE("interpolation error decays at second order") {
  const ManufacturedProblem p = make_problem(3, 1.0);
  std::vector<double> errors;
  for (int N : {8, 16, 32}) {
    const StaggeredMesh mesh = build_structured(N);
    const DofSpace uh = build_space(mesh, SpaceKind::Uh, 1);
    errors.push_back(l2_error_scalar(uh, interpolate_scalar(uh, p.u_exact), p.u_exact));
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double order = observed_order(errors[i - 1], errors[i]);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
  }
}

TEST_CASE("globally linear solutions are reproduced by the solver") {
  auto u = [](Vec2 p) { return 0.75 + 1.5 * p.x - 2.0 * p.y; };
  const Vec2 grad{1.5, -2.0};

  const StaggeredMesh mesh = build_structured(2);
  const DofSpace w = build_space(mesh, SpaceKind::Wh, 1);
  const DofSpace uh = build_space(mesh, SpaceKind::Uh, 1);
  const SpMat M = assemble_mass(w);
  const SpMat B = assemble_gradient_form(w, uh);
  const ConvectionField none = make_convection_field([](Vec2) { return Vec2{0.0, 0.0}; }, true);
  const SpMat R = assemble_convection_form(w, uh, none);

  const CondensedOperator op = condense(M, B, R, w, uh, 1.0, 0.5);
  const Eigen::VectorXd load = Eigen::VectorXd::Zero(uh.n_dofs);
  const SolveResult r = solve(op, apply_dirichlet(op, load, u));

  CHECK(l2_error_scalar(uh, r.u, u) < 1e-12);
  CHECK(l2_error_vector(w, r.z, [&](Vec2) { return grad; }) < 1e-10);
}

TEST_CASE("discrete norms of simple fields") {
  const StaggeredMesh mesh = build_structured(2);
  const DofSpace uh = build_space(mesh, SpaceKind::Uh, 1);
  const DofSpace w = build_space(mesh, SpaceKind::Wh, 1);

  SUBCASE("zero fields have zero norms") {
    const DiscreteNorms su = discrete_norms_scalar(uh, Eigen::VectorXd::Zero(uh.n_dofs));
    CHECK(su.X == 0.0);
    CHECK(su.Z == 0.0);
    const DiscreteNorms sw = discrete_norms_vector(w, Eigen::VectorXd::Zero(w.n_dofs));
    CHECK(sw.X == 0.0);
    CHECK(sw.Z == 0.0);
  }

  SUBCASE("coordinate function: gradient part only, jumps vanish") {
    auto f = [](Vec2 p) { return p.x; };
    const Eigen::VectorXd c = interpolate_scalar(uh, f);
    const DiscreteNorms n = discrete_norms_scalar(uh, c);
    CHECK(n.Z == doctest::Approx(1.0).epsilon(1e-12));

    // X^2 = ||x||^2 + sum over interior primal edges of h_e ||x||_e^2.
    double expected = 1.0 / 3.0;
    for (const Edge& e : mesh.edges) {
      if (e.kind != EdgeKind::PrimalInterior) continue;
      const Vec2 p0 = mesh.vertices[e.vertices[0]], p1 = mesh.vertices[e.vertices[1]];
      expected += e.length * testsupport::oracle_integrate_edge(
                                 p0, p1, [&](Vec2 p) { return p.x * p.x; }, 4);
    }
    CHECK(n.X == doctest::Approx(std::sqrt(expected)).epsilon(1e-11));
  }

  SUBCASE("constant flux: trace part only, divergence and jumps vanish") {
    const Eigen::VectorXd c = interpolate_vector(w, [](Vec2) { return Vec2{1.0, 0.0}; });
    const DiscreteNorms n = discrete_norms_vector(w, c);
    CHECK(n.Z < 1e-12);

    double expected = 1.0;
    for (const Edge& e : mesh.edges) {
      if (e.kind != EdgeKind::Dual) continue;
      expected += e.length * e.length * e.normal.x * e.normal.x;
    }
    CHECK(n.X == doctest::Approx(std::sqrt(expected)).epsilon(1e-11));
  }

  SUBCASE("norms dominate their volume parts") {
    const Eigen::VectorXd cu = testsupport::random_vector(uh.n_dofs, 9001u);
    const DiscreteNorms nu = discrete_norms_scalar(uh, cu);
    CHECK(nu.X >= l2_norm_scalar(uh, cu));
    const Eigen::VectorXd cw = testsupport::random_vector(w.n_dofs, 9002u);
    const DiscreteNorms nw = discrete_norms_vector(w, cw);
    CHECK(nw.X >= l2_norm_vector(w, cw));
  }
}

TEST_CASE("observed order") {
  CHECK(observed_order(0.04, 0.01) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(observed_order(0.2, 0.1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(observed_order(0.1, 0.2) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK_THROWS_AS(observed_order(0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(observed_order(0.1, -0.1), std::invalid_argument);
}

TEST_CASE("convergence table serialization") {
  ConvergenceTable table;
  table.method = "sdg";
  table.mu = 1.0;
  table.rows.push_back({2, 0.04, 0.0, 0.4, 0.0});
  table.rows.push_back({4, 0.01, 2.0, 0.2, 1.0});

  const std::string csv = table.to_csv();
  std::istringstream in(csv);
  std::string line;
  REQUIRE(static_cast<bool>(std::getline(in, line)));
  CHECK(line == "N,error_u,order_u,error_z,order_z");
  REQUIRE(static_cast<bool>(std::getline(in, line)));
  CHECK(line.substr(0, 2) == "2,");
  CHECK(line.find(",,") != std::string::npos);   // undefined orders stay empty
  REQUIRE(static_cast<bool>(std::getline(in, line)));
  CHECK(line.substr(0, 2) == "4,");
  CHECK(line.find("2") != std::string::npos);

  const std::string md = table.to_markdown();
  CHECK(md.find("--") != std::string::npos);
  CHECK(md.find("| error_u ") != std::string::npos);
  CHECK(md.find("4.00e-02") != std::string::npos);
}
