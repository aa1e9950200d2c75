#include "sdg/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sdg/quadrature.hpp"

namespace sdg {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

ManufacturedProblem boundary_layer_problem(double mu, Vec2 b) {
  // u = xy (1 - e^{b1 (x-1)}) (1 - e^{b2 (y-1)}) / ((1 - e^{-b1})(1 - e^{-b2}))
  // with constant convection; sharp layers form along x = 1 and y = 1.  The
  // normalization keeps each layer factor at one on the inflow side, so the
  // solution is O(1) away from the layers.
  const double cx = 1.0 - std::exp(-b.x), cy = 1.0 - std::exp(-b.y);
  auto X = [=](double x) { return x * (1.0 - std::exp(b.x * (x - 1.0))) / cx; };
  auto Y = [=](double y) { return y * (1.0 - std::exp(b.y * (y - 1.0))) / cy; };
  auto dX = [=](double x) {
    return (1.0 - (1.0 + b.x * x) * std::exp(b.x * (x - 1.0))) / cx;
  };
  auto dY = [=](double y) {
    return (1.0 - (1.0 + b.y * y) * std::exp(b.y * (y - 1.0))) / cy;
  };
  auto ddX = [=](double x) {
    return -(2.0 * b.x + b.x * b.x * x) * std::exp(b.x * (x - 1.0)) / cx;
  };
  auto ddY = [=](double y) {
    return -(2.0 * b.y + b.y * b.y * y) * std::exp(b.y * (y - 1.0)) / cy;
  };

  ManufacturedProblem problem;
  problem.id = 1;
  problem.mu = mu;
  problem.u_exact = [=](Vec2 p) { return X(p.x) * Y(p.y); };
  problem.grad_u_exact = [=](Vec2 p) { return Vec2{dX(p.x) * Y(p.y), X(p.x) * dY(p.y)}; };
  problem.b = make_convection_field([b](Vec2) { return b; }, true, norm(b));
  problem.f = [=](Vec2 p) {
    const double lap = ddX(p.x) * Y(p.y) + X(p.x) * ddY(p.y);
    return -mu * lap + b.x * dX(p.x) * Y(p.y) + b.y * X(p.x) * dY(p.y);
  };
  problem.g = [](Vec2) { return 0.0; };
  return problem;
}

ConvectionField rotating_field() {
  return make_convection_field(
      [](Vec2 p) {
        return Vec2{(1.0 - std::cos(two_pi * p.x)) * std::sin(two_pi * p.y),
                    -std::sin(two_pi * p.x) * (1.0 - std::cos(two_pi * p.y))};
      },
      true, 2.0 * std::sqrt(2.0));
}

ManufacturedProblem smooth_problem(double mu) {
  ManufacturedProblem problem;
  problem.id = 2;
  problem.mu = mu;
  problem.u_exact = [](Vec2 p) { return std::sin(two_pi * p.x) * std::cos(two_pi * p.y); };
  problem.grad_u_exact = [](Vec2 p) {
    return Vec2{two_pi * std::cos(two_pi * p.x) * std::cos(two_pi * p.y),
                -two_pi * std::sin(two_pi * p.x) * std::sin(two_pi * p.y)};
  };
  problem.b = rotating_field();
  const auto b = problem.b.value;
  const auto grad = problem.grad_u_exact;
  problem.f = [=](Vec2 p) {
    const double lap = -2.0 * two_pi * two_pi * std::sin(two_pi * p.x) * std::cos(two_pi * p.y);
    return -mu * lap + dot(b(p), grad(p));
  };
  problem.g = problem.u_exact;
  return problem;
}

ManufacturedProblem sweep_problem(double mu) {
  ManufacturedProblem problem;
  problem.id = 3;
  problem.mu = mu;
  problem.u_exact = [](Vec2 p) { return std::sin(two_pi * p.x) * std::sin(two_pi * p.y); };
  problem.grad_u_exact = [](Vec2 p) {
    return Vec2{two_pi * std::cos(two_pi * p.x) * std::sin(two_pi * p.y),
                two_pi * std::sin(two_pi * p.x) * std::cos(two_pi * p.y)};
  };
  problem.b = rotating_field();
  const auto b = problem.b.value;
  const auto grad = problem.grad_u_exact;
  problem.f = [=](Vec2 p) {
    const double lap = -2.0 * two_pi * two_pi * std::sin(two_pi * p.x) * std::sin(two_pi * p.y);
    return -mu * lap + dot(b(p), grad(p));
  };
  problem.g = [](Vec2) { return 0.0; };
  return problem;
}

}  // namespace

ManufacturedProblem make_problem(int experiment, double mu, Vec2 b_const) {
  if (mu <= 0.0) throw std::invalid_argument("make_problem: mu must be positive");
  ManufacturedProblem problem;
  switch (experiment) {
    case 1: problem = boundary_layer_problem(mu, b_const); break;
    case 2: problem = smooth_problem(mu); break;
    case 3: problem = sweep_problem(mu); break;
    default: throw std::invalid_argument("make_problem: unknown experiment id");
  }
  validate_problem(problem);
  return problem;
}

void validate_problem(const ManufacturedProblem& problem, int n_points, double tolerance) {
  if (!problem.u_exact || !problem.f || !problem.b.value)
    throw std::invalid_argument("validate_problem: incomplete problem");
  std::mt19937 rng(7150123u);
  std::uniform_real_distribution<double> coord(0.05, 0.95);
  const double h = 1e-3;

  auto u = problem.u_exact;
  // Fourth order central differences for the first and second derivatives.
  auto d1 = [&](double xm2, double xm1, double xp1, double xp2) {
    return (-xp2 + 8.0 * xp1 - 8.0 * xm1 + xm2) / (12.0 * h);
  };
  auto d2 = [&](double x0, double xm2, double xm1, double xp1, double xp2) {
    return (-xp2 + 16.0 * xp1 - 30.0 * x0 + 16.0 * xm1 - xm2) / (12.0 * h * h);
  };

  double f_scale = 0.0;
  std::vector<Vec2> pts(n_points);
  for (auto& p : pts) {
    p = {coord(rng), coord(rng)};
    f_scale = std::max(f_scale, std::abs(problem.f(p)));
  }
  for (const Vec2 p : pts) {
    const double u0 = u(p);
    const double uxm2 = u({p.x - 2 * h, p.y}), uxm1 = u({p.x - h, p.y});
    const double uxp1 = u({p.x + h, p.y}), uxp2 = u({p.x + 2 * h, p.y});
    const double uym2 = u({p.x, p.y - 2 * h}), uym1 = u({p.x, p.y - h});
    const double uyp1 = u({p.x, p.y + h}), uyp2 = u({p.x, p.y + 2 * h});
    const double lap = d2(u0, uxm2, uxm1, uxp1, uxp2) + d2(u0, uym2, uym1, uyp1, uyp2);
    const Vec2 grad{d1(uxm2, uxm1, uxp1, uxp2), d1(uym2, uym1, uyp1, uyp2)};
    // div(b u) = b . grad u for divergence free b.
    const double f_fd = -problem.mu * lap + dot(problem.b.value(p), grad);
    if (std::abs(f_fd - problem.f(p)) > tolerance * (1.0 + f_scale))
      throw std::invalid_argument("validate_problem: source term does not match the solution");
    if (problem.grad_u_exact) {
      const Vec2 ga = problem.grad_u_exact(p);
      if (norm(ga - grad) > tolerance * (1.0 + norm(ga)))
        throw std::invalid_argument("validate_problem: gradient does not match the solution");
    }
  }
}

namespace {

template <typename EvalSq>
double integrate_over_subs(const StaggeredMesh& mesh, int quad_degree, EvalSq eval_sq) {
  const QuadratureRule rule = triangle_rule(quad_degree);
  double total = 0.0;
  for (int s = 0; s < mesh.n_subs(); ++s) {
    const auto c = mesh.sub_coords(s);
    const double jac = cross(c[1] - c[0], c[2] - c[0]);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 p = c[0] + rule.points[q].x * (c[1] - c[0]) + rule.points[q].y * (c[2] - c[0]);
      total += rule.weights[q] * jac * eval_sq(s, p);
    }
  }
  return total;
}

}  // namespace

double l2_error_scalar(const DofSpace& space, const Eigen::VectorXd& coeffs,
                       const std::function<double(Vec2)>& exact, int quad_degree) {
  const double sq = integrate_over_subs(*space.mesh, quad_degree, [&](int s, Vec2 p) {
    const double d = eval_scalar(space, coeffs, s, p) - exact(p);
    return d * d;
  });
  return std::sqrt(sq);
}

double l2_error_vector(const DofSpace& space, const Eigen::VectorXd& coeffs,
                       const std::function<Vec2(Vec2)>& exact, int quad_degree) {
  const double sq = integrate_over_subs(*space.mesh, quad_degree, [&](int s, Vec2 p) {
    const Vec2 d = eval_vector(space, coeffs, s, p) - exact(p);
    return dot(d, d);
  });
  return std::sqrt(sq);
}

double l2_norm_scalar(const DofSpace& space, const Eigen::VectorXd& coeffs) {
  return l2_error_scalar(space, coeffs, [](Vec2) { return 0.0; }, 2 * space.degree + 1);
}

double l2_norm_vector(const DofSpace& space, const Eigen::VectorXd& coeffs) {
  return l2_error_vector(space, coeffs, [](Vec2) { return Vec2{0.0, 0.0}; },
                         2 * space.degree + 1);
}

namespace {

// Edge trace integrals shared by the discrete norms.  Evaluates the squared
// single-valued trace (from the first adjacent sub) or the squared jump.
double edge_term(const StaggeredMesh& mesh, const Edge& e, const QuadratureRule& rule,
                 const std::function<double(int, Vec2)>& trace, bool jump_term) {
  const Vec2 p0 = mesh.vertices[e.vertices[0]], p1 = mesh.vertices[e.vertices[1]];
  double total = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Vec2 p = p0 + rule.points[q].x * (p1 - p0);
    double v;
    if (jump_term) {
      v = e.side_sign[0] * trace(e.adjacent_subs[0], p) +
          e.side_sign[1] * trace(e.adjacent_subs[1], p);
    } else {
      v = trace(e.adjacent_subs[0], p);
    }
    total += rule.weights[q] * e.length * v * v;
  }
  return total;
}

}  // namespace

DiscreteNorms discrete_norms_scalar(const DofSpace& space, const Eigen::VectorXd& coeffs) {
  if (space.kind == SpaceKind::Wh)
    throw std::invalid_argument("discrete_norms_scalar: expects a scalar space");
  const StaggeredMesh& mesh = *space.mesh;
  const QuadratureRule edge_rule = segment_rule(space.degree + 1);

  double x_sq = 0.0, z_sq = 0.0;
  x_sq += integrate_over_subs(mesh, 2 * space.degree + 1, [&](int s, Vec2 p) {
    const double v = eval_scalar(space, coeffs, s, p);
    return v * v;
  });
  z_sq += integrate_over_subs(mesh, 2 * space.degree + 1, [&](int s, Vec2 p) {
    const ScalarBasis basis = space.scalar_basis(s, p);
    Vec2 g{0.0, 0.0};
    for (int l = 0; l < 3; ++l) {
      const DofLink& link = space.link(s, l);
      g += coeffs[link.dof] * link.weight * basis.grad[l];
    }
    return dot(g, g);
  });

  auto trace = [&](int s, Vec2 p) { return eval_scalar(space, coeffs, s, p); };
  for (const Edge& e : mesh.edges) {
    if (e.kind == EdgeKind::PrimalInterior)
      x_sq += e.length * edge_term(mesh, e, edge_rule, trace, false);
    else if (e.kind == EdgeKind::Dual)
      z_sq += edge_term(mesh, e, edge_rule, trace, true) / e.length;
  }
  return {std::sqrt(x_sq), std::sqrt(z_sq)};
}

DiscreteNorms discrete_norms_vector(const DofSpace& space, const Eigen::VectorXd& coeffs) {
  if (space.kind != SpaceKind::Wh)
    throw std::invalid_argument("discrete_norms_vector: expects the flux space");
  const StaggeredMesh& mesh = *space.mesh;
  const QuadratureRule edge_rule = segment_rule(space.degree + 1);

  double x_sq = 0.0, z_sq = 0.0;
  x_sq += integrate_over_subs(mesh, 2 * space.degree + 1, [&](int s, Vec2 p) {
    const Vec2 v = eval_vector(space, coeffs, s, p);
    return dot(v, v);
  });
  z_sq += integrate_over_subs(mesh, 2 * space.degree + 1, [&](int s, Vec2 p) {
    const VectorBasis basis = space.vector_basis(s, p);
    double div = 0.0;
    for (int l = 0; l < 6; ++l) {
      const DofLink& link = space.link(s, l);
      div += coeffs[link.dof] * link.weight * basis.div[l];
    }
    return div * div;
  });

  for (const Edge& e : mesh.edges) {
    auto normal_trace = [&](int s, Vec2 p) {
      return dot(eval_vector(space, coeffs, s, p), e.normal);
    };
    if (e.kind == EdgeKind::Dual)
      x_sq += e.length * edge_term(mesh, e, edge_rule, normal_trace, false);
    else if (e.kind == EdgeKind::PrimalInterior)
      z_sq += edge_term(mesh, e, edge_rule, normal_trace, true) / e.length;
  }
  return {std::sqrt(x_sq), std::sqrt(z_sq)};
}

Eigen::VectorXd interpolate_scalar(const DofSpace& space, const std::function<double(Vec2)>& fn) {
  if (space.kind == SpaceKind::Wh)
    throw std::invalid_argument("interpolate_scalar: expects a scalar space");
  Eigen::VectorXd coeffs(space.n_dofs);
  for (int i = 0; i < space.n_dofs; ++i) coeffs[i] = fn(space.dof_position[i]);
  return coeffs;
}

Eigen::VectorXd interpolate_vector(const DofSpace& space, const std::function<Vec2(Vec2)>& fn) {
  if (space.kind != SpaceKind::Wh)
    throw std::invalid_argument("interpolate_vector: expects the flux space");
  Eigen::VectorXd coeffs(space.n_dofs);
  for (int i = 0; i < space.n_dofs; ++i)
    coeffs[i] = dot(fn(space.dof_position[i]), space.dof_direction[i]);
  return coeffs;
}

double observed_order(double error_coarse, double error_fine) {
  if (error_coarse <= 0.0 || error_fine <= 0.0)
    throw std::invalid_argument("observed_order: errors must be positive");
  return std::log2(error_coarse / error_fine);
}

std::string ConvergenceTable::to_csv() const {
  std::ostringstream out;
  out << "N,error_u,order_u,error_z,order_z\n";
  char buf[128];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ConvergenceRow& r = rows[i];
    if (i == 0)
      std::snprintf(buf, sizeof buf, "%d,%.17g,,%.17g,\n", r.N, r.error_u, r.error_z);
    else
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", r.N, r.error_u, r.order_u,
                    r.error_z, r.order_z);
    out << buf;
  }
  return out.str();
}

std::string ConvergenceTable::to_markdown() const {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s, mu = %g, theta = %g\n\n", method.c_str(), mu, theta);
  out << buf;
  out << "|    N | error_u  | order | error_z  | order |\n";
  out << "|-----:|---------:|------:|---------:|------:|\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ConvergenceRow& r = rows[i];
    if (i == 0)
      std::snprintf(buf, sizeof buf, "| %4d | %.2e |    -- | %.2e |    -- |\n", r.N, r.error_u,
                    r.error_z);
    else
      std::snprintf(buf, sizeof buf, "| %4d | %.2e | %5.2f | %.2e | %5.2f |\n", r.N, r.error_u,
                    r.order_u, r.error_z, r.order_z);
    out << buf;
  }
  return out.str();
}

}  // namespace sdg
