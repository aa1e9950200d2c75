#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sdg/forms.hpp"

namespace sdg {

/// Convection-diffusion test problem with a known solution.  The source term
/// is validated against -mu lap(u) + div(b u) by finite differences when the
/// problem is constructed through make_problem.
struct ManufacturedProblem {
  int id = 0;
  double mu = 1.0;
  std::function<double(Vec2)> u_exact;
  std::function<Vec2(Vec2)> grad_u_exact;
  ConvectionField b;
  std::function<double(Vec2)> f;
  std::function<double(Vec2)> g;    // Dirichlet trace, evaluated on the boundary
};

/// The three studies: 1 boundary layer with constant convection, 2 smooth
/// solution with a rotating convection field, 3 the same field with a
/// homogeneous-boundary solution used for the robustness sweep.
ManufacturedProblem make_problem(int experiment, double mu, Vec2 b_const = {20.0, 20.0});

/// Finite difference check of the source term at random interior points;
/// throws when the relative defect exceeds the tolerance.
void validate_problem(const ManufacturedProblem& problem, int n_points = 200,
                      double tolerance = 1e-6);

/// L2 errors against a known field, integrated with a rule two degrees above
/// the assembly default.
double l2_error_scalar(const DofSpace& space, const Eigen::VectorXd& coeffs,
                       const std::function<double(Vec2)>& exact, int quad_degree = 8);
double l2_error_vector(const DofSpace& space, const Eigen::VectorXd& coeffs,
                       const std::function<Vec2(Vec2)>& exact, int quad_degree = 8);

/// L2 norm of a discrete field.
double l2_norm_scalar(const DofSpace& space, const Eigen::VectorXd& coeffs);
double l2_norm_vector(const DofSpace& space, const Eigen::VectorXd& coeffs);

/// Discrete norms of the stability theory.  For scalars: X is the L2 norm
/// plus the weighted interior-primal-edge trace term, Z the broken H1 norm
/// plus the dual-edge jump term.  For fluxes the roles of the edge families
/// swap (X adds dual-edge normal traces, Z adds interior-primal normal jumps).
struct DiscreteNorms {
  double X = 0.0;
  double Z = 0.0;
};
DiscreteNorms discrete_norms_scalar(const DofSpace& space, const Eigen::VectorXd& coeffs);
DiscreteNorms discrete_norms_vector(const DofSpace& space, const Eigen::VectorXd& coeffs);

/// Nodal interpolation: scalar spaces sample the function at dof positions,
/// the flux space takes frame components at dof positions.
Eigen::VectorXd interpolate_scalar(const DofSpace& space, const std::function<double(Vec2)>& fn);
Eigen::VectorXd interpolate_vector(const DofSpace& space, const std::function<Vec2(Vec2)>& fn);

/// log2(error_coarse / error_fine) for a mesh refinement by a factor of two.
double observed_order(double error_coarse, double error_fine);

struct ConvergenceRow {
  int N = 0;
  double error_u = 0.0;
  double order_u = 0.0;   // 0 means undefined (first row)
  double error_z = 0.0;
  double order_z = 0.0;
};

struct ConvergenceTable {
  std::string method;
  double mu = 1.0;
  double theta = 0.5;
  std::vector<ConvergenceRow> rows;

  std::string to_csv() const;
  std::string to_markdown() const;
};

}  // namespace sdg
