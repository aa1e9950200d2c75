#pragma once

#include <functional>
#include <iosfwd>

#include <Eigen/SparseCore>

#include "sdg/spaces.hpp"

namespace sdg {

/// Velocity field entering the convection term.  Declaring divergence_free
/// triggers a finite difference spot check at construction.
struct ConvectionField {
  std::function<Vec2(Vec2)> value;
  bool divergence_free = false;
  double sup_norm_hint = 0.0;
};

ConvectionField make_convection_field(std::function<Vec2(Vec2)> value,
                                      bool divergence_free,
                                      double sup_norm_hint = 0.0);

/// Flux mass matrix; block diagonal with one block per macro triangle under
/// the contiguous-per-macro dof numbering of the flux space.
SpMat assemble_mass(const DofSpace& flux_space);

/// Matrix of the first-order operator pairing fluxes with scalar gradients:
/// entries integrate psi.grad(v) over sub-triangles minus the dual edge term
/// (psi.n)[v].  Rows belong to the scalar space, columns to the flux space.
SpMat assemble_gradient_form(const DofSpace& flux_space, const DofSpace& scalar_space);

/// Adjoint realization of the same operator via integration by parts per
/// macro region: -v div(psi) plus the interior primal edge term v [psi.n].
/// Rows belong to the flux space, columns to the scalar space; equals the
/// transpose of assemble_gradient_form on rows free of boundary dofs.
SpMat assemble_divergence_form(const DofSpace& flux_space, const DofSpace& scalar_space);

/// Convection moment matrix: entries integrate (b.psi) v.  quad_degree must
/// be at least 2k+1; raise it for rough fields.
SpMat assemble_convection_form(const DofSpace& flux_space, const DofSpace& scalar_space,
                               const ConvectionField& b, int quad_degree = 6);

/// Load vector of the scalar space.
Eigen::VectorXd assemble_load(const DofSpace& scalar_space,
                              const std::function<double(Vec2)>& f, int quad_degree = 6);

/// Largest absolute entry of a sparse matrix (0 for an empty one).
double max_abs(const SpMat& m);

/// Coordinate-format dump, one "row col value" line per entry.
void dump_matrix(const SpMat& m, std::ostream& out);

}  // namespace sdg
