#pragma once

#include <functional>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "sdg/forms.hpp"

namespace sdg {

/// Condensed operator on the potential space after eliminating the flux and
/// the convection moment.
///
///   laplacian   discrete Laplacian -B M^-1 B^T (negative semidefinite)
///   convection  skew-weighted term -theta B M^-1 R^T + (1-theta) R M^-1 B^T
///   A           -mu * laplacian + convection
///   flux_op     M^-1 B^T, recovers the scaled gradient z from u
///   moment_op   M^-1 R^T, recovers the convection moment p from u
///
/// For the embedded variant every matrix is congruence-transformed with the
/// embedding and the recovery operators absorb P^T, so solve() is uniform.
struct CondensedOperator {
  double mu = 1.0;
  double theta = 0.5;
  SpMat A;
  SpMat laplacian;
  SpMat convection;
  SpMat flux_op;
  SpMat moment_op;
  const DofSpace* scalar_space = nullptr;
};

CondensedOperator condense(const SpMat& M, const SpMat& B, const SpMat& R,
                           const DofSpace& flux_space, const DofSpace& scalar_space,
                           double mu, double theta);

/// Transforms a condensed operator onto the embedded potential space.
CondensedOperator embed_operator(const CondensedOperator& op, const EmbeddingMatrix& emb,
                                 const DofSpace& tilde_space);

/// Linear system with Dirichlet rows replaced by identity and the boundary
/// contribution lifted into the right-hand side (columns are cleared too, so
/// a symmetric operator stays symmetric).
struct ConstrainedSystem {
  SpMat A;
  Eigen::VectorXd rhs;
  Eigen::VectorXd boundary_values;   // meaningful on constrained entries
  std::vector<bool> constrained;
};

ConstrainedSystem apply_dirichlet(const CondensedOperator& op, const Eigen::VectorXd& load,
                                  const std::function<double(Vec2)>& g);

struct SolveResult {
  Eigen::VectorXd u;   // potential coefficients
  Eigen::VectorXd z;   // recovered scaled gradient
  Eigen::VectorXd w;   // first auxiliary variable
  Eigen::VectorXd p;   // second auxiliary variable (convection moment)
  double residual = 0.0;        // |A u - rhs| / |rhs|
  double cond_estimate = 0.0;   // 1-norm condition estimate, 0 when skipped
  double mu = 1.0;
  double theta = 0.5;
};

/// Sparse LU solve with one step of iterative refinement, then recovery of
/// the auxiliary fields.  Throws on singular systems.
SolveResult solve(const CondensedOperator& op, const ConstrainedSystem& sys,
                  bool estimate_condition = false);

}  // namespace sdg
