#pragma once

#include <array>
#include <vector>

#include <Eigen/SparseCore>

#include "sdg/mesh.hpp"

namespace sdg {

using SpMat = Eigen::SparseMatrix<double>;

/// The three finite element spaces of the staggered discretization.
///
/// Uh:      piecewise P^k scalars, continuous across interior primal edges,
///          with boundary values kept as explicit degrees of freedom.
/// UhTilde: Uh with all values colocated at a macro vertex identified, i.e.
///          the embedded (point-continuous) potential space.
/// Wh:      piecewise P^k vectors with continuous normal component across
///          dual edges; carries the numerical flux.
enum class SpaceKind { Uh, UhTilde, Wh };

/// One (sub-triangle, local basis) slot mapped into the global vector.
struct DofLink {
  int dof = -1;
  double weight = 1.0;
};

struct ScalarBasis {
  std::array<double, 3> value;
  std::array<Vec2, 3> grad;
};

struct VectorBasis {
  std::array<Vec2, 6> value;
  std::array<double, 6> div;
};

struct DofSpace {
  SpaceKind kind = SpaceKind::Uh;
  int degree = 1;
  const StaggeredMesh* mesh = nullptr;
  int n_dofs = 0;
  int n_local = 0;                      // local basis functions per sub-triangle
  std::vector<DofLink> links;           // [sub * n_local + l]
  std::vector<int> local_node;          // sub-triangle corner carrying basis l
  std::vector<Vec2> local_dir;          // Wh only: basis direction per (sub, l)
  std::vector<bool> boundary_dof;       // Dirichlet carriers (scalar spaces)
  std::vector<Vec2> dof_position;
  std::vector<Vec2> dof_direction;      // Wh only: coefficient extraction direction
  std::vector<int> block_offset;        // Wh only: per-macro dof ranges, size n_macros+1

  const DofLink& link(int sub, int l) const { return links[sub * n_local + l]; }

  /// P^1 barycentric basis on a sub-triangle at a physical point; rejects
  /// points outside the closed triangle beyond a 1e-10 barycentric tolerance.
  ScalarBasis scalar_basis(int sub, Vec2 p) const;

  /// Adapted vector basis (values and divergences) on a sub-triangle.
  VectorBasis vector_basis(int sub, Vec2 p) const;

  int n_boundary_dofs() const;
};

DofSpace build_space(const StaggeredMesh& mesh, SpaceKind kind, int degree);

/// 0/1 matrix P with one entry per Uh dof identifying it with its UhTilde
/// class; row count dim(UhTilde), column count dim(Uh).
struct EmbeddingMatrix {
  SpMat P;
};

EmbeddingMatrix build_embedding(const DofSpace& uh, const DofSpace& uh_tilde);

/// Evaluates a finite element function from its coefficient vector.
double eval_scalar(const DofSpace& space, const Eigen::VectorXd& coeffs, int sub, Vec2 p);
Vec2 eval_vector(const DofSpace& space, const Eigen::VectorXd& coeffs, int sub, Vec2 p);

}  // namespace sdg
