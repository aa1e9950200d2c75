#include "sdg/system.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseLU>

namespace sdg {

namespace {

// Extracts the dense diagonal block of M for one macro triangle and checks
// that no entry couples different blocks.
Eigen::MatrixXd mass_block(const SpMat& M, int begin, int end) {
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(end - begin, end - begin);
  for (int j = begin; j < end; ++j) {
    for (SpMat::InnerIterator it(M, j); it; ++it) {
      if (it.row() < begin || it.row() >= end)
        throw std::runtime_error("condense: mass matrix is not block diagonal");
      block(it.row() - begin, j - begin) = it.value();
    }
  }
  return block;
}

// X = M^-1 G^T for a block diagonal M, computed block by block with dense
// Cholesky factorizations.
SpMat block_solve_transposed(const SpMat& M, const SpMat& G, const std::vector<int>& offsets) {
  const int n_w = static_cast<int>(M.rows());
  const int n_u = static_cast<int>(G.rows());
  if (G.cols() != n_w) throw std::invalid_argument("condense: shape mismatch");

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(G.nonZeros());
  std::vector<int> col_slot(n_u, -1);

  for (std::size_t blk = 0; blk + 1 < offsets.size(); ++blk) {
    const int begin = offsets[blk], end = offsets[blk + 1];
    // The block row of G^T is the column range [begin, end) of G; collect its
    // entries and the scalar dofs they touch.
    std::vector<int> cols;
    std::vector<std::pair<std::pair<int, int>, double>> entries;
    for (int j = begin; j < end; ++j)
      for (SpMat::InnerIterator it(G, j); it; ++it) {
        const int c = static_cast<int>(it.row());
        if (col_slot[c] < 0) {
          col_slot[c] = static_cast<int>(cols.size());
          cols.push_back(c);
        }
        entries.push_back({{j - begin, col_slot[c]}, it.value()});
      }
    if (entries.empty()) continue;

    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(end - begin, cols.size());
    for (const auto& e : entries) rhs(e.first.first, e.first.second) = e.second;

    Eigen::LLT<Eigen::MatrixXd> llt(mass_block(M, begin, end));
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("condense: mass block is not positive definite");
    const Eigen::MatrixXd sol = llt.solve(rhs);
    for (int a = 0; a < sol.rows(); ++a)
      for (std::size_t c = 0; c < cols.size(); ++c)
        trips.emplace_back(begin + a, cols[c], sol(a, static_cast<int>(c)));
    for (int c : cols) col_slot[c] = -1;
  }
  SpMat X(n_w, n_u);
  X.setFromTriplets(trips.begin(), trips.end());
  return X;
}

}  // namespace

CondensedOperator condense(const SpMat& M, const SpMat& B, const SpMat& R,
                           const DofSpace& flux_space, const DofSpace& scalar_space,
                           double mu, double theta) {
  if (mu <= 0.0) throw std::invalid_argument("condense: mu must be positive");
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("condense: theta outside [0,1]");
  if (flux_space.kind != SpaceKind::Wh || flux_space.block_offset.empty())
    throw std::invalid_argument("condense: flux space without block structure");
  if (M.rows() != flux_space.n_dofs || B.rows() != scalar_space.n_dofs)
    throw std::invalid_argument("condense: dimension mismatch");

  CondensedOperator op;
  op.mu = mu;
  op.theta = theta;
  op.scalar_space = &scalar_space;
  op.flux_op = block_solve_transposed(M, B, flux_space.block_offset);
  op.moment_op = block_solve_transposed(M, R, flux_space.block_offset);

  op.laplacian = (-(B * op.flux_op)).eval();
  // S = R M^-1 B^T; using the literal transpose of S for the other half keeps
  // the theta = 1/2 operator skew to machine precision.
  const SpMat S = R * op.flux_op;
  const SpMat St = S.transpose();
  op.convection = ((1.0 - theta) * S - theta * St).eval();
  op.A = (-mu * op.laplacian + op.convection).eval();
  return op;
}

CondensedOperator embed_operator(const CondensedOperator& op, const EmbeddingMatrix& emb,
                                 const DofSpace& tilde_space) {
  if (tilde_space.kind != SpaceKind::UhTilde)
    throw std::invalid_argument("embed_operator: target space must be the embedded space");
  if (emb.P.cols() != op.A.rows() || emb.P.rows() != tilde_space.n_dofs)
    throw std::invalid_argument("embed_operator: embedding shape mismatch");
  CondensedOperator out;
  out.mu = op.mu;
  out.theta = op.theta;
  out.scalar_space = &tilde_space;
  const SpMat Pt = emb.P.transpose();
  out.laplacian = (emb.P * op.laplacian * Pt).eval();
  out.convection = (emb.P * op.convection * Pt).eval();
  out.A = (emb.P * op.A * Pt).eval();
  out.flux_op = (op.flux_op * Pt).eval();
  out.moment_op = (op.moment_op * Pt).eval();
  return out;
}

ConstrainedSystem apply_dirichlet(const CondensedOperator& op, const Eigen::VectorXd& load,
                                  const std::function<double(Vec2)>& g) {
  const DofSpace& space = *op.scalar_space;
  const int n = space.n_dofs;
  if (load.size() != n) throw std::invalid_argument("apply_dirichlet: load size mismatch");
  if (!g) throw std::invalid_argument("apply_dirichlet: empty boundary data");

  ConstrainedSystem sys;
  sys.constrained.assign(n, false);
  sys.boundary_values = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd lift = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (!space.boundary_dof[i]) continue;
    sys.constrained[i] = true;
    sys.boundary_values[i] = g(space.dof_position[i]);
    lift[i] = sys.boundary_values[i];
  }

  sys.rhs = load - op.A * lift;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(op.A.nonZeros() + n);
  for (int k = 0; k < op.A.outerSize(); ++k)
    for (SpMat::InnerIterator it(op.A, k); it; ++it)
      if (!sys.constrained[it.row()] && !sys.constrained[it.col()])
        trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < n; ++i)
    if (sys.constrained[i]) {
      trips.emplace_back(i, i, 1.0);
      sys.rhs[i] = sys.boundary_values[i];
    }
  sys.A.resize(n, n);
  sys.A.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

namespace {

// 1-norm condition estimate following the classic power method of Hager on
// |A^-1|, using solves with A and A^T.
double condest_1norm(const SpMat& A, Eigen::SparseLU<SpMat>& lu, Eigen::SparseLU<SpMat>& lut) {
  const int n = static_cast<int>(A.rows());
  double norm_a = 0.0;
  for (int j = 0; j < A.outerSize(); ++j) {
    double col = 0.0;
    for (SpMat::InnerIterator it(A, j); it; ++it) col += std::abs(it.value());
    norm_a = std::max(norm_a, col);
  }

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
  double est = 0.0;
  for (int iter = 0; iter < 6; ++iter) {
    const Eigen::VectorXd y = lu.solve(x);
    est = y.lpNorm<1>();
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    const Eigen::VectorXd z = lut.solve(s);
    int best = 0;
    double zmax = 0.0;
    for (int i = 0; i < n; ++i)
      if (std::abs(z[i]) > zmax) {
        zmax = std::abs(z[i]);
        best = i;
      }
    if (zmax <= z.dot(x)) break;
    x.setZero();
    x[best] = 1.0;
  }
  return norm_a * est;
}

}  // namespace

SolveResult solve(const CondensedOperator& op, const ConstrainedSystem& sys,
                  bool estimate_condition) {
  SolveResult result;
  result.mu = op.mu;
  result.theta = op.theta;

  Eigen::SparseLU<SpMat> lu;
  lu.compute(sys.A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve: sparse LU factorization failed (singular system)");

  result.u = lu.solve(sys.rhs);
  // One step of iterative refinement keeps the algebraic identities tight
  // also for badly scaled convection dominated systems.
  const Eigen::VectorXd r = sys.rhs - sys.A * result.u;
  result.u += lu.solve(r);

  const double rhs_norm = sys.rhs.norm();
  result.residual = (sys.rhs - sys.A * result.u).norm() / (rhs_norm > 0.0 ? rhs_norm : 1.0);

  result.z = op.flux_op * result.u;
  result.p = op.moment_op * result.u;
  const double s = std::sqrt(op.mu);
  result.w = s * result.z - (op.theta / s) * result.p;

  if (estimate_condition) {
    SpMat At = sys.A.transpose();
    Eigen::SparseLU<SpMat> lut;
    lut.compute(At);
    if (lut.info() == Eigen::Success)
      result.cond_estimate = condest_1norm(sys.A, lu, lut);
  }
  return result;
}

}  // namespace sdg
