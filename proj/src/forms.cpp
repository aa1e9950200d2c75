#include "sdg/forms.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "sdg/quadrature.hpp"

namespace sdg {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SpMat to_sparse(int rows, int cols, const Triplets& trips) {
  SpMat m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

// Physical quadrature points and weights on one sub-triangle.
struct MappedRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
};

MappedRule map_to_sub(const StaggeredMesh& mesh, int sub, const QuadratureRule& rule) {
  const auto c = mesh.sub_coords(sub);
  const double jac = cross(c[1] - c[0], c[2] - c[0]);
  MappedRule mapped;
  mapped.points.reserve(rule.points.size());
  mapped.weights.reserve(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Vec2 r = rule.points[q];
    mapped.points.push_back(c[0] + r.x * (c[1] - c[0]) + r.y * (c[2] - c[0]));
    mapped.weights.push_back(rule.weights[q] * jac);
  }
  return mapped;
}

// Physical quadrature points on an edge, with weights summing to its length.
MappedRule map_to_edge(const StaggeredMesh& mesh, const Edge& e, const QuadratureRule& rule) {
  const Vec2 p0 = mesh.vertices[e.vertices[0]], p1 = mesh.vertices[e.vertices[1]];
  MappedRule mapped;
  mapped.points.reserve(rule.points.size());
  mapped.weights.reserve(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    mapped.points.push_back(p0 + rule.points[q].x * (p1 - p0));
    mapped.weights.push_back(rule.weights[q] * e.length);
  }
  return mapped;
}

void check_spaces(const DofSpace& flux_space, const DofSpace& scalar_space) {
  if (flux_space.kind != SpaceKind::Wh)
    throw std::invalid_argument("assembly: first space must be the flux space");
  if (scalar_space.kind == SpaceKind::Wh)
    throw std::invalid_argument("assembly: second space must be scalar");
  if (flux_space.mesh != scalar_space.mesh)
    throw std::invalid_argument("assembly: spaces built on different meshes");
}

}  // namespace

ConvectionField make_convection_field(std::function<Vec2(Vec2)> value,
                                      bool divergence_free,
                                      double sup_norm_hint) {
  ConvectionField field{std::move(value), divergence_free, sup_norm_hint};
  if (!field.value) throw std::invalid_argument("make_convection_field: empty callable");
  if (field.divergence_free) {
    // Central difference spot check of div b = 0 on random interior points.
    std::mt19937 rng(20240915u);
    std::uniform_real_distribution<double> coord(0.05, 0.95);
    const double h = 1e-5;
    double scale = field.sup_norm_hint;
    std::vector<Vec2> pts(100);
    for (auto& p : pts) {
      p = {coord(rng), coord(rng)};
      scale = std::max(scale, norm(field.value(p)));
    }
    for (const Vec2 p : pts) {
      const double div = (field.value({p.x + h, p.y}).x - field.value({p.x - h, p.y}).x +
                          field.value({p.x, p.y + h}).y - field.value({p.x, p.y - h}).y) /
                         (2.0 * h);
      if (std::abs(div) > 1e-6 * (1.0 + scale))
        throw std::invalid_argument("make_convection_field: field declared divergence free but is not");
    }
  }
  return field;
}

SpMat assemble_mass(const DofSpace& w) {
  if (w.kind != SpaceKind::Wh)
    throw std::invalid_argument("assemble_mass: expects the flux space");
  const StaggeredMesh& mesh = *w.mesh;
  const QuadratureRule rule = triangle_rule(2 * w.degree + 1);
  Triplets trips;
  trips.reserve(mesh.n_subs() * 36);
  for (int s = 0; s < mesh.n_subs(); ++s) {
    const MappedRule mq = map_to_sub(mesh, s, rule);
    for (std::size_t q = 0; q < mq.points.size(); ++q) {
      const VectorBasis basis = w.vector_basis(s, mq.points[q]);
      for (int i = 0; i < 6; ++i) {
        const DofLink& li = w.link(s, i);
        for (int j = 0; j < 6; ++j) {
          const DofLink& lj = w.link(s, j);
          const double v = mq.weights[q] * dot(basis.value[i], basis.value[j]);
          trips.emplace_back(li.dof, lj.dof, li.weight * lj.weight * v);
        }
      }
    }
  }
  return to_sparse(w.n_dofs, w.n_dofs, trips);
}

SpMat assemble_gradient_form(const DofSpace& w, const DofSpace& u) {
  check_spaces(w, u);
  const StaggeredMesh& mesh = *w.mesh;
  const QuadratureRule vol_rule = triangle_rule(2 * w.degree + 1);
  const QuadratureRule edge_rule = segment_rule(w.degree + 1);
  Triplets trips;
  trips.reserve(mesh.n_subs() * 30);

  // Volume part: psi . grad v on every sub-triangle.
  for (int s = 0; s < mesh.n_subs(); ++s) {
    const MappedRule mq = map_to_sub(mesh, s, vol_rule);
    for (std::size_t q = 0; q < mq.points.size(); ++q) {
      const VectorBasis wb = w.vector_basis(s, mq.points[q]);
      const ScalarBasis ub = u.scalar_basis(s, mq.points[q]);
      for (int i = 0; i < 3; ++i) {
        const DofLink& li = u.link(s, i);
        for (int j = 0; j < 6; ++j) {
          const DofLink& lj = w.link(s, j);
          const double v = mq.weights[q] * dot(wb.value[j], ub.grad[i]);
          trips.emplace_back(li.dof, lj.dof, li.weight * lj.weight * v);
        }
      }
    }
  }

  // Dual edge part: -(psi.n)[v].  The normal trace of the flux space is
  // single valued across a dual edge, so it is taken from the first adjacent
  // sub-triangle; the jump collects both one-sided scalar traces with their
  // outward signs.
  for (const Edge& e : mesh.edges) {
    if (e.kind != EdgeKind::Dual) continue;
    const MappedRule mq = map_to_edge(mesh, e, edge_rule);
    const int s_flux = e.adjacent_subs[0];
    for (std::size_t q = 0; q < mq.points.size(); ++q) {
      const VectorBasis wb = w.vector_basis(s_flux, mq.points[q]);
      for (int side = 0; side < 2; ++side) {
        const int s_v = e.adjacent_subs[side];
        const double sign = e.side_sign[side];
        const ScalarBasis ub = u.scalar_basis(s_v, mq.points[q]);
        for (int i = 0; i < 3; ++i) {
          const DofLink& li = u.link(s_v, i);
          for (int j = 0; j < 6; ++j) {
            const DofLink& lj = w.link(s_flux, j);
            const double psi_n = dot(wb.value[j], e.normal);
            const double v = -mq.weights[q] * psi_n * sign * ub.value[i];
            trips.emplace_back(li.dof, lj.dof, li.weight * lj.weight * v);
          }
        }
      }
    }
  }
  return to_sparse(u.n_dofs, w.n_dofs, trips);
}

SpMat assemble_divergence_form(const DofSpace& w, const DofSpace& u) {
  check_spaces(w, u);
  const StaggeredMesh& mesh = *w.mesh;
  const QuadratureRule vol_rule = triangle_rule(2 * w.degree + 1);
  const QuadratureRule edge_rule = segment_rule(w.degree + 1);
  Triplets trips;
  trips.reserve(mesh.n_subs() * 30);

  // Volume part: -v div psi.
  for (int s = 0; s < mesh.n_subs(); ++s) {
    const MappedRule mq = map_to_sub(mesh, s, vol_rule);
    for (std::size_t q = 0; q < mq.points.size(); ++q) {
      const VectorBasis wb = w.vector_basis(s, mq.points[q]);
      const ScalarBasis ub = u.scalar_basis(s, mq.points[q]);
      for (int j = 0; j < 6; ++j) {
        const DofLink& lj = w.link(s, j);
        for (int i = 0; i < 3; ++i) {
          const DofLink& li = u.link(s, i);
          const double v = -mq.weights[q] * ub.value[i] * wb.div[j];
          trips.emplace_back(lj.dof, li.dof, li.weight * lj.weight * v);
        }
      }
    }
  }

  // Interior primal edge part: v [psi.n].  The scalar trace is single valued
  // across an interior primal edge and is taken from the first adjacent
  // sub-triangle; the flux jump collects both sides.
  for (const Edge& e : mesh.edges) {
    if (e.kind != EdgeKind::PrimalInterior) continue;
    const MappedRule mq = map_to_edge(mesh, e, edge_rule);
    const int s_v = e.adjacent_subs[0];
    for (std::size_t q = 0; q < mq.points.size(); ++q) {
      const ScalarBasis ub = u.scalar_basis(s_v, mq.points[q]);
      for (int side = 0; side < 2; ++side) {
        const int s_flux = e.adjacent_subs[side];
        const double sign = e.side_sign[side];
        const VectorBasis wb = w.vector_basis(s_flux, mq.points[q]);
        for (int j = 0; j < 6; ++j) {
          const DofLink& lj = w.link(s_flux, j);
          for (int i = 0; i < 3; ++i) {
            const DofLink& li = u.link(s_v, i);
            const double v = mq.weights[q] * ub.value[i] * sign * dot(wb.value[j], e.normal);
            trips.emplace_back(lj.dof, li.dof, li.weight * lj.weight * v);
          }
        }
      }
    }
  }
  return to_sparse(w.n_dofs, u.n_dofs, trips);
}

SpMat assemble_convection_form(const DofSpace& w, const DofSpace& u,
                               const ConvectionField& b, int quad_degree) {
  check_spaces(w, u);
  if (!b.value) throw std::invalid_argument("assemble_convection_form: empty velocity field");
  const int min_degree = 2 * w.degree + 1;
  if (quad_degree < min_degree)
    throw std::invalid_argument("assemble_convection_form: quadrature degree below minimum");
  const StaggeredMesh& mesh = *w.mesh;
  const QuadratureRule rule = triangle_rule(quad_degree);
  Triplets trips;
  trips.reserve(mesh.n_subs() * 18);
  for (int s = 0; s < mesh.n_subs(); ++s) {
    const MappedRule mq = map_to_sub(mesh, s, rule);
    for (std::size_t q = 0; q < mq.points.size(); ++q) {
      const Vec2 bq = b.value(mq.points[q]);
      const VectorBasis wb = w.vector_basis(s, mq.points[q]);
      const ScalarBasis ub = u.scalar_basis(s, mq.points[q]);
      for (int i = 0; i < 3; ++i) {
        const DofLink& li = u.link(s, i);
        for (int j = 0; j < 6; ++j) {
          const DofLink& lj = w.link(s, j);
          const double v = mq.weights[q] * dot(bq, wb.value[j]) * ub.value[i];
          trips.emplace_back(li.dof, lj.dof, li.weight * lj.weight * v);
        }
      }
    }
  }
  return to_sparse(u.n_dofs, w.n_dofs, trips);
}

Eigen::VectorXd assemble_load(const DofSpace& u, const std::function<double(Vec2)>& f,
                              int quad_degree) {
  if (u.kind == SpaceKind::Wh)
    throw std::invalid_argument("assemble_load: expects a scalar space");
  if (!f) throw std::invalid_argument("assemble_load: empty source term");
  const StaggeredMesh& mesh = *u.mesh;
  const QuadratureRule rule = triangle_rule(std::max(quad_degree, 2 * u.degree + 1));
  Eigen::VectorXd load = Eigen::VectorXd::Zero(u.n_dofs);
  for (int s = 0; s < mesh.n_subs(); ++s) {
    const MappedRule mq = map_to_sub(mesh, s, rule);
    for (std::size_t q = 0; q < mq.points.size(); ++q) {
      const double fq = f(mq.points[q]);
      const ScalarBasis ub = u.scalar_basis(s, mq.points[q]);
      for (int i = 0; i < 3; ++i) {
        const DofLink& li = u.link(s, i);
        load[li.dof] += li.weight * mq.weights[q] * fq * ub.value[i];
      }
    }
  }
  return load;
}

double max_abs(const SpMat& m) {
  double v = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      v = std::max(v, std::abs(it.value()));
  return v;
}

void dump_matrix(const SpMat& m, std::ostream& out) {
  out.precision(17);
  out << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      out << it.row() << " " << it.col() << " " << it.value() << "\n";
}

}  // namespace sdg
