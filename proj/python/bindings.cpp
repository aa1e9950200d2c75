// Python veneer over the solver library: space and mesh inventories, the dof
// table, and a one-call driver for the three manufactured studies.

#include <stdexcept>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sdg/analysis.hpp"
#include "sdg/runner.hpp"

namespace py = pybind11;

namespace {

sdg::Method parse_method(const std::string& name) {
  if (name == "sdg") return sdg::Method::SDG;
  if (name == "esdg") return sdg::Method::ESDG;
  throw std::invalid_argument("method must be 'sdg' or 'esdg', got '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Staggered DG solver for steady convection-diffusion";

  m.def(
      "dof_counts",
      [](int N) {
        const sdg::StaggeredMesh mesh = sdg::build_structured(N);
        py::dict out;
        out["potential"] = sdg::build_space(mesh, sdg::SpaceKind::Uh, 1).n_dofs;
        out["embedded_potential"] = sdg::build_space(mesh, sdg::SpaceKind::UhTilde, 1).n_dofs;
        out["flux"] = sdg::build_space(mesh, sdg::SpaceKind::Wh, 1).n_dofs;
        return out;
      },
      py::arg("N"), "Dimensions of the three discrete spaces on the structured N x N mesh.");

  m.def(
      "mesh_counts",
      [](int N) {
        const sdg::StaggeredMesh mesh = sdg::build_structured(N);
        py::dict out;
        out["vertices"] = static_cast<int>(mesh.vertices.size());
        out["macro_triangles"] = mesh.n_macros();
        out["sub_triangles"] = mesh.n_subs();
        out["interior_primal_edges"] = mesh.count(sdg::EdgeKind::PrimalInterior);
        out["boundary_primal_edges"] = mesh.count(sdg::EdgeKind::PrimalBoundary);
        out["dual_edges"] = mesh.count(sdg::EdgeKind::Dual);
        return out;
      },
      py::arg("N"), "Entity counts of the two-level structured mesh.");

  m.def(
      "dof_table_csv",
      [](const std::vector<int>& sizes) { return sdg::run_dof_table(sizes).to_csv(); },
      py::arg("sizes"), "CSV comparison of the full and embedded potential space sizes.");

  m.def("observed_order", &sdg::observed_order, py::arg("error_coarse"), py::arg("error_fine"),
        "log2(error_coarse / error_fine) for a mesh refinement by a factor of two.");

  m.def(
      "solve_experiment",
      [](int experiment, int N, double mu, const std::string& method, double theta,
         int quad_degree) {
        const sdg::ManufacturedProblem problem = sdg::make_problem(experiment, mu);
        const sdg::Workspace ws(N, problem.b, quad_degree);
        const sdg::SolveOutput out =
            sdg::run_single(ws, problem, parse_method(method), theta, quad_degree);
        py::dict result;
        result["n_dofs"] = out.n_dofs;
        result["error_u"] = out.error_u;
        result["error_z"] = out.error_z;
        result["z_norm"] = out.z_norm;
        result["energy_mismatch"] = out.energy_mismatch;
        result["residual"] = out.result.residual;
        return result;
      },
      py::arg("experiment"), py::arg("N"), py::arg("mu"), py::arg("method") = "esdg",
      py::arg("theta") = 0.5, py::arg("quad_degree") = 6,
      "Solve one manufactured study and report errors and stability monitors.");
}
