#pragma once

#include <string>
#include <vector>

#include "sdg/analysis.hpp"
#include "sdg/system.hpp"

namespace sdg {

enum class Method { SDG, ESDG };

std::string method_name(Method method);

/// Everything that depends only on the mesh resolution and the convection
/// field: both potential spaces, the flux space, the embedding and the three
/// assembled matrices.  Solves for different mu / theta / method reuse it.
/// The spaces point back into the mesh, so the object is pinned in place.
struct Workspace {
  StaggeredMesh mesh;
  DofSpace flux_space;      // Wh
  DofSpace potential;       // Uh
  DofSpace embedded;        // UhTilde
  EmbeddingMatrix embedding;
  SpMat M, B, R;

  Workspace(int N, const ConvectionField& b, int quad_degree);
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
};

/// One solve plus its derived quantities.
struct SolveOutput {
  SolveResult result;
  int n_dofs = 0;
  double error_u = 0.0;
  double error_z = 0.0;
  double z_norm = 0.0;
  double energy_mismatch = 0.0;   // |mu |z|^2 - (f,u)| / |(f,u)|
};

SolveOutput run_single(const Workspace& ws, const ManufacturedProblem& problem,
                       Method method, double theta, int quad_degree,
                       bool estimate_condition = false);

struct RunConfig {
  std::string experiment = "dof";          // dof | 1 | 2 | 3
  std::string method = "both";             // sdg | esdg | both
  std::vector<int> N_list;                 // defaults depend on the experiment
  std::vector<double> mu_list;
  std::vector<double> theta_list;
  int degree = 1;
  int quad_degree = 6;
  std::string out_dir = ".";
  bool deterministic = false;              // kept for compatibility; runs are
                                           // single threaded and deterministic
  bool dump_mesh_files = false;
  bool dump_matrix_files = false;
  bool sample_fields = false;
};

struct DofRow {
  int N = 0;
  int dim_uh = 0;
  int dim_tilde = 0;
  double ratio = 0.0;
};

struct DofTable {
  std::vector<DofRow> rows;
  std::string to_csv() const;
  std::string to_markdown() const;
};

DofTable run_dof_table(const std::vector<int>& N_list);

/// Convergence study for experiments 1 and 2; one table per (method, mu).
std::vector<ConvergenceTable> run_convergence(const RunConfig& config);

/// Robustness sweep of experiment 3 over mu and theta at fixed N.
struct StabilityCell {
  double z_norm = 0.0;
  double cond_estimate = 0.0;
  bool singular = false;
};

struct StabilityTable {
  int N = 0;
  std::string method;
  std::vector<double> mu_values;
  std::vector<double> theta_values;
  std::vector<std::vector<StabilityCell>> cells;   // [mu][theta]
  std::string to_csv() const;
  std::string to_markdown() const;
};

StabilityTable run_stability_sweep(const RunConfig& config);

/// Samples the potential and the recovered flux on a uniform grid; writes one
/// "x y u zx zy" line per point.  Points on edges take the value of the
/// lowest-id sub-triangle containing them.
void sample_field(const Workspace& ws, const DofSpace& scalar_space,
                  const SolveResult& result, int points_per_side, std::ostream& out);

/// Command line driver.  Returns 0 on success, 1 on configuration errors and
/// 2 on solver failures.
int cli_main(int argc, const char* const* argv);

}  // namespace sdg
