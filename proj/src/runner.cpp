#include "sdg/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

namespace sdg {

std::string method_name(Method method) { return method == Method::SDG ? "sdg" : "esdg"; }

Workspace::Workspace(int N, const ConvectionField& b, int quad_degree)
    : mesh(build_structured(N)),
      flux_space(build_space(mesh, SpaceKind::Wh, 1)),
      potential(build_space(mesh, SpaceKind::Uh, 1)),
      embedded(build_space(mesh, SpaceKind::UhTilde, 1)),
      embedding(build_embedding(potential, embedded)),
      M(assemble_mass(flux_space)),
      B(assemble_gradient_form(flux_space, potential)),
      R(assemble_convection_form(flux_space, potential, b, quad_degree)) {}

SolveOutput run_single(const Workspace& ws, const ManufacturedProblem& problem,
                       Method method, double theta, int quad_degree,
                       bool estimate_condition) {
  CondensedOperator op = condense(ws.M, ws.B, ws.R, ws.flux_space, ws.potential,
                                  problem.mu, theta);
  Eigen::VectorXd load = assemble_load(ws.potential, problem.f, quad_degree);
  const DofSpace* scalar_space = &ws.potential;
  if (method == Method::ESDG) {
    op = embed_operator(op, ws.embedding, ws.embedded);
    load = (ws.embedding.P * load).eval();
    scalar_space = &ws.embedded;
  }

  const ConstrainedSystem sys = apply_dirichlet(op, load, problem.g);
  SolveOutput out;
  out.result = solve(op, sys, estimate_condition);
  out.n_dofs = scalar_space->n_dofs;
  out.error_u = l2_error_scalar(*scalar_space, out.result.u, problem.u_exact, quad_degree + 2);
  out.error_z = l2_error_vector(ws.flux_space, out.result.z, problem.grad_u_exact,
                                quad_degree + 2);
  out.z_norm = l2_norm_vector(ws.flux_space, out.result.z);

  const double energy_lhs = problem.mu * out.z_norm * out.z_norm;
  const double energy_rhs = load.dot(out.result.u);
  out.energy_mismatch = std::abs(energy_lhs - energy_rhs) /
                        (std::abs(energy_rhs) > 0.0 ? std::abs(energy_rhs) : 1.0);
  return out;
}

std::string DofTable::to_csv() const {
  std::ostringstream out;
  out << "N,dim_uh,dim_uh_tilde,ratio\n";
  char buf[128];
  for (const DofRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g\n", r.N, r.dim_uh, r.dim_tilde, r.ratio);
    out << buf;
  }
  return out.str();
}

std::string DofTable::to_markdown() const {
  std::ostringstream out;
  out << "|    N | dim Uh | dim embedded | ratio |\n";
  out << "|-----:|-------:|-------------:|------:|\n";
  char buf[128];
  for (const DofRow& r : rows) {
    std::snprintf(buf, sizeof buf, "| %4d | %6d | %12d | %.3f |\n", r.N, r.dim_uh, r.dim_tilde,
                  r.ratio);
    out << buf;
  }
  return out.str();
}

DofTable run_dof_table(const std::vector<int>& N_list) {
  DofTable table;
  for (int N : N_list) {
    const StaggeredMesh mesh = build_structured(N);
    const DofSpace uh = build_space(mesh, SpaceKind::Uh, 1);
    const DofSpace tilde = build_space(mesh, SpaceKind::UhTilde, 1);
    table.rows.push_back({N, uh.n_dofs, tilde.n_dofs,
                          static_cast<double>(tilde.n_dofs) / uh.n_dofs});
  }
  return table;
}

namespace {

std::vector<Method> methods_from_config(const RunConfig& config) {
  if (config.method == "sdg") return {Method::SDG};
  if (config.method == "esdg") return {Method::ESDG};
  if (config.method == "both") return {Method::SDG, Method::ESDG};
  throw std::invalid_argument("unknown method: " + config.method);
}

}  // namespace

std::vector<ConvergenceTable> run_convergence(const RunConfig& config) {
  const int experiment = std::stoi(config.experiment);
  if (experiment != 1 && experiment != 2)
    throw std::invalid_argument("run_convergence: experiment must be 1 or 2");

  std::vector<int> N_list = config.N_list;
  if (N_list.empty()) N_list = {2, 4, 8, 16, 32, 64};
  std::vector<double> mu_list = config.mu_list;
  if (mu_list.empty()) mu_list = experiment == 1 ? std::vector<double>{1.0}
                                                 : std::vector<double>{1.0, 1e-4};
  const double theta = config.theta_list.empty() ? 0.5 : config.theta_list.front();
  const std::vector<Method> methods = methods_from_config(config);

  // The convection field does not depend on mu, so the meshes, spaces and
  // matrices are shared across the whole sweep.  Heap storage: a Workspace
  // holds pointers into itself and must not relocate.
  std::vector<std::unique_ptr<Workspace>> spaces(N_list.size());
  std::vector<ConvergenceTable> tables;
  for (double mu : mu_list) {
    const ManufacturedProblem probe = make_problem(experiment, mu);

    for (Method method : methods) {
      ConvergenceTable table;
      table.method = method_name(method);
      table.mu = mu;
      table.theta = theta;
      for (std::size_t i = 0; i < N_list.size(); ++i) {
        if (!spaces[i])
          spaces[i] = std::make_unique<Workspace>(N_list[i], probe.b, config.quad_degree);
        const SolveOutput out =
            run_single(*spaces[i], probe, method, theta, config.quad_degree);
        ConvergenceRow row;
        row.N = N_list[i];
        row.error_u = out.error_u;
        row.error_z = out.error_z;
        if (!table.rows.empty()) {
          row.order_u = observed_order(table.rows.back().error_u, row.error_u);
          row.order_z = observed_order(table.rows.back().error_z, row.error_z);
        }
        table.rows.push_back(row);
      }
      tables.push_back(std::move(table));
    }
  }
  return tables;
}

StabilityTable run_stability_sweep(const RunConfig& config) {
  StabilityTable table;
  table.N = config.N_list.empty() ? 32 : config.N_list.front();
  table.mu_values = config.mu_list;
  if (table.mu_values.empty())
    table.mu_values = {1.0, 1e-2, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4};
  table.theta_values = config.theta_list;
  if (table.theta_values.empty()) table.theta_values = {0.0, 0.5, 1.0};
  const Method method = config.method == "sdg" ? Method::SDG : Method::ESDG;
  table.method = method_name(method);

  const ManufacturedProblem probe = make_problem(3, 1.0);
  const Workspace ws(table.N, probe.b, config.quad_degree);

  for (double mu : table.mu_values) {
    const ManufacturedProblem problem = make_problem(3, mu);
    std::vector<StabilityCell> row;
    for (double theta : table.theta_values) {
      StabilityCell cell;
      try {
        const SolveOutput out = run_single(ws, problem, method, theta, config.quad_degree, true);
        cell.z_norm = out.z_norm;
        cell.cond_estimate = out.result.cond_estimate;
      } catch (const std::runtime_error&) {
        cell.singular = true;
      }
      row.push_back(cell);
    }
    table.cells.push_back(std::move(row));
  }
  return table;
}

std::string StabilityTable::to_csv() const {
  std::ostringstream out;
  out << "mu";
  char buf[160];
  for (double theta : theta_values) {
    std::snprintf(buf, sizeof buf, ",z_norm_theta%g,cond_theta%g", theta, theta);
    out << buf;
  }
  out << "\n";
  for (std::size_t i = 0; i < mu_values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", mu_values[i]);
    out << buf;
    for (const StabilityCell& cell : cells[i]) {
      if (cell.singular) {
        out << ",SINGULAR,";
      } else {
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g", cell.z_norm, cell.cond_estimate);
        out << buf;
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string StabilityTable::to_markdown() const {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s, N = %d, flux norm (condition estimate)\n\n", method.c_str(),
                N);
  out << buf;
  out << "| mu |";
  for (double theta : theta_values) {
    std::snprintf(buf, sizeof buf, " theta = %g |", theta);
    out << buf;
  }
  out << "\n|---:|";
  for (std::size_t j = 0; j < theta_values.size(); ++j) out << "---:|";
  out << "\n";
  for (std::size_t i = 0; i < mu_values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "| %g |", mu_values[i]);
    out << buf;
    for (const StabilityCell& cell : cells[i]) {
      if (cell.singular) {
        out << " SINGULAR |";
      } else {
        std::snprintf(buf, sizeof buf, " %.2e (%.1e) |", cell.z_norm, cell.cond_estimate);
        out << buf;
      }
    }
    out << "\n";
  }
  return out.str();
}

void sample_field(const Workspace& ws, const DofSpace& scalar_space,
                  const SolveResult& result, int points_per_side, std::ostream& out) {
  out.precision(17);
  const int n = points_per_side;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 p{static_cast<double>(i) / (n - 1), static_cast<double>(j) / (n - 1)};
      const int sub = locate_sub(ws.mesh, p);
      if (sub < 0) throw std::runtime_error("sample_field: point outside mesh");
      const double u = eval_scalar(scalar_space, result.u, sub, p);
      const Vec2 z = eval_vector(ws.flux_space, result.z, sub, p);
      out << p.x << " " << p.y << " " << u << " " << z.x << " " << z.y << "\n";
    }
  }
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string mu_tag(double mu) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", mu);
  std::string tag(buf);
  for (char& c : tag)
    if (c == '.' || c == '+') c = 'p';
  return tag;
}

int run_cli(const RunConfig& config) {
  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);

  if (config.experiment == "dof") {
    std::vector<int> N_list = config.N_list;
    if (N_list.empty()) N_list = {2, 4, 8, 16, 32, 64};
    const DofTable table = run_dof_table(N_list);
    write_file(out_dir / "dof_table.csv", table.to_csv());
    write_file(out_dir / "dof_table.md", table.to_markdown());
    std::cout << table.to_markdown() << "\n";
    return 0;
  }

  if (config.experiment == "3") {
    const StabilityTable table = run_stability_sweep(config);
    write_file(out_dir / "stability.csv", table.to_csv());
    write_file(out_dir / "stability.md", table.to_markdown());
    std::cout << table.to_markdown() << "\n";
    return 0;
  }

  if (config.experiment == "1" || config.experiment == "2") {
    const std::vector<ConvergenceTable> tables = run_convergence(config);
    for (const ConvergenceTable& table : tables) {
      std::ostringstream name;
      name << "exp" << config.experiment << "_mu" << mu_tag(table.mu) << "_" << table.method;
      write_file(out_dir / (name.str() + ".csv"), table.to_csv());
      write_file(out_dir / (name.str() + ".md"), table.to_markdown());
      std::cout << table.to_markdown() << "\n";
    }
    return 0;
  }

  std::cerr << "unknown experiment: " << config.experiment << "\n";
  return 1;
}

void run_dumps_and_samples(const RunConfig& config) {
  if (!config.dump_mesh_files && !config.dump_matrix_files && !config.sample_fields) return;
  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);

  const int N = config.N_list.empty() ? 8 : config.N_list.front();
  const int experiment = config.experiment == "dof" ? 2 : std::stoi(config.experiment);
  const double mu = config.mu_list.empty() ? 1.0 : config.mu_list.front();
  const double theta = config.theta_list.empty() ? 0.5 : config.theta_list.front();
  const ManufacturedProblem problem = make_problem(experiment, mu);
  const Workspace ws(N, problem.b, config.quad_degree);

  if (config.dump_mesh_files) {
    std::ofstream out(out_dir / ("mesh_N" + std::to_string(N) + ".txt"));
    dump_mesh(ws.mesh, out);
  }
  if (config.dump_matrix_files) {
    const std::pair<const char*, const SpMat*> dumps[] = {
        {"mass", &ws.M}, {"gradient_form", &ws.B}, {"convection_form", &ws.R}};
    for (const auto& [name, matrix] : dumps) {
      std::ofstream out(out_dir / (std::string(name) + "_N" + std::to_string(N) + ".txt"));
      dump_matrix(*matrix, out);
    }
  }
  if (config.sample_fields) {
    const Method method = config.method == "sdg" ? Method::SDG : Method::ESDG;
    const SolveOutput out = run_single(ws, problem, method, theta, config.quad_degree);
    const DofSpace& space = method == Method::SDG ? ws.potential : ws.embedded;
    std::ofstream file(out_dir / ("field_N" + std::to_string(N) + "_" + method_name(method) +
                                  ".dat"));
    sample_field(ws, space, out.result, 101, file);
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Staggered DG solver for steady convection-diffusion on the unit square"};
  app.set_config("--config", "", "Read options from a key=value file");

  RunConfig config;
  app.add_option("--experiment", config.experiment,
                 "dof (count table), 1 (boundary layer), 2 (smooth sweep), 3 (robustness)")
      ->default_val("dof");
  app.add_option("--method", config.method, "sdg, esdg or both")->default_val("both");
  app.add_option("--N", config.N_list, "Mesh resolutions")->delimiter(',');
  app.add_option("--mu", config.mu_list, "Diffusion coefficients")->delimiter(',');
  app.add_option("--theta", config.theta_list, "Upwinding weights in [0,1]")->delimiter(',');
  app.add_option("--degree", config.degree, "Polynomial degree")->default_val(1);
  app.add_option("--quad-degree", config.quad_degree,
                 "Quadrature degree for data-dependent terms")
      ->default_val(6);
  app.add_option("--out", config.out_dir, "Output directory")->default_val(".");
  app.add_flag("--deterministic", config.deterministic,
               "Force deterministic output (runs are single threaded; accepted for "
               "compatibility)");
  app.add_flag("--dump-mesh", config.dump_mesh_files, "Write a mesh dump");
  app.add_flag("--dump-matrices", config.dump_matrix_files, "Write matrix dumps");
  app.add_flag("--sample-field", config.sample_fields,
               "Write a 101x101 sample of the solved field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (config.degree != 1) {
      std::cerr << "only degree 1 is implemented\n";
      return 1;
    }
    const int status = run_cli(config);
    if (status != 0) return status;
    run_dumps_and_samples(config);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace sdg
