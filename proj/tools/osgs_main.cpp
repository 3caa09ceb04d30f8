// Command-line front end: solve, estimate, convergence and reference runs
// for the stabilized convection-diffusion-reaction solver.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "osgs/driver.hpp"
#include "osgs/harness.hpp"
#include "osgs/io.hpp"
#include "osgs/problem.hpp"
#include "osgs/version.hpp"

namespace {

struct CliConfig {
  std::string example;
  std::string problem_file;
  int n = 0;
  int quad = 2;
  int data_quad = 0;
  std::string h_definition = "diameter";
  std::string solve_path = "monolithic";
  std::string out_dir = "out";
  int reference_n = 0;
  double tol = 1e-12;
  int threads = 1;
  std::string sizes;
};

void apply_config_file(const std::string& path, CliConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  nlohmann::json j;
  in >> j;
  auto get = [&j](const char* key, auto& target) {
    if (j.contains(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
  };
  get("example", cfg.example);
  get("problem-file", cfg.problem_file);
  get("n", cfg.n);
  get("quad", cfg.quad);
  get("data-quad", cfg.data_quad);
  get("h-definition", cfg.h_definition);
  get("solve-path", cfg.solve_path);
  get("out", cfg.out_dir);
  get("reference-n", cfg.reference_n);
  get("tol", cfg.tol);
  get("threads", cfg.threads);
  get("sizes", cfg.sizes);
}

osgs::RunOptions run_options(const CliConfig& cfg) {
  osgs::RunOptions options;
  options.assembly.matrix_quadrature = cfg.quad;
  options.assembly.data_quadrature = cfg.data_quad;
  options.assembly.threads = cfg.threads;
  if (cfg.h_definition == "diameter")
    options.assembly.h_definition = osgs::HDefinition::Diameter;
  else if (cfg.h_definition == "edge")
    options.assembly.h_definition = osgs::HDefinition::Edge;
  else
    throw CLI::ValidationError("--h-definition", "must be 'diameter' or 'edge'");
  if (cfg.solve_path == "monolithic")
    options.path = osgs::SolvePath::Monolithic;
  else if (cfg.solve_path == "condensed")
    options.path = osgs::SolvePath::Condensed;
  else
    throw CLI::ValidationError("--solve-path", "must be 'monolithic' or 'condensed'");
  options.solver.tolerance = cfg.tol;
  return options;
}

osgs::ProblemSpec resolve_problem(const CliConfig& cfg) {
  if (!cfg.problem_file.empty()) return osgs::load_problem_json(cfg.problem_file);
  if (cfg.example.empty())
    throw CLI::ValidationError("--example", "an example id or --problem-file is required");
  return osgs::builtin_example(cfg.example);
}

int resolve_n(const CliConfig& cfg, const osgs::ProblemSpec& problem) {
  const int n = cfg.n > 0 ? cfg.n : problem.default_n;
  if (n <= 0) throw CLI::ValidationError("--n", "a mesh size is required");
  return n;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  std::string token;
  std::istringstream ss(text);
  while (std::getline(ss, token, ',')) {
    size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used != token.size() || v <= 0) throw std::invalid_argument("malformed size '" + token + "'");
    sizes.push_back(v);
  }
  if (sizes.empty()) throw std::invalid_argument("empty size list");
  return sizes;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void print_record(const osgs::ConvergenceRecord& r) {
  std::cout << "example=" << r.example << " n=" << r.n << " h=" << num(r.h)
            << " dofs=" << r.dofs << " Q_uh=" << num(r.q_uh) << " Q_ref=" << num(r.q_ref)
            << " err=" << num(r.err_abs) << " eta1=" << num(r.eta1) << " eta2=" << num(r.eta2)
            << " ieff1=" << num(r.ieff1) << " ieff2=" << num(r.ieff2)
            << " rate=" << num(r.rate_pairwise) << "\n";
}

int run(int argc, char** argv) {
  CliConfig cfg;
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  if (!config_path.empty()) apply_config_file(config_path, cfg);

  CLI::App app{"OSGS-stabilized CDR solver with goal-oriented error estimation"};
  app.set_version_flag("--version", std::string(osgs::kVersion));
  app.require_subcommand(1);

  std::string config_dummy;
  app.add_option("--config", config_dummy, "JSON config file (flags override it)");

  auto add_common = [&](CLI::App* cmd, bool with_n) {
    cmd->add_option("--example,-e", cfg.example, "built-in example id (ex1..ex4)");
    cmd->add_option("--problem-file", cfg.problem_file, "JSON problem description");
    if (with_n) cmd->add_option("--n", cfg.n, "mesh parameter");
    cmd->add_option("--quad", cfg.quad, "quadrature points per direction (1..5)");
    cmd->add_option("--data-quad", cfg.data_quad,
                    "quadrature for forcing/QoI integrals (0 = problem default)");
    cmd->add_option("--h-definition", cfg.h_definition, "element size for tau: diameter|edge");
    cmd->add_option("--solve-path", cfg.solve_path, "monolithic|condensed");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--tol", cfg.tol, "solver relative-residual tolerance");
    cmd->add_option("--threads", cfg.threads, "assembly/estimation threads");
    cmd->add_option("--config", config_dummy, "JSON config file (flags override it)");
  };

  auto* cmd_list = app.add_subcommand("list-examples", "list the built-in examples");
  auto* cmd_solve = app.add_subcommand("solve", "solve primal and dual, print Q(u_h)");
  add_common(cmd_solve, true);
  auto* cmd_estimate =
      app.add_subcommand("estimate", "solve and compute the error estimators, write VTK/CSV");
  add_common(cmd_estimate, true);
  cmd_estimate->add_option("--reference-n", cfg.reference_n,
                           "override the fine reference mesh parameter");
  auto* cmd_convergence = app.add_subcommand("convergence", "mesh-refinement study");
  add_common(cmd_convergence, false);
  cmd_convergence->add_option("--sizes", cfg.sizes, "comma-separated mesh parameters");
  cmd_convergence->add_option("--reference-n", cfg.reference_n,
                              "override the fine reference mesh parameter");
  auto* cmd_reference = app.add_subcommand("reference", "compute the reference QoI value");
  add_common(cmd_reference, false);
  cmd_reference->add_option("--reference-n,--n", cfg.reference_n,
                            "override the fine reference mesh parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  const osgs::StabilizationConstants constants;

  if (cmd_list->parsed()) {
    for (const auto& id : osgs::builtin_example_ids()) {
      const auto p = osgs::builtin_example(id);
      std::cout << id << ": " << p.qoi.description << "\n";
    }
    return 0;
  }

  const osgs::ProblemSpec problem = resolve_problem(cfg);
  const osgs::RunOptions options = run_options(cfg);
  const std::filesystem::path out_dir(cfg.out_dir);
  const std::filesystem::path cache = out_dir / "reference_cache.json";

  if (cmd_solve->parsed()) {
    const int n = resolve_n(cfg, problem);
    const osgs::Mesh mesh = osgs::build_mesh(problem, n);
    const auto primal =
        osgs::solve_field(mesh, problem, osgs::EquationKind::Primal, constants, options);
    const auto dual =
        osgs::solve_field(mesh, problem, osgs::EquationKind::Dual, constants, options);
    const int quad = cfg.data_quad > 0 ? cfg.data_quad : problem.data_quadrature;
    const double q_uh = osgs::qoi_value(mesh, problem, primal.u, quad);
    std::cout << "example=" << problem.name << " n=" << n << " nodes=" << mesh.n_nodes()
              << " Q_uh=" << num(q_uh) << " z_range=[" << num(dual.u.minCoeff()) << ","
              << num(dual.u.maxCoeff()) << "] solver=" << primal.solve.method
              << " rel_residual=" << num(primal.solve.relative_residual) << "\n";
    return 0;
  }

  if (cmd_estimate->parsed()) {
    const int n = resolve_n(cfg, problem);
    const auto reference =
        osgs::compute_reference_qoi(problem, constants, options, cfg.reference_n, cache);
    const auto result =
        osgs::run_estimate(problem, n, constants, options, reference.value, reference.provenance);
    const auto& h_field = options.assembly.h_definition == osgs::HDefinition::Diameter
                              ? result.mesh.h_diameter
                              : result.mesh.h_edge;
    osgs::ConvergenceRecord rec;
    rec.example = problem.name;
    rec.n = n;
    rec.h = *std::max_element(h_field.begin(), h_field.end());
    rec.dofs = osgs::build_dofmap(result.mesh, problem.dirichlet).n_free;
    rec.q_uh = result.report.qoi_uh;
    rec.q_ref = reference.value;
    rec.err_abs = std::abs(reference.value - result.report.qoi_uh);
    rec.eta1 = result.report.eta1;
    rec.eta2 = result.report.eta2;
    rec.ieff1 = result.report.ieff1;
    rec.ieff2 = result.report.ieff2;
    rec.rate_pairwise = std::numeric_limits<double>::quiet_NaN();
    print_record(rec);
    const std::string stem = problem.name + "_" + std::to_string(n);
    osgs::export_fields(result, out_dir / (stem + ".vtk"), out_dir / (stem + ".csv"));
    std::cout << "wrote " << (out_dir / (stem + ".vtk")).string() << " and "
              << (out_dir / (stem + ".csv")).string() << " (ref " << reference.provenance
              << ")\n";
    return 0;
  }

  if (cmd_convergence->parsed()) {
    const std::vector<int> sizes =
        cfg.sizes.empty() ? problem.default_sizes : parse_sizes(cfg.sizes);
    if (sizes.empty())
      throw CLI::ValidationError("--sizes", "no default sizes for this problem");
    const auto reference =
        osgs::compute_reference_qoi(problem, constants, options, cfg.reference_n, cache);
    const auto records = osgs::run_convergence(problem, sizes, constants, options, reference);
    for (const auto& r : records) print_record(r);
    int usable = 0;
    for (const auto& r : records)
      if (r.err_abs > 0.0) ++usable;
    if (usable >= 2)
      std::cout << "least-squares rate: " << num(osgs::least_squares_rate(records)) << "\n";
    const std::filesystem::path csv = out_dir / (problem.name + "_convergence.csv");
    osgs::write_convergence_csv(csv, records);
    std::cout << "wrote " << csv.string() << "\n";
    return 0;
  }

  if (cmd_reference->parsed()) {
    const auto reference =
        osgs::compute_reference_qoi(problem, constants, options, cfg.reference_n, cache);
    std::cout << "example=" << problem.name << " Q_ref=" << num(reference.value)
              << " provenance=" << reference.provenance << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
