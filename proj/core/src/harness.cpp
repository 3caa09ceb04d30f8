#include "osgs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "osgs/estimators.hpp"
#include "osgs/io.hpp"
#include "osgs/version.hpp"

namespace osgs {

namespace {

std::string cache_key(const ProblemSpec& problem, int n, const RunOptions& options) {
  const char* hdef =
      options.assembly.h_definition == HDefinition::Diameter ? "diam" : "edge";
  return problem.name + ":" + std::to_string(n) + ":" + hdef + ":q" +
         std::to_string(options.assembly.matrix_quadrature) + ":v" + std::string(kVersion);
}

double mesh_h(const Mesh& mesh, HDefinition def) {
  const auto& h = def == HDefinition::Diameter ? mesh.h_diameter : mesh.h_edge;
  return *std::max_element(h.begin(), h.end());
}

}  // namespace

ReferenceResult compute_reference_qoi(const ProblemSpec& problem,
                                      const StabilizationConstants& constants,
                                      const RunOptions& options, int override_n,
                                      const std::filesystem::path& cache_file) {
  if (problem.reference.has_exact() && override_n == 0)
    return {eval_exact_qoi(problem), "analytic"};

  int n = override_n > 0 ? override_n : problem.reference.fine_mesh_n;
  if (n <= 0)
    return {std::numeric_limits<double>::quiet_NaN(), "none"};
  if (problem.mesh_divisor > 1) n = ((n + problem.mesh_divisor - 1) / problem.mesh_divisor) *
                                    problem.mesh_divisor;

  const std::string provenance = "fine-mesh n=" + std::to_string(n);
  const std::string key = cache_key(problem, n, options);

  nlohmann::json cache = nlohmann::json::object();
  if (!cache_file.empty() && std::filesystem::exists(cache_file)) {
    std::ifstream in(cache_file);
    if (in) in >> cache;
    if (cache.contains(key)) return {cache[key]["value"].get<double>(), provenance};
  }

  double value;
  try {
    const Mesh mesh = build_mesh(problem, n);
    const SolutionField primal =
        solve_field(mesh, problem, EquationKind::Primal, constants, options);
    const int quad = options.assembly.data_quadrature > 0 ? options.assembly.data_quadrature
                                                          : problem.data_quadrature;
    value = qoi_value(mesh, problem, primal.u, quad);
  } catch (const std::bad_alloc&) {
    throw std::runtime_error("reference solve at n=" + std::to_string(n) +
                             " exceeded memory; rerun with a smaller --reference-n");
  }

  if (!cache_file.empty()) {
    cache[key] = {{"value", value}, {"provenance", provenance}};
    std::filesystem::create_directories(cache_file.parent_path().empty()
                                            ? std::filesystem::path(".")
                                            : cache_file.parent_path());
    std::ofstream out(cache_file);
    out << cache.dump(1) << "\n";
  }
  return {value, provenance};
}

std::vector<ConvergenceRecord> run_convergence(const ProblemSpec& problem,
                                               const std::vector<int>& sizes,
                                               const StabilizationConstants& constants,
                                               const RunOptions& options,
                                               const ReferenceResult& reference) {
  if (sizes.empty()) throw std::invalid_argument("convergence: empty size list");
  for (size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("convergence: mesh sizes must be strictly increasing");

  std::vector<ConvergenceRecord> records;
  records.reserve(sizes.size());
  for (int n : sizes) {
    const EstimateResult result =
        run_estimate(problem, n, constants, options, reference.value, reference.provenance);
    ConvergenceRecord rec;
    rec.example = problem.name;
    rec.n = n;
    rec.h = mesh_h(result.mesh, options.assembly.h_definition);
    rec.dofs = build_dofmap(result.mesh, problem.dirichlet).n_free;
    rec.q_uh = result.report.qoi_uh;
    rec.q_ref = reference.value;
    rec.ref_provenance = reference.provenance;
    rec.err_abs = std::abs(reference.value - result.report.qoi_uh);
    rec.eta1 = result.report.eta1;
    rec.eta2 = result.report.eta2;
    rec.ieff1 = result.report.ieff1;
    rec.ieff2 = result.report.ieff2;
    rec.rate_pairwise = std::numeric_limits<double>::quiet_NaN();
    if (!records.empty()) {
      const auto& prev = records.back();
      if (prev.err_abs > 0.0 && rec.err_abs > 0.0)
        rec.rate_pairwise = std::log(prev.err_abs / rec.err_abs) / std::log(prev.h / rec.h);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

double least_squares_rate(const std::vector<ConvergenceRecord>& records) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (const auto& rec : records) {
    if (!(rec.err_abs > 0.0)) continue;
    const double x = std::log(rec.h);
    const double y = std::log(rec.err_abs);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("rate fit needs at least two usable records");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void export_fields(const EstimateResult& result, const std::filesystem::path& vtk_path,
                   const std::filesystem::path& csv_path) {
  if (result.mesh.n_elements() == 0) throw std::invalid_argument("export: empty mesh");
  std::vector<double> uh(result.primal.u.data(), result.primal.u.data() + result.primal.u.size());
  std::vector<double> zh(result.dual.u.data(), result.dual.u.data() + result.dual.u.size());
  write_vtk(vtk_path, result.mesh, {{"u_h", uh}, {"z_h", zh}},
            {{"eta1", result.report.eta1_K},
             {"eta2", result.report.eta2_K},
             {"tau", result.report.tau_K}});
  write_element_csv(csv_path, result.mesh, result.report.eta1_K, result.report.eta2_K,
                    result.report.tau_K);
}

}  // namespace osgs
