#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "osgs/driver.hpp"
#include "osgs/problem.hpp"

namespace osgs {

struct ConvergenceRecord {
  std::string example;
  int n = 0;
  double h = 0.0;
  int dofs = 0;  // free FE unknowns of the primal field
  double q_uh = 0.0;
  double q_ref = 0.0;
  std::string ref_provenance;
  double err_abs = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double ieff1 = 0.0;
  double ieff2 = 0.0;
  double rate_pairwise = 0.0;  // NaN on the first level
};

struct ReferenceResult {
  double value = 0.0;
  std::string provenance;  // "analytic" | "fine-mesh n=<N>" | "none"
};

/// Reference QoI: analytic quadrature when the problem has an exact
/// solution, otherwise a full stabilized solve on the fine reference mesh
/// (or override_n). Results of fine-mesh solves are cached in cache_file
/// keyed by problem, mesh, h-definition and code version.
ReferenceResult compute_reference_qoi(const ProblemSpec& problem,
                                      const StabilizationConstants& constants,
                                      const RunOptions& options, int override_n = 0,
                                      const std::filesystem::path& cache_file = {});

/// One solve+estimate per mesh size; sizes must be strictly increasing.
std::vector<ConvergenceRecord> run_convergence(const ProblemSpec& problem,
                                               const std::vector<int>& sizes,
                                               const StabilizationConstants& constants,
                                               const RunOptions& options,
                                               const ReferenceResult& reference);

/// Least-squares slope of log|err| against log h over the given records.
double least_squares_rate(const std::vector<ConvergenceRecord>& records);

/// Writes the solution and estimator fields of a finished run: legacy-VTK
/// (point data u_h, z_h; cell data eta1, eta2, tau) plus a per-element CSV.
void export_fields(const EstimateResult& result, const std::filesystem::path& vtk_path,
                   const std::filesystem::path& csv_path);

}  // namespace osgs
