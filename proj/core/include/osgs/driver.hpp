#pragma once

#include "osgs/assembly.hpp"
#include "osgs/estimators.hpp"
#include "osgs/solver.hpp"

namespace osgs {

enum class SolvePath { Monolithic, Condensed };

struct RunOptions {
  AssemblyOptions assembly;
  SolverOptions solver;
  SolvePath path = SolvePath::Monolithic;
};

/// Assembles and solves one stabilized problem, returning full nodal
/// fields. The monolithic path solves the coupled system with the
/// consistent Gram matrix; the condensed path solves the lumped-mass
/// reduced system and recovers xi afterwards.
SolutionField solve_field(const Mesh& mesh, const ProblemSpec& problem, EquationKind kind,
                          const StabilizationConstants& constants, const RunOptions& options);

/// Solves xi from the projection block alone, u held fixed (consistent M):
/// M xi = F - D u.
Eigen::VectorXd project_residual(const BlockSystem& system, const Eigen::VectorXd& u_free);

struct EstimateResult {
  Mesh mesh;
  SolutionField primal;
  SolutionField dual;
  EstimatorReport report;
};

EstimateResult run_estimate(const ProblemSpec& problem, int n,
                            const StabilizationConstants& constants, const RunOptions& options,
                            double reference_qoi, const std::string& reference_provenance);

/// Free-node values expanded to the full nodal vector (Dirichlet filled in).
Eigen::VectorXd expand_to_nodes(const DofMap& dofmap, const Eigen::VectorXd& free_values,
                                bool use_dirichlet_values);

}  // namespace osgs
