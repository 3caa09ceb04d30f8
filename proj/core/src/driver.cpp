#include "osgs/driver.hpp"

#include <Eigen/SparseCholesky>

namespace osgs {

Eigen::VectorXd expand_to_nodes(const DofMap& dofmap, const Eigen::VectorXd& free_values,
                                bool use_dirichlet_values) {
  Eigen::VectorXd nodal(dofmap.equation.size());
  for (size_t node = 0; node < dofmap.equation.size(); ++node) {
    const int eq = dofmap.equation[node];
    nodal[node] = (eq >= 0) ? free_values[eq] : (use_dirichlet_values ? dofmap.value[node] : 0.0);
  }
  return nodal;
}

SolutionField solve_field(const Mesh& mesh, const ProblemSpec& problem, EquationKind kind,
                          const StabilizationConstants& constants, const RunOptions& options) {
  const BlockSystem system = assemble_system(mesh, problem, kind, constants, options.assembly);
  const int nf = system.n_free();
  SolutionField field;
  field.kind = kind;
  if (options.path == SolvePath::Monolithic) {
    auto report =
        solve_sparse(monolithic_matrix(system), monolithic_rhs(system), options.solver);
    field.u = expand_to_nodes(system.dofmap, report.x.head(nf), true);
    field.xi = expand_to_nodes(system.dofmap, report.x.tail(nf), false);
    report.x.resize(0);
    field.solve = std::move(report);
  } else {
    const CondensedSystem reduced = condense_lumped(system);
    auto report = solve_sparse(reduced.A, reduced.b, options.solver);
    field.u = expand_to_nodes(system.dofmap, report.x, true);
    field.xi = expand_to_nodes(system.dofmap, reduced.recover_xi(system, report.x), false);
    report.x.resize(0);
    field.solve = std::move(report);
  }
  return field;
}

Eigen::VectorXd project_residual(const BlockSystem& system, const Eigen::VectorXd& u_free) {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(system.M);
  if (ldlt.info() != Eigen::Success)
    throw SolverError("Gram matrix factorization failed");
  return ldlt.solve(system.F - system.D * u_free);
}

EstimateResult run_estimate(const ProblemSpec& problem, int n,
                            const StabilizationConstants& constants, const RunOptions& options,
                            double reference_qoi, const std::string& reference_provenance) {
  EstimateResult result;
  result.mesh = build_mesh(problem, n);
  result.primal = solve_field(result.mesh, problem, EquationKind::Primal, constants, options);
  result.dual = solve_field(result.mesh, problem, EquationKind::Dual, constants, options);
  result.report = make_report(result.mesh, problem, result.primal, result.dual, constants,
                              options.assembly, reference_qoi, reference_provenance);
  return result;
}

}  // namespace osgs
