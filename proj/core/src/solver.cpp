#include "osgs/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

namespace osgs {

SolveReport solve_sparse(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                         const SolverOptions& options) {
  if (A.rows() != A.cols()) throw SolverError("solve: matrix must be square");
  if (A.rows() != b.size()) throw SolverError("solve: rhs length mismatch");

  SolveReport report;
  const double bnorm = b.norm();

  if (options.method == SolverOptions::Method::DirectLU) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
      throw SolverError("sparse LU factorization failed (singular matrix?)");
    report.x = lu.solve(b);
    report.method = "sparse-lu";
    Eigen::VectorXd residual = b - A * report.x;
    if (bnorm > 0.0 && residual.norm() / bnorm > options.tolerance) {
      report.x += lu.solve(residual);  // one step of iterative refinement
      residual = b - A * report.x;
    }
    report.relative_residual = (bnorm > 0.0) ? residual.norm() / bnorm : residual.norm();
  } else {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> krylov;
    krylov.setTolerance(options.tolerance);
    krylov.setMaxIterations(options.max_iterations);
    krylov.compute(A);
    if (krylov.info() != Eigen::Success) throw SolverError("ILUT preconditioner failed");
    report.x = krylov.solve(b);
    report.iterations = static_cast<int>(krylov.iterations());
    report.method = "bicgstab-ilut";
    if (krylov.info() != Eigen::Success)
      throw SolverError("BiCGStab did not converge after " +
                        std::to_string(report.iterations) + " iterations (residual " +
                        std::to_string(krylov.error()) + ")");
    const Eigen::VectorXd residual = b - A * report.x;
    report.relative_residual = (bnorm > 0.0) ? residual.norm() / bnorm : residual.norm();
  }

  if (report.relative_residual > 1e-10)
    throw SolverError("backward check failed: relative residual " +
                      std::to_string(report.relative_residual));
  return report;
}

}  // namespace osgs
