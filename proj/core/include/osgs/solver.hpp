#pragma once

#include <Eigen/SparseCore>
#include <stdexcept>
#include <string>

namespace osgs {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  enum class Method { DirectLU, BiCGStab };
  Method method = Method::DirectLU;
  double tolerance = 1e-12;   // relative residual
  int max_iterations = 5000;  // iterative path only
};

struct SolveReport {
  Eigen::VectorXd x;
  double relative_residual = 0.0;
  int iterations = 0;  // 0 for the direct path
  std::string method;
};

/// Solves A x = b. Direct sparse LU by default (one step of iterative
/// refinement when needed); BiCGStab with ILUT as the iterative
/// alternative. Throws SolverError on factorization failure, stagnation,
/// or when the backward check ||Ax-b||/||b|| <= 1e-10 fails.
SolveReport solve_sparse(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                         const SolverOptions& options = {});

}  // namespace osgs
