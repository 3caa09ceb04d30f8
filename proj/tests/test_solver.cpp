#include <doctest.h>

#include <Eigen/Dense>
#include <cstring>

#include "osgs/assembly.hpp"
#include "osgs/driver.hpp"
#include "osgs/problem.hpp"
#include "osgs/solver.hpp"

using namespace osgs;

TEST_CASE("identity system returns the right-hand side") {
  Eigen::SparseMatrix<double> I(5, 5);
  I.setIdentity();
  Eigen::VectorXd b(5);
  b << 1, -2, 3, 0.5, 4;
  const auto report = solve_sparse(I, b);
  CHECK((report.x - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(report.relative_residual <= 1e-15);
  CHECK(report.method == "sparse-lu");
}

TEST_CASE("discrete Laplacian reproduces the linear profile") {
  ProblemSpec p;
  p.name = "laplace";
  p.domain = DomainKind::Interval;
  p.coeff.k = 1.0;
  p.coeff.s = 0.0;
  p.coeff.a = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  p.coeff.f = [](double, double) { return 0.0; };
  p.qoi.q = [](double, double) { return 1.0; };
  p.dirichlet.set(BoundarySide::Left, 1.0);
  p.dirichlet.set(BoundarySide::Right, 0.0);
  const Mesh mesh = build_interval_mesh(4);
  RunOptions ro;
  const SolutionField field = solve_field(mesh, p, EquationKind::Primal, {}, ro);
  const double expected[5] = {1.0, 0.75, 0.5, 0.25, 0.0};
  for (int i = 0; i < 5; ++i) CHECK(field.u[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("sparse solve matches a dense full-pivot factorization") {
  const ProblemSpec p = builtin_example("ex1");
  const Mesh mesh = build_interval_mesh(10);
  const BlockSystem sys = assemble_primal(mesh, p);
  const auto A = monolithic_matrix(sys);
  const auto b = monolithic_rhs(sys);
  const auto report = solve_sparse(A, b);
  const Eigen::VectorXd dense = Eigen::MatrixXd(A).fullPivLu().solve(b);
  CHECK((report.x - dense).cwiseAbs().maxCoeff() <=
        1e-10 * std::max(1.0, dense.cwiseAbs().maxCoeff()));
}

TEST_CASE("direct path is deterministic down to the bits") {
  const ProblemSpec p = builtin_example("ex3");
  const Mesh mesh = build_square_mesh(8);
  const BlockSystem sys = assemble_primal(mesh, p);
  const auto A = monolithic_matrix(sys);
  const auto b = monolithic_rhs(sys);
  const auto first = solve_sparse(A, b);
  const auto second = solve_sparse(A, b);
  REQUIRE(first.x.size() == second.x.size());
  CHECK(std::memcmp(first.x.data(), second.x.data(), sizeof(double) * first.x.size()) == 0);
}

TEST_CASE("accepted solves satisfy the backward check") {
  const ProblemSpec p = builtin_example("ex4");
  const Mesh mesh = build_lshape_mesh(8);
  const BlockSystem sys = assemble_primal(mesh, p);
  const auto report = solve_sparse(monolithic_matrix(sys), monolithic_rhs(sys));
  CHECK(report.relative_residual <= 1e-10);
}

TEST_CASE("singular matrix is rejected") {
  Eigen::SparseMatrix<double> A(3, 3);
  A.insert(0, 0) = 1.0;  // rank deficient
  A.makeCompressed();
  Eigen::VectorXd b = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(solve_sparse(A, b), SolverError);
}

TEST_CASE("shape mismatches are rejected") {
  Eigen::SparseMatrix<double> A(3, 4);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(solve_sparse(A, b), SolverError);
  Eigen::SparseMatrix<double> B(3, 3);
  B.setIdentity();
  Eigen::VectorXd c = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_AS(solve_sparse(B, c), SolverError);
}

TEST_CASE("iterative path agrees with the direct path") {
  const ProblemSpec p = builtin_example("ex1");
  const Mesh mesh = build_interval_mesh(40);
  const BlockSystem sys = assemble_primal(mesh, p);
  const auto A = monolithic_matrix(sys);
  const auto b = monolithic_rhs(sys);
  const auto direct = solve_sparse(A, b);
  SolverOptions iterative;
  iterative.method = SolverOptions::Method::BiCGStab;
  const auto krylov = solve_sparse(A, b, iterative);
  CHECK(krylov.method == "bicgstab-ilut");
  CHECK((krylov.x - direct.x).cwiseAbs().maxCoeff() <=
        1e-8 * std::max(1.0, direct.x.cwiseAbs().maxCoeff()));
}
