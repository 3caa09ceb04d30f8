#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "osgs/assembly.hpp"
#include "osgs/driver.hpp"
#include "osgs/estimators.hpp"
#include "osgs/problem.hpp"

using namespace osgs;

namespace {

ProblemSpec advection_1d() {
  ProblemSpec p;
  p.name = "advect1d";
  p.domain = DomainKind::Interval;
  p.coeff.k = 1.0;
  p.coeff.s = 0.0;
  p.coeff.a = [](double, double) { return std::array<double, 2>{1.0, 0.0}; };
  p.coeff.f = [](double, double) { return 0.0; };
  p.qoi.q = [](double, double) { return 1.0; };
  p.dirichlet.set(BoundarySide::Left, 0.0);
  p.dirichlet.set(BoundarySide::Right, 1.0);
  return p;
}

SolutionField zero_field(const Mesh& mesh, EquationKind kind = EquationKind::Primal) {
  SolutionField f;
  f.kind = kind;
  f.u = Eigen::VectorXd::Zero(mesh.n_nodes());
  f.xi = Eigen::VectorXd::Zero(mesh.n_nodes());
  return f;
}

}  // namespace

TEST_CASE("residual: zero data, zero field") {
  const ProblemSpec p = advection_1d();
  const Mesh mesh = build_interval_mesh(4);
  const auto r = residual_at_qp(mesh, p, zero_field(mesh), 1, 2);
  for (double v : r) CHECK(v == 0.0);
}

TEST_CASE("residual: pure transport of the identity profile") {
  // a = 1, s = 0, f = 0, u_h = x  ->  residual = -1 everywhere
  const ProblemSpec p = advection_1d();
  const Mesh mesh = build_interval_mesh(5);
  SolutionField field = zero_field(mesh);
  for (int i = 0; i < mesh.n_nodes(); ++i) field.u[i] = mesh.nodes[i][0];
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (double v : residual_at_qp(mesh, p, field, e, 2))
      CHECK(v == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("residual: interior element matches the interpolant derivative") {
  const ProblemSpec p = builtin_example("ex1");
  const Mesh mesh = build_interval_mesh(20);
  RunOptions ro;
  const SolutionField field = solve_field(mesh, p, EquationKind::Primal, {}, ro);
  const int e = 10;
  const double h = 1.0 / 20.0;
  const double du = (field.u[11] - field.u[10]) / h;  // P1 slope on the element
  const auto r = residual_at_qp(mesh, p, field, e, 2);
  const auto ref = ReferenceElement::create(1, quadrature_rule(1, 2));
  std::vector<MappedPoint> pts;
  map_to_physical(mesh, e, ref, pts);
  for (size_t qp = 0; qp < r.size(); ++qp) {
    const double uh = pts[qp].N[0] * field.u[10] + pts[qp].N[1] * field.u[11];
    const double expected = 0.0 - (1000.0 * du + 0.1 * uh);
    CHECK(r[qp] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("dual residual uses the reversed advection and the dual data") {
  const ProblemSpec p = advection_1d();
  const Mesh mesh = build_interval_mesh(5);
  SolutionField field = zero_field(mesh, EquationKind::Dual);
  for (int i = 0; i < mesh.n_nodes(); ++i) field.u[i] = mesh.nodes[i][0];
  // q + a.grad z = 1 + 1
  for (double v : residual_at_qp(mesh, p, field, 2, 2))
    CHECK(v == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("orthogonal residual: projection removes in-space content") {
  // constant forcing, zero field: away from the boundary the projection
  // reproduces the constant and the orthogonal component vanishes
  ProblemSpec p = advection_1d();
  p.coeff.f = [](double, double) { return 1.0; };
  const Mesh mesh = build_interval_mesh(40);
  const BlockSystem sys = assemble_primal(mesh, p);
  SolutionField field = zero_field(mesh);
  const Eigen::VectorXd xi = project_residual(sys, Eigen::VectorXd::Zero(sys.n_free()));
  field.xi = expand_to_nodes(sys.dofmap, xi, false);
  for (double v : orthogonal_residual_at_qp(mesh, p, field, 20, 2))
    CHECK(std::abs(v) <= 1e-8);  // boundary influence decays geometrically
  // and exactly zero when the data vanish
  SolutionField trivial = zero_field(mesh);
  p.coeff.f = [](double, double) { return 0.0; };
  for (double v : orthogonal_residual_at_qp(mesh, p, trivial, 20, 2)) CHECK(v == 0.0);
}

TEST_CASE("orthogonality: residual moments vanish on every free basis function") {
  for (auto [id, n] : {std::pair<const char*, int>{"ex1", 20}, {"ex3", 20}}) {
    const ProblemSpec p = builtin_example(id);
    const Mesh mesh = build_mesh(p, n);
    const BlockSystem sys = assemble_primal(mesh, p);
    RunOptions ro;
    const SolutionField field = solve_field(mesh, p, EquationKind::Primal, {}, ro);
    Eigen::VectorXd u_free(sys.n_free()), xi_free(sys.n_free());
    for (int node = 0; node < mesh.n_nodes(); ++node)
      if (sys.dofmap.equation[node] >= 0) {
        u_free[sys.dofmap.equation[node]] = field.u[node];
        xi_free[sys.dofmap.equation[node]] = field.xi[node];
      }
    const Eigen::VectorXd moments = sys.F - sys.D * u_free - sys.M * xi_free;
    const double scale = std::max(1.0, xi_free.cwiseAbs().maxCoeff());
    CHECK(moments.cwiseAbs().maxCoeff() <= 1e-9 * scale);
  }
}

TEST_CASE("orthogonality: independently recomputed moments for the 1D benchmark") {
  const ProblemSpec p = builtin_example("ex1");
  const Mesh mesh = build_interval_mesh(20);
  RunOptions ro;
  const SolutionField field = solve_field(mesh, p, EquationKind::Primal, {}, ro);
  // sum_K <Pperp(R u_h), N_i>_K over a fresh element loop
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(mesh.n_nodes());
  double residual_norm = 0.0;
  const auto ref = ReferenceElement::create(1, quadrature_rule(1, 2));
  std::vector<MappedPoint> pts;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto w = orthogonal_residual_at_qp(mesh, p, field, e, 2);
    map_to_physical(mesh, e, ref, pts);
    for (size_t qp = 0; qp < w.size(); ++qp) {
      for (int i = 0; i < 2; ++i)
        moments[mesh.elements[e][i]] += pts[qp].weight * w[qp] * pts[qp].N[i];
      residual_norm += pts[qp].weight * w[qp] * w[qp];
    }
  }
  residual_norm = std::sqrt(residual_norm);
  for (int node = 0; node < mesh.n_nodes(); ++node)
    if (!mesh.on_boundary(node))
      CHECK(std::abs(moments[node]) <= 1e-9 * std::max(1.0, residual_norm));
}

TEST_CASE("qoi_value: closed-form fields") {
  ProblemSpec p;
  p.domain = DomainKind::Square;
  p.qoi.q = [](double, double) { return 1.0; };
  const Mesh square = build_square_mesh(4);
  CHECK(qoi_value(square, p, Eigen::VectorXd::Ones(square.n_nodes()), 2) ==
        doctest::Approx(1.0).epsilon(1e-13));

  const Mesh line = build_interval_mesh(8);
  Eigen::VectorXd ramp(line.n_nodes());
  for (int i = 0; i < line.n_nodes(); ++i) ramp[i] = line.nodes[i][0];
  CHECK(qoi_value(line, p, ramp, 2) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("qoi_value: fine 1D benchmark approaches the known value") {
  const ProblemSpec p = builtin_example("ex1");
  const Mesh mesh = build_interval_mesh(320);
  RunOptions ro;
  const SolutionField field = solve_field(mesh, p, EquationKind::Primal, {}, ro);
  CHECK(std::abs(qoi_value(mesh, p, field.u, 2) - 0.9990) <= 1e-3);
}

TEST_CASE("eta1: exact in-space solution gives a zero estimator") {
  ProblemSpec p;
  p.name = "inspace";
  p.domain = DomainKind::Square;
  p.coeff.k = 1.0;
  p.coeff.s = 0.0;
  p.coeff.a = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  p.coeff.f = [](double, double) { return 0.0; };
  p.qoi.q = [](double, double) { return 1.0; };
  const auto g = [](double x, double y) { return x - 2.0 * y; };
  for (auto side : {BoundarySide::Left, BoundarySide::Right, BoundarySide::Bottom,
                    BoundarySide::Top})
    p.dirichlet.set(side, BoundaryValue(g));
  const Mesh mesh = build_square_mesh(5);
  RunOptions ro;
  const SolutionField field = solve_field(mesh, p, EquationKind::Primal, {}, ro);
  const auto eta1 = eta1_field(mesh, p, field, {}, {});
  for (double v : eta1.per_element) CHECK(std::abs(v) <= 1e-12);
  // both eta2 terms carry the vanishing primal residual
  const SolutionField dual = solve_field(mesh, p, EquationKind::Dual, {}, ro);
  const auto eta2 = eta2_field(mesh, p, field, dual, {}, {});
  for (double v : eta2.per_element) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("eta1 and eta2 vanish when the functional is zero") {
  ProblemSpec p = builtin_example("ex1");
  p.qoi.q = [](double, double) { return 0.0; };
  const Mesh mesh = build_interval_mesh(20);
  RunOptions ro;
  const SolutionField primal = solve_field(mesh, p, EquationKind::Primal, {}, ro);
  const SolutionField dual = solve_field(mesh, p, EquationKind::Dual, {}, ro);
  CHECK(dual.u.cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(eta1_field(mesh, p, primal, {}, {}).total == 0.0);
  CHECK(std::abs(eta2_field(mesh, p, primal, dual, {}, {}).total) <= 1e-16);
}

TEST_CASE("global equivalence of the two estimators on uniform-tau problems") {
  for (auto [id, n] : {std::pair<const char*, int>{"ex1", 40}, {"ex3", 20}, {"ex4", 16}}) {
    const ProblemSpec p = builtin_example(id);
    RunOptions ro;
    const EstimateResult result = run_estimate(p, n, {}, ro, 0.0, "none");
    const double gap =
        std::abs(result.report.eta1 - result.report.eta2) / std::max(std::abs(result.report.eta1), 1e-30);
    MESSAGE(std::string(id), " |eta1-eta2| relative gap: ", gap);
    CHECK(gap <= 1e-8);
  }
}

TEST_CASE("local contributions differ even when the globals coincide") {
  for (auto [id, n] : {std::pair<const char*, int>{"ex2", 20}, {"ex3", 20}}) {
    const ProblemSpec p = builtin_example(id);
    RunOptions ro;
    const EstimateResult result = run_estimate(p, n, {}, ro, 0.0, "none");
    double max_local_gap = 0.0, max_local = 0.0;
    for (size_t e = 0; e < result.report.eta1_K.size(); ++e) {
      max_local_gap =
          std::max(max_local_gap, std::abs(result.report.eta1_K[e] - result.report.eta2_K[e]));
      max_local = std::max(max_local, std::abs(result.report.eta1_K[e]));
    }
    MESSAGE(std::string(id), " max local gap: ", max_local_gap, " vs max local value ",
            max_local);
    CHECK(max_local_gap > 1e-12 * max_local);
  }
}

TEST_CASE("threaded estimation is bitwise identical to serial") {
  const ProblemSpec p = builtin_example("ex3");
  const Mesh mesh = build_square_mesh(20);
  RunOptions ro;
  const SolutionField primal = solve_field(mesh, p, EquationKind::Primal, {}, ro);
  const SolutionField dual = solve_field(mesh, p, EquationKind::Dual, {}, ro);
  AssemblyOptions threaded;
  threaded.threads = 4;
  const auto serial1 = eta1_field(mesh, p, primal, {}, {});
  const auto parallel1 = eta1_field(mesh, p, primal, {}, threaded);
  CHECK(serial1.per_element == parallel1.per_element);
  CHECK(serial1.total == parallel1.total);
  const auto serial2 = eta2_field(mesh, p, primal, dual, {}, {});
  const auto parallel2 = eta2_field(mesh, p, primal, dual, {}, threaded);
  CHECK(serial2.per_element == parallel2.per_element);
  CHECK(serial2.total == parallel2.total);
}

TEST_CASE("per-element sums reproduce the totals exactly") {
  const ProblemSpec p = builtin_example("ex3");
  RunOptions ro;
  const EstimateResult result = run_estimate(p, 20, {}, ro, 0.0, "none");
  double sum1 = 0.0, sum2 = 0.0;
  for (double v : result.report.eta1_K) sum1 += v;
  for (double v : result.report.eta2_K) sum2 += v;
  CHECK(sum1 == result.report.eta1);
  CHECK(sum2 == result.report.eta2);
}

TEST_CASE("effectivity index") {
  CHECK(effectivity(1.01, 1.0, 0.01) == doctest::Approx(1.0));
  CHECK(effectivity(1.02, 1.0, 0.01) == doctest::Approx(2.0));
  CHECK(std::isinf(effectivity(1.01, 1.0, 0.0)));
  CHECK(effectivity(1.0, 1.0, 0.0) == 1.0);
}

TEST_CASE("report: signs, effectivities and degenerate flags") {
  const ProblemSpec p = builtin_example("ex1");
  RunOptions ro;
  const double q_ref = eval_exact_qoi(p);
  const EstimateResult result = run_estimate(p, 40, {}, ro, q_ref, "analytic");
  CHECK(result.report.ieff1 == doctest::Approx(1.0).epsilon(5e-2));
  CHECK(result.report.ieff2 == doctest::Approx(1.0).epsilon(5e-2));
  CHECK_FALSE(result.report.eta1_sign_disagrees);
  CHECK(result.report.reference_provenance == "analytic");
  // estimator remains signed; the error and estimate carry the same sign
  CHECK((q_ref - result.report.qoi_uh) * result.report.eta1 > 0.0);
}

TEST_CASE("dual solution of the channel benchmark peaks near the outflow of the reversed flow") {
  const ProblemSpec p = builtin_example("ex2");
  const Mesh mesh = build_square_mesh(40);
  RunOptions ro;
  const SolutionField dual = solve_field(mesh, p, EquationKind::Dual, {}, ro);
  int argmax = 0;
  for (int node = 1; node < mesh.n_nodes(); ++node)
    if (dual.u[node] > dual.u[argmax]) argmax = node;
  CHECK(dual.u[argmax] > 0.0);
  CHECK(mesh.nodes[argmax][0] <= 0.2);  // layer sits at the x=0 side
}

TEST_CASE("mismatched solution kinds are rejected") {
  const ProblemSpec p = builtin_example("ex1");
  const Mesh mesh = build_interval_mesh(8);
  RunOptions ro;
  const SolutionField primal = solve_field(mesh, p, EquationKind::Primal, {}, ro);
  CHECK_THROWS_AS(eta2_field(mesh, p, primal, primal, {}, {}), std::invalid_argument);
  SolutionField wrong = primal;
  wrong.u.resize(3);
  CHECK_THROWS_AS(eta1_field(mesh, p, wrong, {}, {}), std::invalid_argument);
}
