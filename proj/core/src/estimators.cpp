#include "osgs/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace osgs {

namespace {

struct PointValues {
  double u, a_grad_u;     // field value and a.grad at the point
  double xi;
};

PointValues interp(const MappedPoint& p, const std::array<double, 2>& a,
                   const Eigen::VectorXd& u, const Eigen::VectorXd& xi,
                   const std::array<int, 4>& conn, int nn) {
  PointValues v{0.0, 0.0, 0.0};
  for (int i = 0; i < nn; ++i) {
    const int g = conn[i];
    v.u += p.N[i] * u[g];
    v.a_grad_u += (a[0] * p.grad[i][0] + a[1] * p.grad[i][1]) * u[g];
    v.xi += p.N[i] * xi[g];
  }
  return v;
}

int effective_data_quad(const ProblemSpec& problem, const AssemblyOptions& options) {
  return options.data_quadrature > 0 ? options.data_quadrature : problem.data_quadrature;
}

void check_sizes(const Mesh& mesh, const SolutionField& s) {
  if (s.u.size() != mesh.n_nodes() || s.xi.size() != mesh.n_nodes())
    throw std::invalid_argument("solution field does not match mesh");
}

template <typename PerPoint>
void element_loop(const Mesh& mesh, int points_per_direction, int threads,
                  std::vector<double>& out, PerPoint&& per_point) {
  out.assign(mesh.n_elements(), 0.0);
  const auto ref = ReferenceElement::create(mesh.dim, quadrature_rule(mesh.dim, points_per_direction));
  const int n_chunks = std::max(1, std::min(threads, mesh.n_elements()));
  const int per_chunk = (mesh.n_elements() + n_chunks - 1) / n_chunks;
  auto work = [&](int begin, int end) {
    std::vector<MappedPoint> pts;
    for (int e = begin; e < end; ++e) {
      map_to_physical(mesh, e, ref, pts);
      double sum = 0.0;
      for (const auto& p : pts) sum += per_point(e, p);
      out[e] = sum;
    }
  };
  if (n_chunks == 1) {
    work(0, mesh.n_elements());
  } else {
    std::vector<std::thread> workers;
    for (int c = 0; c < n_chunks; ++c)
      workers.emplace_back(work, c * per_chunk,
                           std::min(mesh.n_elements(), (c + 1) * per_chunk));
    for (auto& w : workers) w.join();
  }
}

double ordered_sum(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

}  // namespace

std::vector<double> residual_at_qp(const Mesh& mesh, const ProblemSpec& problem,
                                   const SolutionField& solution, int element,
                                   int points_per_direction) {
  check_sizes(mesh, solution);
  const auto ref = ReferenceElement::create(mesh.dim, quadrature_rule(mesh.dim, points_per_direction));
  std::vector<MappedPoint> pts;
  map_to_physical(mesh, element, ref, pts);
  const auto& conn = mesh.elements[element];
  const double s = problem.coeff.s;
  const bool dual = solution.kind == EquationKind::Dual;
  std::vector<double> residual(pts.size());
  for (size_t qp = 0; qp < pts.size(); ++qp) {
    const auto& p = pts[qp];
    auto a = problem.coeff.a(p.x, p.y);
    if (dual) {
      a[0] = -a[0];
      a[1] = -a[1];
    }
    const auto v = interp(p, a, solution.u, solution.xi, conn, mesh.nodes_per_element);
    const double data = dual ? problem.qoi.q(p.x, p.y) : problem.coeff.f(p.x, p.y);
    residual[qp] = data - (v.a_grad_u + s * v.u);
  }
  return residual;
}

std::vector<double> orthogonal_residual_at_qp(const Mesh& mesh, const ProblemSpec& problem,
                                              const SolutionField& solution, int element,
                                              int points_per_direction) {
  check_sizes(mesh, solution);
  auto residual = residual_at_qp(mesh, problem, solution, element, points_per_direction);
  const auto ref = ReferenceElement::create(mesh.dim, quadrature_rule(mesh.dim, points_per_direction));
  std::vector<MappedPoint> pts;
  map_to_physical(mesh, element, ref, pts);
  const auto& conn = mesh.elements[element];
  for (size_t qp = 0; qp < pts.size(); ++qp) {
    double xi = 0.0;
    for (int i = 0; i < mesh.nodes_per_element; ++i) xi += pts[qp].N[i] * solution.xi[conn[i]];
    residual[qp] -= xi;
  }
  return residual;
}

double qoi_value(const Mesh& mesh, const ProblemSpec& problem, const Eigen::VectorXd& u,
                 int points_per_direction) {
  if (u.size() != mesh.n_nodes()) throw std::invalid_argument("qoi: field does not match mesh");
  std::vector<double> per_element;
  element_loop(mesh, points_per_direction, 1, per_element, [&](int e, const MappedPoint& p) {
    double uh = 0.0;
    for (int i = 0; i < mesh.nodes_per_element; ++i) uh += p.N[i] * u[mesh.elements[e][i]];
    return p.weight * problem.qoi.q(p.x, p.y) * uh;
  });
  return ordered_sum(per_element);
}

EstimatorField eta1_field(const Mesh& mesh, const ProblemSpec& problem,
                          const SolutionField& primal, const StabilizationConstants& constants,
                          const AssemblyOptions& options) {
  check_sizes(mesh, primal);
  if (primal.kind != EquationKind::Primal)
    throw std::invalid_argument("eta1 needs the primal solution");
  const auto tau = element_tau(mesh, problem, constants, options);
  const double s = problem.coeff.s;
  EstimatorField field;
  element_loop(mesh, effective_data_quad(problem, options), options.threads,
               field.per_element, [&](int e, const MappedPoint& p) {
                 const auto a = problem.coeff.a(p.x, p.y);
                 const auto v =
                     interp(p, a, primal.u, primal.xi, mesh.elements[e], mesh.nodes_per_element);
                 const double residual = problem.coeff.f(p.x, p.y) - (v.a_grad_u + s * v.u);
                 return p.weight * problem.qoi.q(p.x, p.y) * tau[e] * (residual - v.xi);
               });
  field.total = ordered_sum(field.per_element);
  return field;
}

EstimatorField eta2_field(const Mesh& mesh, const ProblemSpec& problem,
                          const SolutionField& primal, const SolutionField& dual,
                          const StabilizationConstants& constants,
                          const AssemblyOptions& options) {
  check_sizes(mesh, primal);
  check_sizes(mesh, dual);
  if (primal.kind != EquationKind::Primal || dual.kind != EquationKind::Dual)
    throw std::invalid_argument("eta2 needs a primal and a dual solution");
  const auto tau = element_tau(mesh, problem, constants, options);
  const double s = problem.coeff.s;
  EstimatorField field;
  element_loop(
      mesh, effective_data_quad(problem, options), options.threads, field.per_element,
      [&](int e, const MappedPoint& p) {
        const auto a = problem.coeff.a(p.x, p.y);
        const std::array<double, 2> a_rev{-a[0], -a[1]};
        const auto& conn = mesh.elements[e];
        const auto vp = interp(p, a, primal.u, primal.xi, conn, mesh.nodes_per_element);
        const auto vd = interp(p, a_rev, dual.u, dual.xi, conn, mesh.nodes_per_element);
        const double r_primal = problem.coeff.f(p.x, p.y) - (vp.a_grad_u + s * vp.u);
        const double adjoint_z = vd.a_grad_u + s * vd.u;  // -a.grad z + s z
        const double r_dual = problem.qoi.q(p.x, p.y) - adjoint_z;
        const double w_primal = r_primal - vp.xi;
        const double w_dual = r_dual - vd.xi;
        return p.weight * (tau[e] * w_dual * r_primal + adjoint_z * tau[e] * w_primal);
      });
  field.total = ordered_sum(field.per_element);
  return field;
}

double effectivity(double reference_qoi, double qoi_uh, double eta) {
  const double err = std::abs(reference_qoi - qoi_uh);
  if (eta == 0.0)
    return err == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return err / std::abs(eta);
}

EstimatorReport make_report(const Mesh& mesh, const ProblemSpec& problem,
                            const SolutionField& primal, const SolutionField& dual,
                            const StabilizationConstants& constants,
                            const AssemblyOptions& options, double reference_qoi,
                            const std::string& reference_provenance) {
  EstimatorReport report;
  auto e1 = eta1_field(mesh, problem, primal, constants, options);
  auto e2 = eta2_field(mesh, problem, primal, dual, constants, options);
  report.eta1_K = std::move(e1.per_element);
  report.eta2_K = std::move(e2.per_element);
  report.tau_K = element_tau(mesh, problem, constants, options);
  report.eta1 = e1.total;
  report.eta2 = e2.total;
  report.qoi_uh = qoi_value(mesh, problem, primal.u, effective_data_quad(problem, options));
  report.reference_qoi = reference_qoi;
  report.reference_provenance = reference_provenance;
  report.ieff1 = effectivity(reference_qoi, report.qoi_uh, report.eta1);
  report.ieff2 = effectivity(reference_qoi, report.qoi_uh, report.eta2);
  report.ieff1_degenerate = std::isinf(report.ieff1);
  report.ieff2_degenerate = std::isinf(report.ieff2);
  const double err = reference_qoi - report.qoi_uh;
  report.eta1_sign_disagrees = err * report.eta1 < 0.0;
  report.eta2_sign_disagrees = err * report.eta2 < 0.0;
  return report;
}

}  // namespace osgs
