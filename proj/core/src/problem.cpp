#include "osgs/problem.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "osgs/expression.hpp"

namespace osgs {

namespace {

// Boundary-layer profile of the strong-layer benchmark and its
// derivatives: g(t) = t - (1 - e^{100 t}) / (1 - e^{100}), evaluated in the
// overflow-free form E = e^{100(t-1)}, eps = e^{-100}.
double layer_g(double t) {
  const double E = std::exp(100.0 * (t - 1.0));
  const double eps = std::exp(-100.0);
  return t - (eps - E) / (eps - 1.0);
}
double layer_dg(double t) {
  const double E = std::exp(100.0 * (t - 1.0));
  const double eps = std::exp(-100.0);
  return 1.0 + 100.0 * E / (eps - 1.0);
}
double layer_d2g(double t) {
  const double E = std::exp(100.0 * (t - 1.0));
  const double eps = std::exp(-100.0);
  return 1.0e4 * E / (eps - 1.0);
}

ProblemSpec make_ex1() {
  ProblemSpec p;
  p.name = "ex1";
  p.domain = DomainKind::Interval;
  p.coeff.k = 1.0;
  p.coeff.s = 0.1;
  p.coeff.a = [](double, double) { return std::array<double, 2>{1000.0, 0.0}; };
  p.coeff.f = [](double, double) { return 0.0; };
  p.qoi.q = [](double, double) { return 1.0; };
  p.qoi.description = "integral of u over the domain";
  p.dirichlet.set(BoundarySide::Left, 1.0);
  p.dirichlet.set(BoundarySide::Right, 0.0);
  // Exact solution of -k u'' + a u' + s u = 0 with u(0)=1, u(1)=0. The
  // root pair is written in cancellation-free form.
  const double k = p.coeff.k, s = p.coeff.s, a = 1000.0;
  const double disc = std::sqrt(a * a + 4.0 * k * s);
  const double rp = (a + disc) / (2.0 * k);
  const double rm = -2.0 * s / (a + disc);
  p.reference.exact = [rp, rm](double x, double) {
    return (std::exp(rm * x) - std::exp(rm + rp * (x - 1.0))) / (1.0 - std::exp(rm - rp));
  };
  p.default_sizes = {20, 40, 80, 160, 320, 640};
  return p;
}

ProblemSpec make_ex2() {
  ProblemSpec p;
  p.name = "ex2";
  p.domain = DomainKind::Square;
  p.coeff.k = 0.05;
  p.coeff.s = 0.0;
  p.coeff.a = [](double, double y) { return std::array<double, 2>{20.0 * y * (1.0 - y), 0.0}; };
  p.coeff.f = [](double, double) { return 0.0; };
  p.qoi.q = [](double x, double) { return std::cos(M_PI * x / 5.0); };
  p.qoi.description = "cos(pi x / 5) weighted integral";
  // Inflow/outflow Dirichlet only; the channel walls y=0 and y=1 are left
  // unconstrained (the advection field is tangential there).
  p.dirichlet.set(BoundarySide::Left, 0.0);
  p.dirichlet.set(BoundarySide::Right, 1.0);
  p.dirichlet.require_all_boundary = false;
  p.reference.fine_mesh_n = 640;
  p.default_sizes = {10, 20, 40, 80, 160};
  return p;
}

ProblemSpec make_ex3() {
  ProblemSpec p;
  p.name = "ex3";
  p.domain = DomainKind::Square;
  p.coeff.k = 0.01;
  p.coeff.s = 1e-4;
  p.coeff.a = [](double, double) { return std::array<double, 2>{1.0, 1.0}; };
  const double k = p.coeff.k, s = p.coeff.s;
  // Forcing obtained by applying the differential operator to the exact
  // product solution g(x) g(y).
  p.coeff.f = [k, s](double x, double y) {
    const double gx = layer_g(x), gy = layer_g(y);
    return -k * (layer_d2g(x) * gy + gx * layer_d2g(y)) + layer_dg(x) * gy + gx * layer_dg(y) +
           s * gx * gy;
  };
  p.qoi.q = [](double x, double y) { return (x >= 0.75 && y >= 0.75) ? 1.0 : 0.0; };
  p.qoi.description = "integral of u over the subdomain (0.75,1)^2";
  for (auto side : {BoundarySide::Left, BoundarySide::Right, BoundarySide::Bottom,
                    BoundarySide::Top})
    p.dirichlet.set(side, 0.0);
  p.reference.exact = [](double x, double y) { return layer_g(x) * layer_g(y); };
  p.data_quadrature = 4;  // steep exponential forcing
  p.mesh_divisor = 4;     // keeps the q subdomain boundary on mesh lines
  p.default_sizes = {20, 40, 80, 160};
  return p;
}

ProblemSpec make_ex4() {
  ProblemSpec p;
  p.name = "ex4";
  p.domain = DomainKind::LShape;
  p.coeff.k = 0.001;
  p.coeff.s = 0.0;
  p.coeff.a = [](double, double) { return std::array<double, 2>{1.0, 1.0}; };
  p.coeff.f = [](double, double) { return 1.0; };
  p.qoi.q = [](double, double) { return 1.0; };
  p.qoi.description = "integral of u over the L-shaped domain";
  for (auto side : {BoundarySide::Left, BoundarySide::Right, BoundarySide::Bottom,
                    BoundarySide::Top, BoundarySide::Reentrant})
    p.dirichlet.set(side, 0.0);
  p.reference.fine_mesh_n = 512;
  p.mesh_divisor = 2;
  p.default_sizes = {16, 32, 64, 128};
  return p;
}

}  // namespace

ProblemSpec builtin_example(const std::string& id) {
  if (id == "ex1") return make_ex1();
  if (id == "ex2") return make_ex2();
  if (id == "ex3") return make_ex3();
  if (id == "ex4") return make_ex4();
  throw std::invalid_argument("unknown example '" + id + "'");
}

std::vector<std::string> builtin_example_ids() { return {"ex1", "ex2", "ex3", "ex4"}; }

double eval_tau(double k, double a_norm, double s, double h,
                const StabilizationConstants& c) {
  if (!(h > 0.0)) throw std::invalid_argument("tau: element size must be positive");
  const double denom = c.c1 * k / (h * h) + c.c2 * a_norm / h + c.c3 * s;
  if (!(denom > 0.0))
    throw std::invalid_argument("tau: all coefficient terms vanish");
  return 1.0 / denom;
}

namespace {

// Composite Gauss quadrature of q*u over one axis-aligned cell.
double cell_integral(const ProblemSpec& p, const QuadratureRule& rule, double x0, double y0,
                     double hx, double hy, bool two_d) {
  double sum = 0.0;
  for (int qp = 0; qp < rule.size(); ++qp) {
    const double px = x0 + 0.5 * hx * (1.0 + rule.points[qp][0]);
    const double py = two_d ? y0 + 0.5 * hy * (1.0 + rule.points[qp][1]) : 0.0;
    const double scale = two_d ? 0.25 * hx * hy : 0.5 * hx;
    sum += scale * rule.weights[qp] * p.qoi.q(px, py) * p.reference.exact(px, py);
  }
  return sum;
}

}  // namespace

double eval_exact_qoi(const ProblemSpec& problem, int points_per_direction) {
  if (!problem.reference.has_exact())
    throw std::runtime_error("exact QoI unsupported: no analytic solution for '" +
                             problem.name + "'");
  if (problem.domain == DomainKind::Interval) {
    const auto rule = quadrature_rule(1, points_per_direction);
    const int cells = 20000;
    const double h = 1.0 / cells;
    double sum = 0.0;
    for (int i = 0; i < cells; ++i) sum += cell_integral(problem, rule, i * h, 0.0, h, h, false);
    return sum;
  }
  const auto rule = quadrature_rule(2, points_per_direction);
  const int cells = 1024;
  const double h = 1.0 / cells;
  double sum = 0.0;
  for (int j = 0; j < cells; ++j)
    for (int i = 0; i < cells; ++i) {
      const double x0 = i * h, y0 = j * h;
      if (problem.domain == DomainKind::LShape && x0 + 0.5 * h > 0.5 && y0 + 0.5 * h < 0.5)
        continue;
      sum += cell_integral(problem, rule, x0, y0, h, h, true);
    }
  return sum;
}

Mesh build_mesh(const ProblemSpec& problem, int n) {
  if (problem.mesh_divisor > 1 && n % problem.mesh_divisor != 0)
    throw std::invalid_argument("mesh size " + std::to_string(n) + " for '" + problem.name +
                                "' must be a multiple of " +
                                std::to_string(problem.mesh_divisor));
  switch (problem.domain) {
    case DomainKind::Interval: return build_interval_mesh(n);
    case DomainKind::Square: return build_square_mesh(n);
    case DomainKind::LShape: return build_lshape_mesh(n);
  }
  throw std::logic_error("unreachable domain kind");
}

namespace {

ScalarField scalar_from_json(const nlohmann::json& value, const std::string& field) {
  if (value.is_number()) {
    const double v = value.get<double>();
    return [v](double, double) { return v; };
  }
  if (value.is_string()) {
    Expression e = Expression::parse(value.get<std::string>());
    return [e](double x, double y) { return e(x, y); };
  }
  throw std::runtime_error("problem file: field '" + field + "' must be a number or expression");
}

}  // namespace

ProblemSpec load_problem_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open problem file " + file.string());
  nlohmann::json j;
  in >> j;

  ProblemSpec p;
  p.name = file.stem().string();
  const std::string domain = j.at("domain").get<std::string>();
  if (domain == "interval")
    p.domain = DomainKind::Interval;
  else if (domain == "square")
    p.domain = DomainKind::Square;
  else if (domain == "lshape")
    p.domain = DomainKind::LShape;
  else
    throw std::runtime_error("problem file: unknown domain '" + domain + "'");

  p.coeff.k = j.at("k").get<double>();
  p.coeff.s = j.value("s", 0.0);
  if (!(p.coeff.k > 0.0)) throw std::runtime_error("problem file: k must be positive");
  if (p.coeff.s < 0.0) throw std::runtime_error("problem file: s must be non-negative");

  const auto& aj = j.at("a");
  if (aj.is_array()) {
    ScalarField ax = scalar_from_json(aj.at(0), "a[0]");
    ScalarField ay = (aj.size() > 1) ? scalar_from_json(aj.at(1), "a[1]")
                                     : ScalarField([](double, double) { return 0.0; });
    p.coeff.a = [ax, ay](double x, double y) {
      return std::array<double, 2>{ax(x, y), ay(x, y)};
    };
  } else {
    ScalarField ax = scalar_from_json(aj, "a");
    p.coeff.a = [ax](double x, double y) { return std::array<double, 2>{ax(x, y), 0.0}; };
  }
  p.coeff.f = scalar_from_json(j.at("f"), "f");
  p.qoi.q = scalar_from_json(j.at("q"), "q");
  p.qoi.description = "user-defined";

  p.dirichlet.require_all_boundary = false;
  if (j.contains("dirichlet")) {
    for (const auto& [key, value] : j.at("dirichlet").items()) {
      const auto side = boundary_side_from_string(key);
      if (!side) throw std::runtime_error("problem file: unknown boundary side '" + key + "'");
      p.dirichlet.set(*side, value.get<double>());
    }
  }
  if (j.contains("n")) p.default_n = j.at("n").get<int>();
  if (j.contains("reference_n")) p.reference.fine_mesh_n = j.at("reference_n").get<int>();
  if (j.contains("data_quadrature")) p.data_quadrature = j.at("data_quadrature").get<int>();
  return p;
}

}  // namespace osgs
