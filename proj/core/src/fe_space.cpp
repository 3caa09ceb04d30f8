#include "osgs/fe_space.hpp"

#include <cmath>
#include <stdexcept>

namespace osgs {

namespace {

// Gauss-Legendre abscissae/weights on [-1,1], n = 1..5.
struct Gauss1D {
  int n;
  double x[5];
  double w[5];
};

constexpr Gauss1D kGauss[5] = {
    {1, {0.0}, {2.0}},
    {2, {-0.57735026918962576, 0.57735026918962576}, {1.0, 1.0}},
    {3,
     {-0.77459666924148338, 0.0, 0.77459666924148338},
     {0.55555555555555556, 0.88888888888888889, 0.55555555555555556}},
    {4,
     {-0.86113631159405258, -0.33998104358485626, 0.33998104358485626, 0.86113631159405258},
     {0.34785484513745386, 0.65214515486254614, 0.65214515486254614, 0.34785484513745386}},
    {5,
     {-0.90617984593866399, -0.53846931010568309, 0.0, 0.53846931010568309,
      0.90617984593866399},
     {0.23692688505618909, 0.47862867049936647, 0.56888888888888889, 0.47862867049936647,
      0.23692688505618909}},
};

}  // namespace

QuadratureRule quadrature_rule(int dim, int points_per_direction) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("quadrature: dim must be 1 or 2");
  if (points_per_direction < 1 || points_per_direction > 5)
    throw std::invalid_argument("quadrature: points per direction must be in 1..5");
  const Gauss1D& g = kGauss[points_per_direction - 1];
  QuadratureRule rule;
  rule.dim = dim;
  rule.points_per_direction = points_per_direction;
  if (dim == 1) {
    for (int i = 0; i < g.n; ++i) {
      rule.points.push_back({g.x[i], 0.0});
      rule.weights.push_back(g.w[i]);
    }
  } else {
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) {
        rule.points.push_back({g.x[i], g.x[j]});
        rule.weights.push_back(g.w[i] * g.w[j]);
      }
  }
  return rule;
}

ReferenceElement ReferenceElement::create(int dim, const QuadratureRule& rule) {
  ReferenceElement ref;
  ref.dim = dim;
  ref.nnodes = (dim == 1) ? 2 : 4;
  ref.rule = rule;
  ref.N.resize(rule.size());
  ref.dN.resize(rule.size());
  for (int qp = 0; qp < rule.size(); ++qp) {
    const double xi = rule.points[qp][0];
    const double eta = rule.points[qp][1];
    auto& N = ref.N[qp];
    auto& dN = ref.dN[qp];
    if (dim == 1) {
      N[0] = 0.5 * (1.0 - xi);
      N[1] = 0.5 * (1.0 + xi);
      dN[0] = {-0.5, 0.0};
      dN[1] = {0.5, 0.0};
    } else {
      N[0] = 0.25 * (1.0 - xi) * (1.0 - eta);
      N[1] = 0.25 * (1.0 + xi) * (1.0 - eta);
      N[2] = 0.25 * (1.0 + xi) * (1.0 + eta);
      N[3] = 0.25 * (1.0 - xi) * (1.0 + eta);
      dN[0] = {-0.25 * (1.0 - eta), -0.25 * (1.0 - xi)};
      dN[1] = {0.25 * (1.0 - eta), -0.25 * (1.0 + xi)};
      dN[2] = {0.25 * (1.0 + eta), 0.25 * (1.0 + xi)};
      dN[3] = {-0.25 * (1.0 + eta), 0.25 * (1.0 - xi)};
    }
  }
  return ref;
}

void map_to_physical(const Mesh& mesh, int element, const ReferenceElement& ref,
                     std::vector<MappedPoint>& out) {
  const auto& conn = mesh.elements[element];
  out.resize(ref.rule.size());
  if (mesh.dim == 1) {
    const double x0 = mesh.nodes[conn[0]][0];
    const double x1 = mesh.nodes[conn[1]][0];
    const double detJ = 0.5 * (x1 - x0);
    if (!(detJ > 0.0)) throw std::runtime_error("inverted element (1D): detJ <= 0");
    for (int qp = 0; qp < ref.rule.size(); ++qp) {
      MappedPoint& p = out[qp];
      p.N = ref.N[qp];
      p.x = ref.N[qp][0] * x0 + ref.N[qp][1] * x1;
      p.y = 0.0;
      p.weight = ref.rule.weights[qp] * detJ;
      p.grad[0] = {ref.dN[qp][0][0] / detJ, 0.0};
      p.grad[1] = {ref.dN[qp][1][0] / detJ, 0.0};
    }
    return;
  }
  for (int qp = 0; qp < ref.rule.size(); ++qp) {
    MappedPoint& p = out[qp];
    p.N = ref.N[qp];
    // J[r][c] = d x_c / d xihat_r
    double J00 = 0.0, J01 = 0.0, J10 = 0.0, J11 = 0.0;
    p.x = p.y = 0.0;
    for (int i = 0; i < 4; ++i) {
      const auto& xy = mesh.nodes[conn[i]];
      J00 += ref.dN[qp][i][0] * xy[0];
      J01 += ref.dN[qp][i][0] * xy[1];
      J10 += ref.dN[qp][i][1] * xy[0];
      J11 += ref.dN[qp][i][1] * xy[1];
      p.x += ref.N[qp][i] * xy[0];
      p.y += ref.N[qp][i] * xy[1];
    }
    const double detJ = J00 * J11 - J01 * J10;
    if (!(detJ > 0.0)) throw std::runtime_error("inverted element: detJ <= 0");
    p.weight = ref.rule.weights[qp] * detJ;
    // dxihat/dx = inv(J)^T applied to reference gradients
    const double i00 = J11 / detJ, i01 = -J01 / detJ;
    const double i10 = -J10 / detJ, i11 = J00 / detJ;
    for (int i = 0; i < 4; ++i) {
      const double gx = ref.dN[qp][i][0] * i00 + ref.dN[qp][i][1] * i01;
      const double gy = ref.dN[qp][i][0] * i10 + ref.dN[qp][i][1] * i11;
      p.grad[i] = {gx, gy};
    }
  }
}

void DirichletSpec::set(BoundarySide s, double value) {
  side[static_cast<int>(s)] = [value](double, double) { return value; };
}

void DirichletSpec::set(BoundarySide s, BoundaryValue value) {
  side[static_cast<int>(s)] = std::move(value);
}

DofMap build_dofmap(const Mesh& mesh, const DirichletSpec& spec) {
  DofMap map;
  map.equation.assign(mesh.n_nodes(), -1);
  map.value.assign(mesh.n_nodes(), 0.0);
  for (int node = 0; node < mesh.n_nodes(); ++node) {
    if (!mesh.on_boundary(node)) continue;
    bool prescribed = false;
    for (int s = 0; s < kNumBoundarySides && !prescribed; ++s) {
      if (!mesh.on_side(node, static_cast<BoundarySide>(s))) continue;
      if (spec.side[s]) {
        map.value[node] = (*spec.side[s])(mesh.nodes[node][0], mesh.nodes[node][1]);
        prescribed = true;
      }
    }
    if (prescribed) {
      map.equation[node] = -2;  // provisional Dirichlet marker
    } else if (spec.require_all_boundary) {
      throw std::runtime_error("boundary node without Dirichlet prescription (node " +
                               std::to_string(node) + ")");
    }
  }
  for (int node = 0; node < mesh.n_nodes(); ++node) {
    if (map.equation[node] == -2)
      map.equation[node] = -1;
    else
      map.equation[node] = map.n_free++;
  }
  return map;
}

}  // namespace osgs
