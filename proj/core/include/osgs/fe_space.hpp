#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "osgs/mesh.hpp"

namespace osgs {

/// Tensor-product Gauss-Legendre rule on [-1,1]^dim, 1..5 points per
/// direction (exact for per-direction degree <= 2*points-1).
struct QuadratureRule {
  int dim = 1;
  int points_per_direction = 2;
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

QuadratureRule quadrature_rule(int dim, int points_per_direction);

/// Shape functions and reference gradients of the degree-1 element (P1
/// interval / Q1 quad), tabulated at the points of one quadrature rule.
struct ReferenceElement {
  int dim = 1;
  int nnodes = 2;
  QuadratureRule rule;
  std::vector<std::array<double, 4>> N;                         // [qp][node]
  std::vector<std::array<std::array<double, 2>, 4>> dN;         // [qp][node][axis]

  static ReferenceElement create(int dim, const QuadratureRule& rule);
};

/// Physical-space data of one quadrature point after isoparametric mapping.
struct MappedPoint {
  double x = 0.0, y = 0.0;
  double weight = 0.0;  // rule weight * detJ
  std::array<double, 4> N{};
  std::array<std::array<double, 2>, 4> grad{};  // physical gradients
};

/// Maps the reference rule onto one element. Throws std::runtime_error if
/// detJ <= 0 anywhere (inverted element).
void map_to_physical(const Mesh& mesh, int element, const ReferenceElement& ref,
                     std::vector<MappedPoint>& out);

using BoundaryValue = std::function<double(double, double)>;

/// Per-side Dirichlet data. A side without a value is left unconstrained
/// (natural boundary condition).
struct DirichletSpec {
  std::array<std::optional<BoundaryValue>, kNumBoundarySides> side;
  bool require_all_boundary = true;

  void set(BoundarySide s, double value);
  void set(BoundarySide s, BoundaryValue value);
  bool constrains(BoundarySide s) const { return side[static_cast<int>(s)].has_value(); }
};

/// Node-to-equation map. Constrained nodes carry their prescribed value;
/// free nodes get contiguous 0-based equation indices.
struct DofMap {
  std::vector<int> equation;   // -1 for Dirichlet nodes
  std::vector<double> value;   // prescribed value, 0 for free nodes
  int n_free = 0;

  bool is_free(int node) const { return equation[node] >= 0; }
};

/// Throws std::runtime_error if spec.require_all_boundary and some tagged
/// boundary node has no prescription. When several sides of a corner node
/// prescribe values, the first side in enum order wins.
DofMap build_dofmap(const Mesh& mesh, const DirichletSpec& spec);

}  // namespace osgs
