#include "osgs/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace osgs {

namespace {

constexpr double kBoundaryTol = 1e-12;

bool near(double a, double b) { return std::abs(a - b) <= kBoundaryTol; }

void tag(Mesh& mesh, int node, BoundarySide side) {
  mesh.boundary_mask[node] |= static_cast<std::uint8_t>(1u << static_cast<int>(side));
}

void fill_h(Mesh& mesh) {
  mesh.h_diameter.resize(mesh.n_elements());
  mesh.h_edge.resize(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    mesh.h_diameter[e] = element_diameter(mesh, e);
    mesh.h_edge[e] = element_max_edge(mesh, e);
  }
}

double dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

const char* to_string(BoundarySide side) {
  switch (side) {
    case BoundarySide::Left: return "left";
    case BoundarySide::Right: return "right";
    case BoundarySide::Bottom: return "bottom";
    case BoundarySide::Top: return "top";
    case BoundarySide::Reentrant: return "reentrant";
  }
  return "?";
}

std::optional<BoundarySide> boundary_side_from_string(const std::string& name) {
  for (int i = 0; i < kNumBoundarySides; ++i) {
    auto side = static_cast<BoundarySide>(i);
    if (name == to_string(side)) return side;
  }
  return std::nullopt;
}

Mesh build_interval_mesh(int n) {
  if (n < 2) throw std::invalid_argument("interval mesh needs n >= 2");
  Mesh mesh;
  mesh.dim = 1;
  mesh.nodes_per_element = 2;
  mesh.nodes.reserve(n + 1);
  for (int i = 0; i <= n; ++i) mesh.nodes.push_back({double(i) / double(n), 0.0});
  mesh.elements.reserve(n);
  for (int i = 0; i < n; ++i) mesh.elements.push_back({i, i + 1, -1, -1});
  mesh.boundary_mask.assign(mesh.n_nodes(), 0);
  tag(mesh, 0, BoundarySide::Left);
  tag(mesh, n, BoundarySide::Right);
  fill_h(mesh);
  return mesh;
}

Mesh build_square_mesh(int n) {
  if (n < 2) throw std::invalid_argument("square mesh needs n >= 2");
  Mesh mesh;
  mesh.dim = 2;
  mesh.nodes_per_element = 4;
  mesh.nodes.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.nodes.push_back({double(i) / double(n), double(j) / double(n)});
  mesh.elements.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = j * (n + 1) + i;
      mesh.elements.push_back({a, a + 1, a + n + 2, a + n + 1});
    }
  mesh.boundary_mask.assign(mesh.n_nodes(), 0);
  for (int idx = 0; idx < mesh.n_nodes(); ++idx) {
    const auto [x, y] = mesh.nodes[idx];
    if (near(x, 0.0)) tag(mesh, idx, BoundarySide::Left);
    if (near(x, 1.0)) tag(mesh, idx, BoundarySide::Right);
    if (near(y, 0.0)) tag(mesh, idx, BoundarySide::Bottom);
    if (near(y, 1.0)) tag(mesh, idx, BoundarySide::Top);
  }
  fill_h(mesh);
  return mesh;
}

Mesh build_lshape_mesh(int n) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("L-shape mesh needs even n >= 4 so the cut lies on mesh lines");
  Mesh mesh;
  mesh.dim = 2;
  mesh.nodes_per_element = 4;
  // Row-major over the full grid, nodes strictly inside the removed block
  // dropped and indices compacted.
  std::unordered_map<long long, int> index;
  auto key = [n](int i, int j) { return static_cast<long long>(j) * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double x = double(i) / double(n);
      const double y = double(j) / double(n);
      if (x > 0.5 && y < 0.5) continue;
      index[key(i, j)] = mesh.n_nodes();
      mesh.nodes.push_back({x, y});
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (i >= n / 2 && j < n / 2) continue;
      mesh.elements.push_back({index.at(key(i, j)), index.at(key(i + 1, j)),
                               index.at(key(i + 1, j + 1)), index.at(key(i, j + 1))});
    }
  mesh.boundary_mask.assign(mesh.n_nodes(), 0);
  for (int idx = 0; idx < mesh.n_nodes(); ++idx) {
    const auto [x, y] = mesh.nodes[idx];
    if (near(x, 0.0)) tag(mesh, idx, BoundarySide::Left);
    if (near(x, 1.0)) tag(mesh, idx, BoundarySide::Right);
    if (near(y, 0.0)) tag(mesh, idx, BoundarySide::Bottom);
    if (near(y, 1.0)) tag(mesh, idx, BoundarySide::Top);
    if (near(x, 0.5) && y <= 0.5 + kBoundaryTol) tag(mesh, idx, BoundarySide::Reentrant);
    if (near(y, 0.5) && x >= 0.5 - kBoundaryTol) tag(mesh, idx, BoundarySide::Reentrant);
  }
  fill_h(mesh);
  return mesh;
}

double element_diameter(const Mesh& mesh, int element) {
  const auto& conn = mesh.elements[element];
  double d = 0.0;
  for (int i = 0; i < mesh.nodes_per_element; ++i)
    for (int j = i + 1; j < mesh.nodes_per_element; ++j)
      d = std::max(d, dist(mesh.nodes[conn[i]], mesh.nodes[conn[j]]));
  if (!(d > 0.0)) throw std::runtime_error("degenerate element: zero diameter");
  return d;
}

double element_max_edge(const Mesh& mesh, int element) {
  const auto& conn = mesh.elements[element];
  if (mesh.dim == 1) return element_diameter(mesh, element);
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    d = std::max(d, dist(mesh.nodes[conn[i]], mesh.nodes[conn[(i + 1) % 4]]));
  if (!(d > 0.0)) throw std::runtime_error("degenerate element: zero edge");
  return d;
}

}  // namespace osgs
