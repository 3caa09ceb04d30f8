#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace osgs {

enum class BoundarySide : std::uint8_t { Left = 0, Right, Bottom, Top, Reentrant };
inline constexpr int kNumBoundarySides = 5;

const char* to_string(BoundarySide side);
std::optional<BoundarySide> boundary_side_from_string(const std::string& name);

/// Structured degree-1 mesh: 2-node intervals in 1D, 4-node quads
/// (counter-clockwise) in 2D. Immutable after construction.
struct Mesh {
  int dim = 1;
  int nodes_per_element = 2;
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 4>> elements;
  std::vector<std::uint8_t> boundary_mask;  // bit per BoundarySide
  std::vector<double> h_diameter;           // max pairwise vertex distance
  std::vector<double> h_edge;               // max edge length

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  bool on_boundary(int node) const { return boundary_mask[node] != 0; }
  bool on_side(int node, BoundarySide side) const {
    return (boundary_mask[node] >> static_cast<int>(side)) & 1u;
  }
};

// Uniform partition of (0,1) into n elements; boundary nodes 0 and n.
Mesh build_interval_mesh(int n);

// n x n bilinear quads on the unit square, row-major node numbering.
Mesh build_square_mesh(int n);

// Uniform quads on (0,1)^2 minus [0.5,1]x[0,0.5]; n even so the cut lies on
// mesh lines. Element count 0.75*n^2. Node numbering is row-major over the
// full grid with the masked nodes removed and indices compacted.
Mesh build_lshape_mesh(int n);

// 1D: element length. 2D: max pairwise vertex distance (quad diagonal).
double element_diameter(const Mesh& mesh, int element);

// Longest element edge; equals the side length for axis-aligned squares.
double element_max_edge(const Mesh& mesh, int element);

}  // namespace osgs
