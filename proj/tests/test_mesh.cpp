#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#include "osgs/fe_space.hpp"
#include "osgs/mesh.hpp"

using namespace osgs;

namespace {

double domain_measure(const Mesh& mesh) {
  const auto ref = ReferenceElement::create(mesh.dim, quadrature_rule(mesh.dim, 2));
  std::vector<MappedPoint> pts;
  double measure = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    map_to_physical(mesh, e, ref, pts);
    for (const auto& p : pts) measure += p.weight;
  }
  return measure;
}

}  // namespace

TEST_CASE("interval mesh: nodes, elements, spacing") {
  const Mesh mesh = build_interval_mesh(4);
  REQUIRE(mesh.n_nodes() == 5);
  REQUIRE(mesh.n_elements() == 4);
  const double expected[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int i = 0; i < 5; ++i) CHECK(mesh.nodes[i][0] == expected[i]);  // exact by construction
  for (int e = 0; e < 4; ++e) CHECK(mesh.h_diameter[e] == doctest::Approx(0.25));
  CHECK(mesh.on_side(0, BoundarySide::Left));
  CHECK(mesh.on_side(4, BoundarySide::Right));
  CHECK_FALSE(mesh.on_boundary(2));
}

TEST_CASE("interval mesh: n=2 connectivity") {
  const Mesh mesh = build_interval_mesh(2);
  CHECK(mesh.elements[0][0] == 0);
  CHECK(mesh.elements[0][1] == 1);
  CHECK(mesh.elements[1][0] == 1);
  CHECK(mesh.elements[1][1] == 2);
}

TEST_CASE("interval mesh: fine run chains consecutively and covers (0,1)") {
  const Mesh mesh = build_interval_mesh(1000);
  REQUIRE(mesh.n_elements() == 1000);
  double covered = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    CHECK(mesh.elements[e][0] == e);
    CHECK(mesh.elements[e][1] == e + 1);
    CHECK(mesh.h_diameter[e] == doctest::Approx(0.001).epsilon(1e-12));
    covered += mesh.nodes[e + 1][0] - mesh.nodes[e][0];
  }
  CHECK(covered == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mesh builders reject bad sizes") {
  CHECK_THROWS_AS(build_interval_mesh(1), std::invalid_argument);
  CHECK_THROWS_AS(build_square_mesh(0), std::invalid_argument);
  CHECK_THROWS_AS(build_lshape_mesh(5), std::invalid_argument);
  CHECK_THROWS_AS(build_lshape_mesh(2), std::invalid_argument);
}

TEST_CASE("square mesh: counts and boundary tags") {
  const Mesh coarse = build_square_mesh(2);
  CHECK(coarse.n_nodes() == 9);
  CHECK(coarse.n_elements() == 4);

  const Mesh study = build_square_mesh(20);
  CHECK(study.n_elements() == 400);

  const Mesh reference = build_square_mesh(640);
  CHECK(reference.n_elements() == 409600);
  CHECK(reference.n_nodes() == 641 * 641);

  int corner_tags = 0;
  for (int node = 0; node < coarse.n_nodes(); ++node)
    if (coarse.on_side(node, BoundarySide::Left) && coarse.on_side(node, BoundarySide::Bottom))
      ++corner_tags;
  CHECK(corner_tags == 1);
}

TEST_CASE("square mesh: counter-clockwise connectivity, positive jacobian") {
  const Mesh mesh = build_square_mesh(3);
  const auto ref = ReferenceElement::create(2, quadrature_rule(2, 2));
  std::vector<MappedPoint> pts;
  for (int e = 0; e < mesh.n_elements(); ++e) CHECK_NOTHROW(map_to_physical(mesh, e, ref, pts));
}

TEST_CASE("L-shape mesh: element counts") {
  CHECK(build_lshape_mesh(4).n_elements() == 12);
  CHECK(build_lshape_mesh(64).n_elements() == 3072);
  CHECK(build_lshape_mesh(512).n_elements() == 196608);
}

TEST_CASE("L-shape mesh: re-entrant tagging and masked nodes") {
  const Mesh mesh = build_lshape_mesh(8);
  for (int node = 0; node < mesh.n_nodes(); ++node) {
    const auto [x, y] = mesh.nodes[node];
    CHECK((x <= 0.5 || y >= 0.5));  // no nodes inside the removed block
    if (x == 0.5 && y < 0.5) CHECK(mesh.on_side(node, BoundarySide::Reentrant));
    if (y == 0.5 && x > 0.5) CHECK(mesh.on_side(node, BoundarySide::Reentrant));
    if (x == 0.5 && y > 0.5 && y < 1.0) CHECK_FALSE(mesh.on_boundary(node));  // interior line
    if (y == 0.5 && x > 0.0 && x < 0.5) CHECK_FALSE(mesh.on_boundary(node));
  }
  int reentrant_corner = 0;
  for (int node = 0; node < mesh.n_nodes(); ++node)
    if (mesh.nodes[node][0] == 0.5 && mesh.nodes[node][1] == 0.5 &&
        mesh.on_side(node, BoundarySide::Reentrant))
      ++reentrant_corner;
  CHECK(reentrant_corner == 1);
}

TEST_CASE("boundary nodes sit exactly on the boundary") {
  for (const Mesh& mesh : {build_square_mesh(20), build_lshape_mesh(20)}) {
    for (int node = 0; node < mesh.n_nodes(); ++node) {
      if (!mesh.on_boundary(node)) continue;
      const auto [x, y] = mesh.nodes[node];
      const bool on_outer = x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0;
      const bool on_cut = (x == 0.5 && y <= 0.5) || (y == 0.5 && x >= 0.5);
      CHECK((on_outer || on_cut));
    }
  }
}

TEST_CASE("element diameters") {
  const Mesh line = build_interval_mesh(4);
  CHECK(element_diameter(line, 0) == doctest::Approx(0.25).epsilon(1e-14));

  const Mesh square = build_square_mesh(10);
  CHECK(element_diameter(square, 0) == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-13));
  CHECK(element_max_edge(square, 0) == doctest::Approx(0.1).epsilon(1e-13));

  const Mesh lshape = build_lshape_mesh(4);
  for (int e = 0; e < lshape.n_elements(); ++e)
    CHECK(element_diameter(lshape, e) == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-13));
}

TEST_CASE("sum of element measures equals the domain measure") {
  CHECK(domain_measure(build_interval_mesh(7)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(domain_measure(build_square_mesh(12)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(domain_measure(build_lshape_mesh(12)) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("interior nodes of structured quad meshes touch four elements") {
  const Mesh mesh = build_square_mesh(6);
  std::map<int, int> touch;
  for (const auto& conn : mesh.elements)
    for (int i = 0; i < 4; ++i) ++touch[conn[i]];
  for (int node = 0; node < mesh.n_nodes(); ++node)
    if (!mesh.on_boundary(node)) CHECK(touch[node] == 4);
}

TEST_CASE("mesh construction is deterministic") {
  const Mesh a = build_lshape_mesh(16);
  const Mesh b = build_lshape_mesh(16);
  REQUIRE(a.n_nodes() == b.n_nodes());
  REQUIRE(a.n_elements() == b.n_elements());
  CHECK(a.nodes == b.nodes);
  for (int e = 0; e < a.n_elements(); ++e) CHECK(a.elements[e] == b.elements[e]);
}
