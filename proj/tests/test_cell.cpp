#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "softtiler/cell.hpp"
#include "softtiler/export.hpp"
#include "softtiler/group.hpp"

using namespace softtiler;

namespace {
const double kSqrt2 = std::sqrt(2.0);
const double kH = 1.0 / kSqrt2;
}  // namespace

TEST_CASE("builtin cell reproduces the tabulated vertices") {
  const FirstOrderCell cell = builtin_e2();
  REQUIRE(cell.node_count() == 24);
  CHECK(near(cell.node(5), {-0.5, -0.5, kH}, 1e-15));
  CHECK(near(cell.node(21), {0, 0, 4 * kH}, 1e-15));
  CHECK(near(cell.node(12), {2, 0, 2 * kH}, 1e-15));
  CHECK(near(cell.center(), {0.5, 0.5, kSqrt2}, 1e-12));
}

TEST_CASE("hull reconstruction yields the truncated-octahedron combinatorics") {
  const FirstOrderCell cell = builtin_e2();
  int quads = 0, hexes = 0;
  for (const auto& f : cell.faces)
    (f.kind == FaceKind::quad ? quads : hexes) += 1;
  CHECK(quads == 6);
  CHECK(hexes == 8);
  CHECK(cell.edges.size() == 36);

  CHECK(cell.has_face_cycle({1, 2, 3, 4}));
  CHECK(cell.has_face_cycle({1, 4, 8, 16, 9, 5}));
  // The first hexagon is named by its vertex set; the geometric cycle visits
  // 11 before 10.
  CHECK(cell.has_face_with_vertices({1, 2, 6, 10, 11, 5}));
  CHECK(cell.has_face_cycle({1, 2, 6, 11, 10, 5}));
}

TEST_CASE("edges have unit length and faces are planar") {
  const FirstOrderCell cell = builtin_e2();
  for (const auto& [a, b] : cell.edges)
    CHECK(std::abs(distance(cell.node(a), cell.node(b)) - 1.0) < 1e-12);
  for (const auto& f : cell.faces) {
    const Point3& p0 = cell.node(f.cycle[0]);
    const Vec3 n = normalized(cross(cell.node(f.cycle[1]) - p0,
                                    cell.node(f.cycle[2]) - p0));
    for (int idx : f.cycle)
      CHECK(std::abs(dot(n, cell.node(idx) - p0)) < 1e-12);
  }
}

TEST_CASE("all vertex figures are congruent") {
  const FirstOrderCell cell = builtin_e2();
  std::vector<double> reference;
  for (int n = 1; n <= cell.node_count(); ++n) {
    const auto nbrs = cell.neighbors(n);
    REQUIRE(nbrs.size() == 3);
    std::vector<double> angles;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) {
        const Vec3 u = normalized(cell.node(nbrs[i]) - cell.node(n));
        const Vec3 v = normalized(cell.node(nbrs[j]) - cell.node(n));
        angles.push_back(dot(u, v));
      }
    std::sort(angles.begin(), angles.end());
    if (n == 1) {
      reference = angles;
    } else {
      for (std::size_t k = 0; k < angles.size(); ++k)
        CHECK(std::abs(angles[k] - reference[k]) < 1e-9);
    }
  }
}

TEST_CASE("reference nodal structure matches the polyhedral directions") {
  const FirstOrderCell cell = builtin_e2();
  const NodalStructure ns = reference_nodal_structure(cell);
  CHECK(ns.edge_count == 4);
  CHECK(ns.cell_count == 4);
  CHECK(near(ns.directions[0], {1, 0, 0}, 1e-12));
  CHECK(near(ns.directions[1], {0, 1, 0}, 1e-12));
  CHECK(near(ns.directions[2], {-0.5, -0.5, kH}, 1e-12));
  CHECK(near(ns.directions[3], {-0.5, -0.5, -kH}, 1e-12));
  // The fourth direction coincides with the image of a0 under the octahedral
  // d-transform.
  CHECK(near(ns.directions[3], transform_d1()(ns.directions[0]), 1e-12));

  const std::set<std::set<int>> want{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
  std::set<std::set<int>> have;
  for (const auto& vs : ns.vertex_sets)
    have.insert(std::set<int>(vs.begin(), vs.end()));
  CHECK(have == want);

  // The polyhedral cell itself is not soft.
  CHECK(std::abs(dot(ns.directions[0].vec(), ns.directions[1].vec())) < 1e-12);
  CHECK(std::abs(dot(ns.directions[0].vec(), ns.directions[2].vec()) + 0.5) <
        1e-12);
  CHECK(std::abs(dot(ns.directions[2].vec(), ns.directions[3].vec())) < 1e-12);
}

TEST_CASE("lattice translations map the cell onto face neighbors") {
  const FirstOrderCell cell = builtin_e2();
  const Lattice lat = bcc_lattice();
  REQUIRE(lat.face_translations.size() == 14);

  const auto contains = [&](const Vec3& t) {
    for (const auto& cand : lat.face_translations)
      if (near(cand, t, 1e-9)) return true;
    return false;
  };
  CHECK(contains({0, 0, -2 * kSqrt2}));
  CHECK(contains({0, -2, -kSqrt2}));

  CHECK(std::abs(dot(lat.basis[0], cross(lat.basis[1], lat.basis[2]))) > 1e-9);

  // Shared-face oracle: the translated vertex set intersects the original in
  // exactly the vertex set of one face.
  for (const auto& t : lat.face_translations) {
    std::vector<int> shared;
    for (int n = 1; n <= cell.node_count(); ++n) {
      const Point3 moved = cell.node(n) + t;
      for (int m = 1; m <= cell.node_count(); ++m)
        if (near(moved, cell.node(m), 1e-9)) shared.push_back(m);
    }
    std::sort(shared.begin(), shared.end());
    CHECK((shared.size() == 4 || shared.size() == 6));
    CHECK(cell.has_face_with_vertices(shared));
  }
}

TEST_CASE("cell serializes to the documented JSON layout") {
  const std::string json = cell_to_json(builtin_e2());
  CHECK(json.find("\"nodes\"") != std::string::npos);
  CHECK(json.find("\"kind\": \"quad\", \"cycle\": [1, 2, 3, 4]") !=
        std::string::npos);
  CHECK(std::count(json.begin(), json.end(), '{') == 15);  // 14 faces + root
}
