#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "softtiler/eeb.hpp"
#include "softtiler/export.hpp"

using namespace softtiler;

namespace {

const double kH = 1.0 / std::sqrt(2.0);
const Vec3 kF2{kH, kH, 0};
const Vec3 kG2{kH, -kH, 0};
const Vec3 kH2{0.5, -0.5, kH};
const Vec3 kI2{std::sqrt(3.0) / 2.0, std::sqrt(3.0) / 6.0,
               1.0 / std::sqrt(6.0)};

const CellSolution* find_solution(const Catalogue& cat,
                                  const std::string& name) {
  for (const auto& s : cat.solutions)
    if (s.name == name) return &s;
  return nullptr;
}

}  // namespace

TEST_CASE("complete softening systems are the three matchings") {
  const NodalStructure ns = reference_nodal_structure(builtin_e2());
  const auto systems = enumerate_complete_systems(ns);
  REQUIRE(systems.size() == 3);

  using Pairs = std::vector<std::pair<int, int>>;
  std::set<Pairs> have;
  for (const auto& s : systems) {
    have.insert(s.pairs);
    CHECK(detail::covers_all_vertex_sets(s.pairs, ns));
  }
  const std::set<Pairs> want{{{1, 2}, {3, 4}}, {{1, 3}, {2, 4}},
                             {{1, 4}, {2, 3}}};
  CHECK(have == want);

  // A single equation never covers all vertex sets.
  CHECK_FALSE(detail::covers_all_vertex_sets({{1, 2}}, ns));
  CHECK_FALSE(detail::covers_all_vertex_sets({{3, 4}}, ns));
}

TEST_CASE("system solutions per symmetry mode") {
  const NodalTransforms oct = paper_matrices(SymmetryMode::octahedral);
  const NodalTransforms tet = paper_matrices(SymmetryMode::tetrahedral);
  const SofteningSystem abcd{{{1, 2}, {3, 4}}};
  const SofteningSystem acbd{{{1, 3}, {2, 4}}};
  const SofteningSystem adbc{{{1, 4}, {2, 3}}};

  const SolutionSet s1 = solve_system(abcd, oct);
  REQUIRE(s1.kind() == LocusKind::antipodal_pair);
  CHECK(near(s1.point(), kG2, 1e-12));

  const SolutionSet s2 = solve_system(acbd, oct);
  REQUIRE(s2.kind() == LocusKind::antipodal_pair);
  CHECK(near(s2.point(), kF2, 1e-12));

  const SolutionSet s3 = solve_system(adbc, oct);
  REQUIRE(s3.kind() == LocusKind::antipodal_pair);
  CHECK(near(s3.point(), kF2, 1e-12));

  const SolutionSet t1 = solve_system(abcd, tet);
  REQUIRE(t1.kind() == LocusKind::great_circle);
  CHECK(near(t1.normal(), {kH, kH, 0}, 1e-12));

  const SolutionSet t2 = solve_system(acbd, tet);
  REQUIRE(t2.kind() == LocusKind::great_circle);
  CHECK(near(t2.normal(), {0.5, -0.5, kH}, 1e-12));

  const SolutionSet t3 = solve_system(adbc, tet);
  REQUIRE(t3.kind() == LocusKind::great_circle);
  CHECK(near(t3.normal(), canonical_sign({-0.5, 0.5, kH}), 1e-12));
}

TEST_CASE("softness and standardness classifiers") {
  const NodalStructure ns = reference_nodal_structure(builtin_e2());
  const NodalTransforms tet = paper_matrices(SymmetryMode::tetrahedral);
  const NodalTransforms oct = paper_matrices(SymmetryMode::octahedral);

  CHECK(is_soft(tet.nodal_set(kF2), ns.vertex_sets));
  CHECK(is_soft(tet.nodal_set(kG2), ns.vertex_sets));
  CHECK(is_soft(tet.nodal_set(kH2), ns.vertex_sets));
  CHECK(is_soft(tet.nodal_set(kI2), ns.vertex_sets));

  std::array<Vec3, 4> polyhedral;
  for (int i = 0; i < 4; ++i)
    polyhedral[static_cast<std::size_t>(i)] =
        ns.directions[static_cast<std::size_t>(i)];
  CHECK_FALSE(is_soft(polyhedral, ns.vertex_sets));

  const auto kelvin = kelvin_solution();
  CHECK_FALSE(is_soft(kelvin.nodal, ns.vertex_sets));

  CHECK(is_standard(tet.nodal_set(kF2)));
  CHECK(is_standard(tet.nodal_set(kH2)));
  CHECK_FALSE(is_standard(tet.nodal_set(kG2)));
  CHECK_FALSE(is_standard(tet.nodal_set(kI2)));
  CHECK(is_standard(oct.nodal_set(kF2)));
}

TEST_CASE("planar face classification") {
  const auto faces_of = [](const Vec3& a) {
    return classify_planar_faces(UnitVec3(a, 1e-9), SymmetryMode::tetrahedral);
  };
  CHECK(faces_of(kF2) == std::vector<std::string>{"quad"});
  CHECK(faces_of(kG2) == std::vector<std::string>{"quad"});
  CHECK(faces_of(kH2) == std::vector<std::string>{"hex1"});
  CHECK(faces_of(kI2) == std::vector<std::string>{"hex2"});
  CHECK(faces_of({1, 0, 0}) ==
        std::vector<std::string>{"quad", "hex1", "hex2"});
}

TEST_CASE("octahedral catalogue has exactly the two soft classes") {
  const Catalogue cat = run_catalogue(SymmetryMode::octahedral, false, true);
  REQUIRE(cat.solutions.size() == 2);
  REQUIRE(find_solution(cat, "f2") != nullptr);
  REQUIRE(find_solution(cat, "g2") != nullptr);
  CHECK(near(find_solution(cat, "f2")->a, kF2, 1e-9));
  CHECK(near(find_solution(cat, "g2")->a, kG2, 1e-9));
  CHECK(cat.dedup_group_order == 8);
}

TEST_CASE("tetrahedral soft+planar catalogue reproduces the four classes") {
  const Catalogue cat = run_catalogue(SymmetryMode::tetrahedral, true, true);
  REQUIRE(cat.solutions.size() == 4);

  const struct {
    const char* name;
    Vec3 a;
    double phi, theta;
  } rows[] = {
      {"f2", kF2, std::numbers::pi / 2, std::numbers::pi / 4},
      {"g2", kG2, std::numbers::pi / 2, -std::numbers::pi / 4},
      {"h2", kH2, std::numbers::pi / 4, -std::numbers::pi / 4},
      {"i2", kI2, std::acos(1.0 / std::sqrt(6.0)), std::atan(1.0 / 3.0)},
  };
  for (const auto& row : rows) {
    const CellSolution* s = find_solution(cat, row.name);
    REQUIRE(s != nullptr);
    CHECK(near(s->a, row.a, 1e-9));
    CHECK(std::abs(s->euler.phi - row.phi) < 1e-9);
    CHECK(std::abs(s->euler.theta - row.theta) < 1e-9);
    CHECK(s->soft);
  }
  CHECK(find_solution(cat, "f2")->standard);
  CHECK(find_solution(cat, "h2")->standard);
  CHECK_FALSE(find_solution(cat, "g2")->standard);
  CHECK_FALSE(find_solution(cat, "i2")->standard);
}

TEST_CASE("unfiltered tetrahedral catalogue includes the polyhedral cell") {
  const Catalogue cat = run_catalogue(SymmetryMode::tetrahedral, false, false);
  const CellSolution* e2 = find_solution(cat, "e2");
  REQUIRE(e2 != nullptr);
  CHECK(near(e2->a, {1, 0, 0}, 1e-12));
  CHECK_FALSE(e2->soft);
  CHECK(e2->planar_faces.size() == 3);
}

TEST_CASE("dedup keeps f2 and g2 apart and merges mirror copies") {
  const PointGroup dedup = dedup_group();
  const auto f2 = classify_point(UnitVec3(kF2), SymmetryMode::tetrahedral);
  const auto g2 = classify_point(UnitVec3(kG2), SymmetryMode::tetrahedral);
  CHECK_FALSE(equivalent_solutions(f2.nodal, g2.nodal, dedup));

  const Vec3 i2_mirror{std::sqrt(3.0) / 2.0, std::sqrt(3.0) / 6.0,
                       -1.0 / std::sqrt(6.0)};
  const auto i2 = classify_point(UnitVec3(kI2), SymmetryMode::tetrahedral);
  const auto mirrored =
      classify_point(UnitVec3(i2_mirror, 1e-9), SymmetryMode::tetrahedral);
  CHECK(equivalent_solutions(i2.nodal, mirrored.nodal, dedup));

  // Flags are invariant under the dedup action.
  CHECK(mirrored.soft == i2.soft);
  CHECK(mirrored.standard == i2.standard);
}

TEST_CASE("catalogue output is deterministic") {
  const Catalogue a = run_catalogue(SymmetryMode::tetrahedral, true, true);
  const Catalogue b = run_catalogue(SymmetryMode::tetrahedral, true, true);
  CHECK(catalogue_to_json(a) == catalogue_to_json(b));
}

TEST_CASE("kelvin solution matches the closed form") {
  const CellSolution kelvin = kelvin_solution();
  const double t = 2.0 * std::sqrt(2.0) - 3.0;
  const double scale = 1.0 / std::sqrt(1.0 + t * t);
  CHECK(near(kelvin.a, {scale, t * scale, 0}, 1e-10));
  CHECK(std::abs(kelvin.a.z()) < 1e-10);
  CHECK(std::abs(kelvin.euler.theta - std::atan(t)) < 1e-10);
  CHECK(kelvin.planar_faces == std::vector<std::string>{"quad"});
  CHECK_FALSE(kelvin.soft);
  CHECK_FALSE(kelvin.standard);
  for (double p : detail::pairwise_products(kelvin.nodal))
    CHECK(std::abs(p + 1.0 / 3.0) < 1e-10);
}

TEST_CASE("pd solution matches the closed form") {
  const CellSolution pd = pd_solution();
  const double r = std::sqrt(28.0);
  CHECK(near(pd.a, {5.0 / r, -1.0 / r, std::sqrt(2.0) / r}, 1e-12));
  CHECK(std::abs(dot(pd.nodal[0], pd.nodal[1]) + 3.0 / 7.0) < 1e-12);
  CHECK(std::abs(dot(pd.nodal[0], pd.nodal[2]) - 1.0 / 7.0) < 1e-12);
  CHECK(std::abs(dot(pd.nodal[1], pd.nodal[2]) + 5.0 / 7.0) < 1e-12);
  CHECK(std::abs(pd.euler.phi - std::acos(1.0 / std::sqrt(14.0))) < 1e-12);
  CHECK(std::abs(pd.euler.theta - std::atan(-0.2)) < 1e-12);
  CHECK_FALSE(pd.soft);
  bool on_hex1 = false;
  for (const auto& c : pd.member_circles)
    if (c == "hex1") on_hex1 = true;
  CHECK(on_hex1);
}

TEST_CASE("families along the constraint circles") {
  const SolutionSet quad = SolutionSet::great_circle({0, 0, 1});

  SECTION("quad circle: soft exactly at the diagonal parameters") {
    const auto rows = family(quad, 360, SymmetryMode::octahedral);
    REQUIRE(rows.size() == 360);
    std::vector<double> soft_params;
    for (const auto& [t, s] : rows)
      if (s.soft) soft_params.push_back(t);
    REQUIRE(soft_params.size() == 4);
    const double quarter = std::numbers::pi / 4;
    CHECK(soft_params[0] == Catch::Approx(quarter).margin(1e-12));
    CHECK(soft_params[1] == Catch::Approx(3 * quarter).margin(1e-12));
    CHECK(soft_params[2] == Catch::Approx(5 * quarter).margin(1e-12));
    CHECK(soft_params[3] == Catch::Approx(7 * quarter).margin(1e-12));
    for (const auto& [t, s] : rows) {
      if (s.soft)
        CHECK(std::abs(s.min_pair_dot + 1.0) < 1e-9);
    }
  }

  SECTION("quad circle passes through the named cells") {
    const auto rows = family(quad, 360, SymmetryMode::octahedral);
    std::set<std::string> names;
    for (const auto& [t, s] : rows)
      if (!s.name.empty()) names.insert(s.name);
    CHECK(names.count("e2") == 1);
    CHECK(names.count("f2") == 1);
    CHECK(names.count("g2") == 1);
  }

  SECTION("softening circles are entirely soft in tetrahedral mode") {
    for (const char* name : {"abcd", "adbc"}) {
      for (const auto& nc : named_circles()) {
        if (nc.name != name) continue;
        const auto rows = family(nc.locus, 100, SymmetryMode::tetrahedral);
        for (const auto& [t, s] : rows) CHECK(s.soft);
      }
    }
  }

  SECTION("pd geodesic arc endpoints") {
    const UnitVec3 g2(kG2);
    const UnitVec3 i2(kI2);
    const SolutionSet gpd = geodesic_through(g2, i2);
    const auto rows = family(gpd, 50, SymmetryMode::tetrahedral, g2, i2);
    REQUIRE(rows.size() == 50);
    CHECK(near(rows.front().second.a, kG2, 1e-9));
    CHECK(near(rows.back().second.a, kI2, 1e-9));
  }
}
