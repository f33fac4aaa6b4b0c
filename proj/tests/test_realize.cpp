#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numbers>

#include "softtiler/realize.hpp"

using namespace softtiler;

namespace {

const double kH = 1.0 / std::sqrt(2.0);

CellSolution named(const std::string& label, SymmetryMode mode) {
  for (const auto& [name, p] : known_points())
    if (name == label) {
      CellSolution s = classify_point(UnitVec3(p, 1e-9), mode);
      s.name = label;
      return s;
    }
  throw std::runtime_error("unknown label");
}

// Third-order one-sided estimate of the start tangent of a polyline.
Vec3 sampled_start_tangent(const std::vector<Point3>& samples) {
  const Point3 &p0 = samples[0], &p1 = samples[1], &p2 = samples[2],
               &p3 = samples[3];
  const Vec3 d = (-11.0 / 6.0) * p0 + 3.0 * p1 + (-1.5) * p2 + (1.0 / 3.0) * p3;
  return normalized(d);
}

double polygon_area(const std::vector<Point3>& cycle) {
  Point3 centroid{};
  for (const auto& p : cycle) centroid += p;
  centroid = centroid / static_cast<double>(cycle.size());
  double area = 0.0;
  for (std::size_t i = 0; i < cycle.size(); ++i)
    area += 0.5 * norm(cross(cycle[i] - centroid,
                             cycle[(i + 1) % cycle.size()] - centroid));
  return area;
}

}  // namespace

TEST_CASE("half-tangent propagation on the polyhedral and curved solutions") {
  const FirstOrderCell cell = builtin_e2();

  SECTION("polyhedral solution reproduces straight edge directions") {
    const CellSolution e2 = named("e2", SymmetryMode::octahedral);
    const PointGroup group = cell_point_group(SymmetryMode::octahedral);
    const HalfTangentAssignment ht = propagate_halftangents(cell, e2, group);
    CHECK(near(ht.at(1, 2), {1, 0, 0}, 1e-12));
    for (const auto& [edge, tangent] : ht.tangents) {
      const Vec3 dir = normalized(cell.node(edge.second) - cell.node(edge.first));
      CHECK(near(tangent, dir, 1e-9));
    }
  }

  SECTION("h2 tangent at the reference edge is the fundamental vector") {
    const CellSolution h2 = named("h2", SymmetryMode::tetrahedral);
    const PointGroup group = cell_point_group(SymmetryMode::tetrahedral);
    const HalfTangentAssignment ht = propagate_halftangents(cell, h2, group);
    CHECK(near(ht.at(1, 2), {0.5, -0.5, kH}, 1e-12));
  }

  SECTION("f2 tangents are collinear at every node") {
    const CellSolution f2 = named("f2", SymmetryMode::octahedral);
    const PointGroup group = cell_point_group(SymmetryMode::octahedral);
    const HalfTangentAssignment ht = propagate_halftangents(cell, f2, group);
    for (int n = 1; n <= cell.node_count(); ++n) {
      std::vector<Vec3> tangents;
      for (int m : cell.neighbors(n)) tangents.push_back(ht.at(n, m));
      tangents.push_back(ht.outward.at(n));
      for (const auto& t : tangents)
        CHECK(norm(cross(t, tangents.front())) < 1e-9);
    }
  }
}

TEST_CASE("arc edge construction") {
  SECTION("straight edge") {
    const ArcEdge e = arc_edge({0, 0, 0}, {1, 0, 0}, UnitVec3({1, 0, 0}),
                               UnitVec3({-1, 0, 0}), 16);
    CHECK(e.kind == EdgeCurveKind::straight);
    CHECK(near(e.samples.front(), {0, 0, 0}, 1e-15));
    CHECK(near(e.samples.back(), {1, 0, 0}, 1e-15));
  }

  SECTION("symmetric tangents give a single arc") {
    const UnitVec3 tp({kH, kH, 0});
    const UnitVec3 tq({-kH, kH, 0});
    const ArcEdge e = arc_edge({0, 0, 0}, {1, 0, 0}, tp, tq, 65);
    REQUIRE(e.kind == EdgeCurveKind::arc);
    REQUIRE(e.segments.size() == 1);
    CHECK(near(e.segments[0].center, {0.5, -0.5, 0}, 1e-12));
    CHECK(e.segments[0].radius == Catch::Approx(kH).margin(1e-12));
    // Sagitta of the bulge above the chord.
    const double sagitta = e.segments[0].radius - 0.5;
    CHECK(sagitta == Catch::Approx((std::sqrt(2.0) - 1.0) / 2.0).margin(1e-12));
    double max_y = 0.0;
    for (const auto& p : e.samples) max_y = std::max(max_y, p.y);
    CHECK(max_y == Catch::Approx(sagitta).margin(1e-9));
    CHECK(near(e.samples.front(), {0, 0, 0}, 1e-9));
    CHECK(near(e.samples.back(), {1, 0, 0}, 1e-9));
    CHECK(near(sampled_start_tangent(e.samples), tp, 1e-4));
  }

  SECTION("asymmetric tangents fall back to a biarc") {
    const UnitVec3 tp = UnitVec3::normalize({1, 1, 0});
    const UnitVec3 tq = UnitVec3::normalize({-1, 0.25, 0});
    const ArcEdge e = arc_edge({0, 0, 0}, {1, 0, 0}, tp, tq, 64);
    CHECK(e.kind == EdgeCurveKind::biarc);
    REQUIRE(e.segments.size() == 2);
    CHECK(near(e.samples.front(), {0, 0, 0}, 1e-9));
    CHECK(near(e.samples.back(), {1, 0, 0}, 1e-9));
    CHECK(near(sampled_start_tangent(e.samples), tp, 1e-3));
    std::vector<Point3> reversed(e.samples.rbegin(), e.samples.rend());
    CHECK(near(sampled_start_tangent(reversed), tq, 1e-3));
  }

  SECTION("endpoints interpolate at any resolution") {
    for (std::size_t res : {8u, 33u, 200u}) {
      const ArcEdge e = arc_edge({0, 0, 0}, {1, 0, 0}, UnitVec3({kH, kH, 0}),
                                 UnitVec3({-kH, kH, 0}), res);
      CHECK(e.samples.size() == res);
      CHECK(near(e.samples.front(), {0, 0, 0}, 1e-9));
      CHECK(near(e.samples.back(), {1, 0, 0}, 1e-9));
    }
  }
}

TEST_CASE("face relaxation decreases area monotonically") {
  SECTION("planar polygon stays planar") {
    std::vector<Point3> boundary;
    for (int k = 0; k < 48; ++k) {
      const double t = 2.0 * std::numbers::pi * k / 48.0;
      boundary.push_back({std::cos(t), std::sin(t), 0.0});
    }
    std::vector<double> trace;
    const FaceMesh relaxed =
        relax_face(boundary, seed_disk(boundary, 6), 500, 1e-9, &trace);
    for (const auto& v : relaxed.vertices) CHECK(std::abs(v.z) < 1e-12);
    CHECK(relaxed.area() ==
          Catch::Approx(polygon_area(boundary)).epsilon(1e-3));
    for (std::size_t i = 1; i < trace.size(); ++i)
      CHECK(trace[i] <= trace[i - 1] * (1 + 1e-14));
  }

  SECTION("hemisphere seed flattens to the disk") {
    std::vector<Point3> boundary;
    const std::size_t k = 48;
    for (std::size_t i = 0; i < k; ++i) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(i) /
                       static_cast<double>(k);
      boundary.push_back({std::cos(t), std::sin(t), 0.0});
    }
    FaceMesh seed = seed_disk(boundary, 8);
    for (std::size_t i = seed.boundary_count; i < seed.vertices.size(); ++i) {
      Point3& p = seed.vertices[i];
      const double r2 = p.x * p.x + p.y * p.y;
      p.z = std::sqrt(std::max(0.0, 1.0 - r2));
    }
    std::vector<double> trace;
    const FaceMesh relaxed = relax_face(boundary, seed, 4000, 1e-10, &trace);
    CHECK(relaxed.area() == Catch::Approx(std::numbers::pi).epsilon(0.01));
    for (std::size_t i = 1; i < trace.size(); ++i)
      CHECK(trace[i] <= trace[i - 1] * (1 + 1e-14));
  }
}

TEST_CASE("cell meshes close up and match reference areas") {
  MeshOptions opt;
  opt.resolution = 12;

  SECTION("polyhedral mesh area equals the hull area") {
    const CellMesh mesh =
        build_cell_mesh(named("e2", SymmetryMode::octahedral), opt);
    const FirstOrderCell cell = builtin_e2();
    double hull_area = 0.0;
    for (const auto& f : cell.faces) {
      std::vector<Point3> poly;
      for (int idx : f.cycle) poly.push_back(cell.node(idx));
      hull_area += polygon_area(poly);
    }
    CHECK(mesh.total_area() == Catch::Approx(hull_area).epsilon(0.005));
    CHECK(mesh.weld_residual <= 1e-6);
  }

  SECTION("curved solutions weld closed and respect planar-face claims") {
    for (const char* label : {"f2", "g2", "h2"}) {
      const SymmetryMode mode = (std::string(label) == "h2")
                                    ? SymmetryMode::tetrahedral
                                    : SymmetryMode::octahedral;
      const CellMesh mesh = build_cell_mesh(named(label, mode), opt);
      CHECK(mesh.weld_residual <= 1e-6);

      // Any face whose boundary is planar must stay planar after relaxation.
      int planar_faces = 0;
      for (const auto& f : mesh.faces) {
        std::vector<Point3> pts;
        for (std::size_t t = f.triangle_begin; t < f.triangle_end; ++t)
          for (int c = 0; c < 3; ++c)
            pts.push_back(
                mesh.vertices[static_cast<std::size_t>(
                    mesh.triangles[t][static_cast<std::size_t>(c)])]);
        const Vec3 n = normalized(detail::newell_normal(pts));
        double max_dev = 0.0;
        for (const auto& p : pts)
          max_dev = std::max(max_dev, std::abs(dot(n, p - f.centroid)));
        if (max_dev < 1e-3) ++planar_faces;
      }
      if (std::string(label) == "f2") CHECK(planar_faces >= 6);
      if (std::string(label) == "h2") CHECK(planar_faces >= 1);
    }
  }
}

TEST_CASE("sampled tangents realize the second-order data") {
  MeshOptions opt;
  opt.resolution = 64;
  const CellSolution g2 = named("g2", SymmetryMode::octahedral);
  const FirstOrderCell cell = builtin_e2();
  const PointGroup group = cell_point_group(SymmetryMode::octahedral);
  const HalfTangentAssignment ht = propagate_halftangents(cell, g2, group);

  std::map<std::pair<int, int>, std::vector<Point3>> polylines;
  for (const auto& [i, j] : cell.edges) {
    const ArcEdge arc = arc_edge(cell.node(i), cell.node(j),
                                 UnitVec3(ht.at(i, j), 1e-9),
                                 UnitVec3(ht.at(j, i), 1e-9), opt.resolution);
    polylines[{i, j}] = arc.samples;
  }

  for (const auto& [edge, samples] : polylines) {
    CHECK(near(sampled_start_tangent(samples), ht.at(edge.first, edge.second),
               1e-4));
    std::vector<Point3> reversed(samples.rbegin(), samples.rend());
    CHECK(near(sampled_start_tangent(reversed),
               ht.at(edge.second, edge.first), 1e-4));
  }

  // Softness realized: at every node this cell's in-cell tangents contain an
  // antipodal pair.
  for (int n = 1; n <= cell.node_count(); ++n) {
    std::vector<Vec3> tangents;
    for (int m : cell.neighbors(n)) {
      const auto key = n < m ? std::make_pair(n, m) : std::make_pair(m, n);
      std::vector<Point3> samples = polylines.at(key);
      if (n > m) std::reverse(samples.begin(), samples.end());
      tangents.push_back(sampled_start_tangent(samples));
    }
    double best = 1.0;
    for (std::size_t i = 0; i < tangents.size(); ++i)
      for (std::size_t j = i + 1; j < tangents.size(); ++j)
        best = std::min(best, dot(tangents[i], tangents[j]));
    CHECK(best <= -1.0 + 1e-4);
  }
}

TEST_CASE("tilings replicate the cell over the lattice") {
  MeshOptions opt;
  opt.resolution = 12;
  const Lattice lattice = bcc_lattice();

  SECTION("single cell") {
    const CellMesh mesh =
        build_cell_mesh(named("e2", SymmetryMode::octahedral), opt);
    const TilingMesh tiling = tile_box(mesh, lattice, {1, 1, 1});
    CHECK(tiling.offsets.size() == 1);
    CHECK(tiling.adjacency.empty());
  }

  SECTION("eight curved cells face-match") {
    const CellMesh mesh =
        build_cell_mesh(named("g2", SymmetryMode::octahedral), opt);
    const TilingMesh tiling = tile_box(mesh, lattice, {2, 2, 2});
    CHECK(tiling.offsets.size() == 8);
    CHECK(tiling.adjacency.size() >= 12);
  }
}

TEST_CASE("dedup-group elements map the f2 mesh onto itself") {
  MeshOptions opt;
  opt.resolution = 10;
  const CellMesh mesh =
      build_cell_mesh(named("f2", SymmetryMode::octahedral), opt);
  const Point3 center = builtin_e2().center();

  // Quantized lookup grid over the mesh vertices.
  std::map<std::tuple<long long, long long, long long>, std::vector<Point3>>
      grid;
  const double cell_size = 1e-5;
  const auto key_of = [&](const Point3& p) {
    return std::make_tuple(static_cast<long long>(std::floor(p.x / cell_size)),
                           static_cast<long long>(std::floor(p.y / cell_size)),
                           static_cast<long long>(std::floor(p.z / cell_size)));
  };
  for (const auto& v : mesh.vertices) grid[key_of(v)].push_back(v);
  const auto has_near = [&](const Point3& p) {
    const auto [kx, ky, kz] = key_of(p);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dz = -1; dz <= 1; ++dz) {
          const auto it = grid.find({kx + dx, ky + dy, kz + dz});
          if (it == grid.end()) continue;
          for (const auto& q : it->second)
            if (near(p, q, 1e-6)) return true;
        }
    return false;
  };

  for (const auto& g : dedup_group().elements) {
    for (const auto& v : mesh.vertices) {
      const Point3 image = g(v - center) + center;
      if (!has_near(image)) {
        FAIL("mapped vertex not found in mesh");
      }
    }
  }
}
