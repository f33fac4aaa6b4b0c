// Command-line front end: catalogue runs, family sweeps, mesh and tiling
// export, the Euler-angle chart, and a verify command re-checking the solver
// identities. Exit codes: 0 ok, 1 verify failure, 2 solver inconsistency,
// 3 mesh failure.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "softtiler/softtiler.hpp"

namespace {

using namespace softtiler;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  os << content;
}

SymmetryMode parse_mode(const std::string& value) {
  if (value == "octahedral") return SymmetryMode::octahedral;
  if (value == "tetrahedral") return SymmetryMode::tetrahedral;
  throw CLI::ValidationError("--mode", "expected octahedral or tetrahedral");
}

// Named solutions accepted by mesh/tile. The first three carry the full
// octahedral symmetry, the others only the tetrahedral subgroup.
std::optional<CellSolution> named_solution(const std::string& name) {
  if (name == "kelvin") return kelvin_solution();
  if (name == "pd") return pd_solution();
  for (const auto& [label, point] : known_points()) {
    if (label != name) continue;
    const SymmetryMode mode =
        (label == "e2" || label == "f2" || label == "g2")
            ? SymmetryMode::octahedral
            : SymmetryMode::tetrahedral;
    CellSolution s = classify_point(UnitVec3(point, 1e-9), mode);
    s.name = label;
    return s;
  }
  return std::nullopt;
}

struct FamilySpec {
  SolutionSet circle = SolutionSet::empty();
  std::optional<UnitVec3> arc_from;
  std::optional<UnitVec3> arc_to;
};

FamilySpec resolve_circle(const std::string& name) {
  FamilySpec spec;
  if (name == "pd") {
    const double h = 1.0 / std::sqrt(2.0);
    const UnitVec3 g2({h, -h, 0});
    const UnitVec3 i2(
        {std::sqrt(3.0) / 2.0, std::sqrt(3.0) / 6.0, 1.0 / std::sqrt(6.0)});
    spec.circle = geodesic_through(g2, i2);
    spec.arc_from = g2;
    spec.arc_to = i2;
    return spec;
  }
  for (const auto& nc : named_circles()) {
    if (nc.name == name) {
      spec.circle = nc.locus;
      return spec;
    }
  }
  throw CLI::ValidationError("--circle",
                             "unknown circle (use quad, hex1, hex2, abcd, "
                             "acbd, adbc, or pd)");
}

// Landmark rows: recognized solutions lying on the circle, placed at their
// sweep parameter.
void insert_landmarks(std::vector<std::pair<double, CellSolution>>& rows,
                      const FamilySpec& spec, SymmetryMode mode) {
  const auto [e1, e2] = family_basis(spec.circle, spec.arc_from, spec.arc_to);
  std::optional<double> span;
  if (spec.arc_to)
    span = std::atan2(dot(spec.arc_to->vec(), e2),
                      dot(spec.arc_to->vec(), e1));
  std::vector<std::pair<std::string, Vec3>> specials = known_points();
  specials.push_back({"kelvin", kelvin_solution().a});
  specials.push_back({"pd", pd_solution().a});
  for (const auto& [name, p] : specials) {
    if (!spec.circle.contains(p)) continue;
    double t = std::atan2(dot(p, e2), dot(p, e1));
    if (t < 0.0) t += 2.0 * std::numbers::pi;
    if (span && t > *span + 1e-12) continue;
    bool present = false;
    for (const auto& [tr, s] : rows)
      if (std::abs(tr - t) < 1e-12) present = true;
    if (present) continue;
    CellSolution s = classify_point(UnitVec3(p, 1e-9), mode);
    s.name = name;
    rows.push_back({t, std::move(s)});
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

struct VerifyCheck {
  std::string name;
  double residual;
  double tol;
};

double canon_dist(const Vec3& computed, const Vec3& expected) {
  return distance(canonical_sign(computed), canonical_sign(expected));
}

std::vector<VerifyCheck> run_verify() {
  std::vector<VerifyCheck> checks;
  const double h = 1.0 / std::sqrt(2.0);
  const double s6 = std::sqrt(2.0) / std::sqrt(6.0);
  const double q6 = 2.0 / std::sqrt(6.0);

  const auto gc_normal = [](const SolutionSet& s) {
    if (s.kind() != LocusKind::great_circle) return Vec3{1e9, 1e9, 1e9};
    return s.normal();
  };
  const auto ap_point = [](const SolutionSet& s) {
    if (s.kind() != LocusKind::antipodal_pair) return Vec3{1e9, 1e9, 1e9};
    return s.point();
  };

  // Softening-equation circles and isolated points.
  checks.push_back({"u_ab great-circle normal",
                    canon_dist(gc_normal(antipodal_constraint(transform_b())),
                               {h, h, 0}),
                    1e-12});
  checks.push_back({"u_ac great-circle normal",
                    canon_dist(gc_normal(antipodal_constraint(transform_c())),
                               {0.5, -0.5, h}),
                    1e-12});
  checks.push_back(
      {"u_bc great-circle normal",
       canon_dist(gc_normal(antipodal_constraint(transform_c().transposed() *
                                                 transform_b())),
                  {-0.5, 0.5, h}),
       1e-12});
  checks.push_back(
      {"a_cd isolated point (octahedral)",
       canon_dist(ap_point(antipodal_constraint(transform_d1().transposed() *
                                                transform_c())),
                  {h, -h, 0}),
       1e-12});
  checks.push_back(
      {"a_bd isolated point (octahedral)",
       canon_dist(ap_point(antipodal_constraint(transform_d1().transposed() *
                                                transform_b())),
                  {h, h, 0}),
       1e-12});
  checks.push_back({"a_ad isolated point (octahedral)",
                    canon_dist(ap_point(antipodal_constraint(transform_d1())),
                               {h, h, 0}),
                    1e-12});

  // Planar-face circles.
  for (const auto& fc : face_constraints()) {
    const SolutionSet locus = planar_face_constraint(fc.normal, fc.transforms);
    Vec3 expected{};
    if (fc.name == "quad") expected = {0, 0, 1};
    if (fc.name == "hex1") expected = {0, q6, s6};
    if (fc.name == "hex2") expected = {0, q6, -s6};  // derived by substitution
    checks.push_back({"g_" + fc.name + " circle normal",
                      canon_dist(gc_normal(locus), expected), 1e-12});
  }

  // Polyhedral nodal products.
  const NodalStructure ns = reference_nodal_structure(builtin_e2());
  const auto& d = ns.directions;
  checks.push_back({"polyhedral a0.b0 = 0",
                    std::abs(dot(d[0].vec(), d[1].vec())), 1e-12});
  checks.push_back({"polyhedral a0.c0 = -1/2",
                    std::abs(dot(d[0].vec(), d[2].vec()) + 0.5), 1e-12});
  checks.push_back({"polyhedral c0.d0 = 0",
                    std::abs(dot(d[2].vec(), d[3].vec())), 1e-12});

  // Catalogue coordinates and Euler angles.
  const Catalogue cat = run_catalogue(SymmetryMode::tetrahedral, true, true);
  const std::map<std::string, std::pair<Vec3, EulerAngles>> table = {
      {"f2", {{h, h, 0}, {std::numbers::pi / 2, std::numbers::pi / 4}}},
      {"g2", {{h, -h, 0}, {std::numbers::pi / 2, -std::numbers::pi / 4}}},
      {"h2", {{0.5, -0.5, h}, {std::numbers::pi / 4, -std::numbers::pi / 4}}},
      {"i2",
       {{std::sqrt(3.0) / 2.0, std::sqrt(3.0) / 6.0, 1.0 / std::sqrt(6.0)},
        {std::acos(1.0 / std::sqrt(6.0)), std::atan(1.0 / 3.0)}}},
  };
  for (const auto& [name, expect] : table) {
    double res = 1e9;
    for (const auto& s : cat.solutions)
      if (s.name == name)
        res = std::max({distance(s.a.vec(), expect.first),
                        std::abs(s.euler.phi - expect.second.phi),
                        std::abs(s.euler.theta - expect.second.theta)});
    checks.push_back({"table coordinates " + name, res, 1e-9});
  }

  // Kelvin cell.
  const CellSolution kelvin = kelvin_solution();
  const double kt = 2.0 * std::sqrt(2.0) - 3.0;
  const Vec3 kelvin_a{1.0 / std::sqrt(1.0 + kt * kt),
                      kt / std::sqrt(1.0 + kt * kt), 0.0};
  checks.push_back({"kelvin a vector", distance(kelvin.a.vec(), kelvin_a),
                    1e-10});
  checks.push_back({"kelvin a_z = 0", std::abs(kelvin.a.z()), 1e-10});
  checks.push_back(
      {"kelvin theta", std::abs(kelvin.euler.theta - std::atan(kt)), 1e-10});
  double kelvin_prod = 0.0;
  {
    const auto pr = detail::pairwise_products(kelvin.nodal);
    for (double p : pr) kelvin_prod = std::max(kelvin_prod, std::abs(p + 1.0 / 3.0));
  }
  checks.push_back({"kelvin tangent products -1/3", kelvin_prod, 1e-10});

  // PD cell.
  const CellSolution pd = pd_solution();
  const double r28 = std::sqrt(28.0);
  checks.push_back(
      {"pd a vector",
       distance(pd.a.vec(), {5.0 / r28, -1.0 / r28, std::sqrt(2.0) / r28}),
       1e-12});
  const double pd_ab = dot(pd.nodal[0], pd.nodal[1]);
  const double pd_ac = dot(pd.nodal[0], pd.nodal[2]);
  const double pd_bc = dot(pd.nodal[1], pd.nodal[2]);
  checks.push_back({"pd products (-3/7, 1/7, -5/7)",
                    std::max({std::abs(pd_ab + 3.0 / 7.0),
                              std::abs(pd_ac - 1.0 / 7.0),
                              std::abs(pd_bc + 5.0 / 7.0)}),
                    1e-12});
  checks.push_back(
      {"pd euler angles",
       std::max(std::abs(pd.euler.phi - std::acos(1.0 / std::sqrt(14.0))),
                std::abs(pd.euler.theta - std::atan(-0.2))),
       1e-12});
  checks.push_back({"pd not soft", pd.soft ? 1.0 : 0.0, 0.5});

  // Connecting geodesic normal (compared as a direction).
  {
    const UnitVec3 g2({h, -h, 0});
    const UnitVec3 i2(
        {std::sqrt(3.0) / 2.0, std::sqrt(3.0) / 6.0, 1.0 / std::sqrt(6.0)});
    const SolutionSet gpd = geodesic_through(g2, i2);
    const Vec3 printed{1.0 / std::sqrt(12.0), 1.0 / std::sqrt(12.0),
                       -2.0 / std::sqrt(6.0)};
    checks.push_back({"u_pd geodesic direction",
                      canon_dist(gpd.normal(), normalized(printed)), 1e-12});
    checks.push_back({"u_pd orthogonal to endpoints",
                      std::max(std::abs(dot(gpd.normal(), g2.vec())),
                               std::abs(dot(gpd.normal(), i2.vec()))),
                      1e-12});
  }

  return checks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soft space-filling tiling solver"};
  app.require_subcommand(1);

  std::string mode_name = "tetrahedral";
  bool flag_soft = false, flag_planar = false;
  std::string out_path;
  std::size_t resolution = 64;
  std::size_t samples = 360;
  double tol = 1e-6;
  std::string circle_name = "quad";
  std::string solution_name;
  std::vector<int> box{2, 2, 2};
  std::string stats_path;

  auto* cat_cmd = app.add_subcommand("catalogue", "solve and list all classes");
  cat_cmd->add_option("--mode", mode_name, "octahedral or tetrahedral");
  cat_cmd->add_flag("--soft", flag_soft, "keep soft solutions only");
  cat_cmd->add_flag("--planar", flag_planar,
                    "require at least one planar face");
  cat_cmd->add_option("--out", out_path, "JSON output path");

  auto* fam_cmd = app.add_subcommand("family", "sweep a solution circle");
  fam_cmd->add_option("--circle", circle_name,
                      "quad, hex1, hex2, abcd, acbd, adbc, or pd");
  fam_cmd->add_option("--samples", samples, "sample count")
      ->check(CLI::Range(2, 1000000));
  fam_cmd->add_option("--mode", mode_name, "octahedral or tetrahedral");
  fam_cmd->add_option("--out", out_path, "CSV output path");

  auto* mesh_cmd = app.add_subcommand("mesh", "realize a solution as a mesh");
  mesh_cmd->add_option("--solution", solution_name, "solution name")
      ->required();
  mesh_cmd->add_option("--resolution", resolution, "samples per edge")
      ->check(CLI::Range(8, 4096));
  mesh_cmd->add_option("--tol", tol, "weld tolerance")
      ->check(CLI::PositiveNumber);
  mesh_cmd->add_option("--out", out_path, "OBJ output path");
  mesh_cmd->add_option("--stats", stats_path, "stats JSON path");

  auto* tile_cmd = app.add_subcommand("tile", "tile a box with a solution");
  tile_cmd->add_option("--solution", solution_name, "solution name")
      ->required();
  tile_cmd->add_option("--box", box, "cells along each lattice direction")
      ->expected(3);
  tile_cmd->add_option("--resolution", resolution, "samples per edge")
      ->check(CLI::Range(8, 4096));
  tile_cmd->add_option("--tol", tol, "face matching tolerance")
      ->check(CLI::PositiveNumber);
  tile_cmd->add_option("--out", out_path, "OBJ output path");

  auto* chart_cmd = app.add_subcommand("chart", "Euler-angle chart CSV");
  chart_cmd->add_option("--samples", samples, "samples per circle")
      ->check(CLI::Range(8, 1000000));
  chart_cmd->add_option("--out", out_path, "CSV output path");

  auto* verify_cmd =
      app.add_subcommand("verify", "re-check all solver identities");
  (void)verify_cmd;

  CLI11_PARSE(app, argc, argv);

  try {
    if (cat_cmd->parsed()) {
      const SymmetryMode mode = parse_mode(mode_name);
      const Catalogue cat = run_catalogue(mode, flag_planar, flag_soft);
      std::cout << catalogue_table(cat);
      const std::string path =
          out_path.empty() ? "catalogue_" + std::string(to_string(mode)) + ".json"
                           : out_path;
      write_file(path, catalogue_to_json(cat));
      std::cout << cat.solutions.size() << " classes -> " << path << "\n";
    } else if (fam_cmd->parsed()) {
      const SymmetryMode mode = parse_mode(mode_name);
      const FamilySpec spec = resolve_circle(circle_name);
      auto rows =
          family(spec.circle, samples, mode, spec.arc_from, spec.arc_to);
      insert_landmarks(rows, spec, mode);
      const std::string path =
          out_path.empty() ? "family_" + circle_name + ".csv" : out_path;
      write_file(path, family_csv(rows));
      std::cout << rows.size() << " samples -> " << path << "\n";
    } else if (mesh_cmd->parsed()) {
      const auto solution = named_solution(solution_name);
      if (!solution) {
        std::cerr << "unknown solution: " << solution_name << "\n";
        return 2;
      }
      MeshOptions opt;
      opt.resolution = resolution;
      opt.weld_tol = tol;
      const CellMesh mesh = build_cell_mesh(*solution, opt);
      const std::string path =
          out_path.empty() ? solution_name + ".obj" : out_path;
      std::ofstream os(path, std::ios::binary);
      write_obj(os, mesh);
      const std::string stats =
          stats_path.empty() ? solution_name + "_stats.json" : stats_path;
      write_file(stats, mesh_stats_json(mesh));
      std::cout << "mesh " << solution_name << ": " << mesh.vertices.size()
                << " vertices, area " << mesh.total_area() << " -> " << path
                << "\n";
    } else if (tile_cmd->parsed()) {
      const auto solution = named_solution(solution_name);
      if (!solution) {
        std::cerr << "unknown solution: " << solution_name << "\n";
        return 2;
      }
      MeshOptions opt;
      opt.resolution = resolution;
      const CellMesh mesh = build_cell_mesh(*solution, opt);
      const TilingMesh tiling =
          tile_box(mesh, bcc_lattice(), {box[0], box[1], box[2]}, tol);
      const std::string path =
          out_path.empty() ? solution_name + "_tiling.obj" : out_path;
      std::ofstream os(path, std::ios::binary);
      write_obj(os, tiling);
      std::cout << "tiling " << solution_name << ": " << tiling.offsets.size()
                << " cells, " << tiling.adjacency.size()
                << " face-sharing pairs -> " << path << "\n";
    } else if (chart_cmd->parsed()) {
      const std::string path = out_path.empty() ? "chart.csv" : out_path;
      write_file(path, chart_csv(samples));
      std::cout << "chart -> " << path << "\n";
    } else if (verify_cmd->parsed()) {
      bool all_pass = true;
      for (const auto& c : run_verify()) {
        const bool pass = c.residual <= c.tol;
        all_pass = all_pass && pass;
        std::cout << (pass ? "PASS" : "FAIL") << "  " << c.name
                  << "  residual " << fmt17(c.residual) << " (tol "
                  << fmt17(c.tol) << ")\n";
      }
      if (!all_pass) return 1;
    }
  } catch (const solver_error& e) {
    std::cerr << "solver inconsistency: " << e.what() << "\n";
    return 2;
  } catch (const mesh_error& e) {
    std::cerr << "mesh failure: " << e.what() << "\n";
    return 3;
  } catch (const arc_error& e) {
    std::cerr << "mesh failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
