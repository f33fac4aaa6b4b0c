// Plain-text output formats: catalogue and cell JSON, the Euler-angle chart
// CSV, family sweep CSV, mesh statistics, and point-group dumps. All floats
// are printed at 17 significant digits so outputs diff cleanly.

#ifndef SOFTTILER_EXPORT_HPP_
#define SOFTTILER_EXPORT_HPP_

#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "softtiler/cell.hpp"
#include "softtiler/eeb.hpp"
#include "softtiler/format.hpp"
#include "softtiler/group.hpp"
#include "softtiler/realize.hpp"

namespace softtiler {

namespace detail {

inline std::string json_vec(const Vec3& v) {
  return "[" + fmt17(v.x) + ", " + fmt17(v.y) + ", " + fmt17(v.z) + "]";
}

inline std::string json_string_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + items[i] + "\"";
  }
  return out + "]";
}

}  // namespace detail

inline std::string cell_to_json(const FirstOrderCell& cell) {
  std::ostringstream os;
  os << "{\n  \"nodes\": [\n";
  for (std::size_t i = 0; i < cell.nodes.size(); ++i)
    os << "    " << detail::json_vec(cell.nodes[i])
       << (i + 1 < cell.nodes.size() ? "," : "") << "\n";
  os << "  ],\n  \"faces\": [\n";
  for (std::size_t i = 0; i < cell.faces.size(); ++i) {
    const Face& f = cell.faces[i];
    os << "    {\"kind\": \""
       << (f.kind == FaceKind::quad ? "quad" : "hex") << "\", \"cycle\": [";
    for (std::size_t j = 0; j < f.cycle.size(); ++j)
      os << (j ? ", " : "") << f.cycle[j];
    os << "]}" << (i + 1 < cell.faces.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

inline std::string solution_to_json(const CellSolution& s,
                                    const std::string& indent) {
  std::ostringstream os;
  os << indent << "{\n";
  os << indent << "  \"name\": \"" << s.name << "\",\n";
  os << indent << "  \"a\": " << detail::json_vec(s.a) << ",\n";
  os << indent << "  \"phi\": " << fmt17(s.euler.phi) << ",\n";
  os << indent << "  \"theta\": " << fmt17(s.euler.theta) << ",\n";
  os << indent << "  \"soft\": " << (s.soft ? "true" : "false") << ",\n";
  os << indent << "  \"standard\": " << (s.standard ? "true" : "false")
     << ",\n";
  os << indent << "  \"planar_faces\": "
     << detail::json_string_list(s.planar_faces) << ",\n";
  os << indent << "  \"member_circles\": "
     << detail::json_string_list(s.member_circles) << ",\n";
  os << indent << "  \"min_pair_dot\": " << fmt17(s.min_pair_dot) << ",\n";
  os << indent << "  \"nodal\": [" << detail::json_vec(s.nodal[0]) << ", "
     << detail::json_vec(s.nodal[1]) << ", " << detail::json_vec(s.nodal[2])
     << ", " << detail::json_vec(s.nodal[3]) << "]\n";
  os << indent << "}";
  return os.str();
}

inline std::string catalogue_to_json(const Catalogue& cat) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"mode\": \"" << to_string(cat.mode) << "\",\n";
  os << "  \"require_soft\": " << (cat.require_soft ? "true" : "false")
     << ",\n";
  os << "  \"require_planar\": " << (cat.require_planar ? "true" : "false")
     << ",\n";
  os << "  \"dedup_group_order\": " << cat.dedup_group_order << ",\n";
  os << "  \"solutions\": [\n";
  for (std::size_t i = 0; i < cat.solutions.size(); ++i)
    os << solution_to_json(cat.solutions[i], "    ")
       << (i + 1 < cat.solutions.size() ? "," : "") << "\n";
  os << "  ]\n}\n";
  return os.str();
}

inline std::string catalogue_table(const Catalogue& cat) {
  std::ostringstream os;
  os << "name      a                                    phi        theta      "
        "soft  standard  planar\n";
  for (const auto& s : cat.solutions) {
    char line[256];
    std::string faces;
    for (const auto& f : s.planar_faces)
      faces += (faces.empty() ? "" : ",") + f;
    std::snprintf(line, sizeof line,
                  "%-8s  (%8.5f, %8.5f, %8.5f)  %9.6f  %9.6f  %-4s  %-8s  %s\n",
                  s.name.c_str(), s.a.x(), s.a.y(), s.a.z(), s.euler.phi,
                  s.euler.theta, s.soft ? "yes" : "no",
                  s.standard ? "yes" : "no",
                  faces.empty() ? "-" : faces.c_str());
    os << line;
  }
  return os.str();
}

// CSV rows for the chart on the (phi, theta) plane: sampled constraint and
// softening circles, the connecting geodesic, and all special points.
inline std::string chart_csv(std::size_t circle_samples = 720) {
  std::ostringstream os;
  os << "kind,label,phi,theta\n";

  std::vector<NamedCircle> circles = named_circles();
  {
    const double h = 1.0 / std::sqrt(2.0);
    const UnitVec3 g2({h, -h, 0});
    const UnitVec3 i2(
        {std::sqrt(3.0) / 2.0, std::sqrt(3.0) / 6.0, 1.0 / std::sqrt(6.0)});
    circles.push_back({"pd", geodesic_through(g2, i2)});
  }
  for (const auto& nc : circles) {
    const auto [e1, e2] = family_basis(nc.locus);
    for (std::size_t k = 0; k < circle_samples; ++k) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(circle_samples);
      const EulerAngles e = euler_from_unit(
          UnitVec3::normalize(std::cos(t) * e1 + std::sin(t) * e2));
      os << "circle," << nc.name << "," << fmt17(e.phi) << ","
         << fmt17(e.theta) << "\n";
    }
  }

  for (const auto& [name, p] : known_points()) {
    const EulerAngles e = euler_from_unit(UnitVec3(p, 1e-9));
    os << "point," << name << "," << fmt17(e.phi) << "," << fmt17(e.theta)
       << "\n";
  }
  const CellSolution kelvin = kelvin_solution();
  os << "point,kelvin," << fmt17(kelvin.euler.phi) << ","
     << fmt17(kelvin.euler.theta) << "\n";
  const CellSolution pd = pd_solution();
  os << "point,pd," << fmt17(pd.euler.phi) << "," << fmt17(pd.euler.theta)
     << "\n";
  return os.str();
}

inline std::string family_csv(
    const std::vector<std::pair<double, CellSolution>>& rows) {
  std::ostringstream os;
  os << "theta_param,a_x,a_y,a_z,phi,theta,soft,standard,min_pair_dot\n";
  for (const auto& [t, s] : rows)
    os << fmt17(t) << "," << fmt17(s.a.x()) << "," << fmt17(s.a.y()) << ","
       << fmt17(s.a.z()) << "," << fmt17(s.euler.phi) << ","
       << fmt17(s.euler.theta) << "," << (s.soft ? 1 : 0) << ","
       << (s.standard ? 1 : 0) << "," << fmt17(s.min_pair_dot) << "\n";
  return os.str();
}

inline std::string mesh_stats_json(const CellMesh& mesh) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"solution\": \"" << mesh.solution.name << "\",\n";
  os << "  \"total_area\": " << fmt17(mesh.total_area()) << ",\n";
  os << "  \"weld_residual\": " << fmt17(mesh.weld_residual) << ",\n";
  os << "  \"vertex_count\": " << mesh.vertices.size() << ",\n";
  os << "  \"triangle_count\": " << mesh.triangles.size() << ",\n";
  os << "  \"faces\": [\n";
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const auto& f = mesh.faces[i];
    os << "    {\"name\": \"" << f.name << "\", \"area\": " << fmt17(f.area)
       << ", \"relax_steps\": " << (f.area_trace.empty() ? 0 : f.area_trace.size() - 1)
       << "}" << (i + 1 < mesh.faces.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

inline std::string group_to_json(const PointGroup& g) {
  std::ostringstream os;
  os << "{\n  \"order\": " << g.order() << ",\n  \"elements\": [\n";
  for (std::size_t i = 0; i < g.elements.size(); ++i) {
    os << "    [";
    for (int k = 0; k < 9; ++k)
      os << (k ? ", " : "") << fmt17(g.elements[i].mat().m[static_cast<std::size_t>(k)]);
    os << "]" << (i + 1 < g.elements.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

}  // namespace softtiler

#endif  // SOFTTILER_EXPORT_HPP_
