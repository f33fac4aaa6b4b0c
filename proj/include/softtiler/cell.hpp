// First-order description of the built-in space-filling cell: the 24 vertices
// of the truncated-octahedral Dirichlet-Voronoi cell of the bcc lattice, its
// face combinatorics, the nodal structure at a vertex, and the translation
// lattice assembling the tiling.

#ifndef SOFTTILER_CELL_HPP_
#define SOFTTILER_CELL_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "softtiler/vec.hpp"

namespace softtiler {

enum class FaceKind { quad, hex };

struct Face {
  FaceKind kind;
  std::vector<int> cycle;  // 1-based node indices, canonical rotation
};

struct FirstOrderCell {
  std::vector<Point3> nodes;               // nodes[i] holds node i+1
  std::vector<Face> faces;                 // 6 quads + 8 hexagons
  std::vector<std::pair<int, int>> edges;  // 1-based, first < second

  const Point3& node(int index1) const {
    if (index1 < 1 || index1 > static_cast<int>(nodes.size()))
      throw std::out_of_range("FirstOrderCell: node index");
    return nodes[static_cast<std::size_t>(index1 - 1)];
  }

  int node_count() const { return static_cast<int>(nodes.size()); }

  Point3 center() const {
    Point3 c{};
    for (const auto& p : nodes) c += p;
    return c / static_cast<double>(nodes.size());
  }

  std::vector<int> neighbors(int index1) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges) {
      if (a == index1) out.push_back(b);
      if (b == index1) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool has_face_with_vertices(const std::vector<int>& verts) const {
    std::vector<int> want = verts;
    std::sort(want.begin(), want.end());
    for (const auto& f : faces) {
      std::vector<int> have = f.cycle;
      std::sort(have.begin(), have.end());
      if (have == want) return true;
    }
    return false;
  }

  bool has_face_cycle(const std::vector<int>& cycle) const {
    for (const auto& f : faces)
      if (f.cycle == cycle) return true;
    return false;
  }
};

namespace detail {

// Rotate (and possibly reverse) a cycle so the smallest index comes first and
// its successor is the smaller of the two neighbors.
inline std::vector<int> canonical_cycle(std::vector<int> c) {
  const auto lowest = std::min_element(c.begin(), c.end());
  std::rotate(c.begin(), lowest, c.end());
  if (c.size() > 2 && c.back() < c[1]) {
    std::reverse(c.begin() + 1, c.end());
  }
  return c;
}

struct HullFacet {
  Vec3 normal;     // unit, outward
  double offset;   // normal . x = offset on the face plane
  std::vector<int> cycle;
};

// Facet enumeration for a small point set in convex position: every supporting
// plane through three points with all points on one side is a face plane.
inline std::vector<HullFacet> hull_facets(const std::vector<Point3>& pts,
                                          double tol = 1e-9) {
  const int n = static_cast<int>(pts.size());
  std::vector<HullFacet> facets;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Vec3 nrm = cross(pts[j] - pts[i], pts[k] - pts[i]);
        const double len = norm(nrm);
        if (len < 1e-9) continue;
        nrm = nrm / len;
        double lo = 0.0, hi = 0.0;
        for (int p = 0; p < n; ++p) {
          const double s = dot(nrm, pts[p] - pts[i]);
          lo = std::min(lo, s);
          hi = std::max(hi, s);
        }
        if (lo < -tol && hi > tol) continue;  // not a supporting plane
        if (hi > tol) nrm = -nrm;             // orient outward
        const double offset = dot(nrm, pts[i]);
        bool known = false;
        for (const auto& f : facets)
          if (near(f.normal, nrm, tol) && std::abs(f.offset - offset) < tol) {
            known = true;
            break;
          }
        if (known) continue;

        HullFacet f;
        f.normal = nrm;
        f.offset = offset;
        std::vector<int> members;
        for (int p = 0; p < n; ++p)
          if (std::abs(dot(nrm, pts[p]) - offset) < tol) members.push_back(p);
        // Order members around the facet centroid.
        Point3 centroid{};
        for (int m : members) centroid += pts[m];
        centroid = centroid / static_cast<double>(members.size());
        const Vec3 e1 = normalized(pts[members[0]] - centroid);
        const Vec3 e2 = cross(nrm, e1);
        std::sort(members.begin(), members.end(), [&](int a, int b) {
          const Vec3 pa = pts[a] - centroid, pb = pts[b] - centroid;
          return std::atan2(dot(pa, e2), dot(pa, e1)) <
                 std::atan2(dot(pb, e2), dot(pb, e1));
        });
        for (int m : members) f.cycle.push_back(m + 1);  // 1-based
        f.cycle = canonical_cycle(f.cycle);
        facets.push_back(f);
      }
  return facets;
}

}  // namespace detail

// The 24 vertices of the built-in cell, indices 1..24.
inline FirstOrderCell builtin_e2() {
  const double s = 1.0 / std::sqrt(2.0);
  FirstOrderCell cell;
  cell.nodes = {
      {0, 0, 0},          {1, 0, 0},          {1, 1, 0},
      {0, 1, 0},          {-0.5, -0.5, s},    {1.5, -0.5, s},
      {1.5, 1.5, s},      {-0.5, 1.5, s},     {-1, 0, 2 * s},
      {0, -1, 2 * s},     {1, -1, 2 * s},     {2, 0, 2 * s},
      {2, 1, 2 * s},      {1, 2, 2 * s},      {0, 2, 2 * s},
      {-1, 1, 2 * s},     {-0.5, -0.5, 3 * s}, {1.5, -0.5, 3 * s},
      {1.5, 1.5, 3 * s},  {-0.5, 1.5, 3 * s}, {0, 0, 4 * s},
      {1, 0, 4 * s},      {1, 1, 4 * s},      {0, 1, 4 * s}};

  const auto facets = detail::hull_facets(cell.nodes);
  if (facets.size() != 14)
    throw std::runtime_error("builtin_e2: hull produced " +
                             std::to_string(facets.size()) + " facets");
  for (const auto& f : facets) {
    Face face;
    face.cycle = f.cycle;
    if (f.cycle.size() == 4)
      face.kind = FaceKind::quad;
    else if (f.cycle.size() == 6)
      face.kind = FaceKind::hex;
    else
      throw std::runtime_error("builtin_e2: facet with " +
                               std::to_string(f.cycle.size()) + " vertices");
    cell.faces.push_back(face);
  }
  std::sort(cell.faces.begin(), cell.faces.end(),
            [](const Face& a, const Face& b) { return a.cycle < b.cycle; });

  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& f : cell.faces) {
    const std::size_t n = f.cycle.size();
    for (std::size_t i = 0; i < n; ++i) {
      int a = f.cycle[i], b = f.cycle[(i + 1) % n];
      if (a > b) std::swap(a, b);
      ++edge_use[{a, b}];
    }
  }
  for (const auto& [e, uses] : edge_use) {
    if (uses != 2)
      throw std::runtime_error("builtin_e2: edge not shared by 2 faces");
    cell.edges.push_back(e);
  }
  return cell;
}

// Half-tangent directions of the four tiling edges meeting at a node, plus
// the vertex-set combinatorics (which directions belong to which of the four
// cells sharing the node).
struct NodalStructure {
  int edge_count = 4;  // K
  int cell_count = 4;  // N
  std::array<int, 4> vertex_set_sizes{3, 3, 3, 3};
  std::array<UnitVec3, 4> directions;            // a0, b0, c0, d0
  std::array<std::array<int, 3>, 4> vertex_sets;  // nodal indices 1..4
};

// Reads the reference directions off node 1 of the cell. Three of the four
// tiling edges at a node lie in the cell; the fourth is the remaining edge of
// the vertex figure, which closes the direction sum to zero.
inline NodalStructure reference_nodal_structure(const FirstOrderCell& cell) {
  for (int n = 1; n <= cell.node_count(); ++n) {
    if (cell.neighbors(n).size() != 3)
      throw std::runtime_error(
          "reference_nodal_structure: node " + std::to_string(n) +
          " has in-cell degree " + std::to_string(cell.neighbors(n).size()) +
          ", tiling degree != 4");
  }
  const auto nbrs = cell.neighbors(1);
  const Vec3 a0 = normalized(cell.node(nbrs[0]) - cell.node(1));
  const Vec3 b0 = normalized(cell.node(nbrs[1]) - cell.node(1));
  const Vec3 c0 = normalized(cell.node(nbrs[2]) - cell.node(1));
  const Vec3 d0 = -(a0 + b0 + c0);
  if (std::abs(norm(d0) - 1.0) > 1e-9)
    throw std::runtime_error(
        "reference_nodal_structure: fourth edge direction is not unit");
  return NodalStructure{
      4,
      4,
      {3, 3, 3, 3},
      {UnitVec3(a0), UnitVec3(b0), UnitVec3(c0), UnitVec3::normalize(d0)},
      {{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}}};
}

struct Lattice {
  std::array<Vec3, 3> basis;
  std::vector<Vec3> face_translations;  // all 14, one per face
};

// Translations to the 14 face neighbors, obtained by reflecting the cell
// center across each face plane. The basis is a greedily chosen independent
// triple of those translations.
inline Lattice bcc_lattice() {
  const FirstOrderCell cell = builtin_e2();
  const Point3 c = cell.center();
  Lattice lat;
  for (const auto& f : cell.faces) {
    const Point3& p0 = cell.node(f.cycle[0]);
    const Point3& p1 = cell.node(f.cycle[1]);
    const Point3& p2 = cell.node(f.cycle[2]);
    const Vec3 n = normalized(cross(p1 - p0, p2 - p0));
    const double d = dot(n, p0);
    lat.face_translations.push_back(2.0 * (d - dot(n, c)) * n);
  }
  std::vector<Vec3> basis;
  for (const auto& t : lat.face_translations) {
    if (basis.size() == 3) break;
    std::array<Vec3, 3> trial{};
    for (std::size_t i = 0; i < basis.size(); ++i) trial[i] = basis[i];
    trial[basis.size()] = t;
    const double vol =
        basis.size() == 0
            ? norm(t)
            : (basis.size() == 1 ? norm(cross(trial[0], trial[1]))
                                 : std::abs(dot(trial[0],
                                                cross(trial[1], trial[2]))));
    if (vol > 1e-9) basis.push_back(t);
  }
  if (basis.size() != 3)
    throw std::runtime_error("bcc_lattice: no independent basis found");
  lat.basis = {basis[0], basis[1], basis[2]};
  return lat;
}

}  // namespace softtiler

#endif  // SOFTTILER_CELL_HPP_
