// Lifts a second-order solution to explicit geometry: half-tangents propagated
// over the whole cell by the point group, circular-arc edges, faces relaxed by
// discrete area-gradient descent, welded watertight cell meshes, and periodic
// assemblies of translated copies.

#ifndef SOFTTILER_REALIZE_HPP_
#define SOFTTILER_REALIZE_HPP_

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "softtiler/arc.hpp"
#include "softtiler/cell.hpp"
#include "softtiler/eeb.hpp"
#include "softtiler/format.hpp"
#include "softtiler/group.hpp"
#include "softtiler/vec.hpp"

namespace softtiler {

struct mesh_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline unsigned worker_count() {
  if (const char* env = std::getenv("SOFTTILER_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : std::min(hw, 8u);
}

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned workers =
      std::min<std::size_t>(worker_count(), count == 0 ? 1 : count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count;
             i = next.fetch_add(1))
          fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

// Tangents of every directed in-cell edge, plus the outward tiling-edge
// tangent at each node, obtained by transporting the reference nodal set with
// the group element that maps node 1 onto each node.
struct HalfTangentAssignment {
  std::map<std::pair<int, int>, Vec3> tangents;  // (node, neighbor) -> tangent
  std::map<int, Vec3> outward;
  std::map<int, Mat3> node_frame;

  const Vec3& at(int node, int neighbor) const {
    const auto it = tangents.find({node, neighbor});
    if (it == tangents.end())
      throw mesh_error("HalfTangentAssignment: no tangent for edge " +
                       std::to_string(node) + "-" + std::to_string(neighbor));
    return it->second;
  }
};

inline HalfTangentAssignment propagate_halftangents(
    const FirstOrderCell& cell, const CellSolution& solution,
    const PointGroup& group) {
  const Point3 center = cell.center();
  const Vec3 ref = cell.node(1) - center;
  const NodalStructure ns = reference_nodal_structure(cell);

  HalfTangentAssignment out;
  for (int n = 1; n <= cell.node_count(); ++n) {
    const Vec3 rel = cell.node(n) - center;
    std::vector<const Orthogonal3*> matches;
    for (const auto& g : group.elements)
      if (near(g(ref), rel, 1e-9)) matches.push_back(&g);
    if (matches.empty())
      throw mesh_error("propagate_halftangents: no group element maps node 1"
                       " to node " + std::to_string(n));
    std::sort(matches.begin(), matches.end(),
              [](const Orthogonal3* a, const Orthogonal3* b) {
                return mat_lex_less(a->mat(), b->mat());
              });

    const auto assign_with = [&](const Orthogonal3& g,
                                 std::map<int, Vec3>& tangent_by_neighbor,
                                 Vec3& outward_tangent) {
      for (int m : cell.neighbors(n)) {
        const Vec3 dir = normalized(cell.node(m) - cell.node(n));
        const Vec3 pulled = g.transposed()(dir);
        int index = -1;
        for (int k = 0; k < 4; ++k)
          if (near(pulled, ns.directions[static_cast<std::size_t>(k)], 1e-9))
            index = k;
        if (index < 0)
          throw mesh_error(
              "propagate_halftangents: edge star mismatch at node " +
              std::to_string(n));
        tangent_by_neighbor[m] =
            g(solution.nodal[static_cast<std::size_t>(index)]);
      }
      outward_tangent = g(solution.nodal[3]);
    };

    std::map<int, Vec3> chosen;
    Vec3 chosen_outward;
    assign_with(*matches.front(), chosen, chosen_outward);
    // Any element mapping the edge star the same way must induce the same
    // tangents, otherwise the solution lacks the symmetry of the group.
    for (std::size_t k = 1; k < matches.size(); ++k) {
      std::map<int, Vec3> other;
      Vec3 other_outward;
      assign_with(*matches[k], other, other_outward);
      for (const auto& [m, t] : chosen)
        if (!near(t, other.at(m), 1e-9))
          throw mesh_error(
              "propagate_halftangents: ambiguous assignment at node " +
              std::to_string(n));
    }
    for (const auto& [m, t] : chosen) out.tangents[{n, m}] = t;
    out.outward[n] = chosen_outward;
    out.node_frame[n] = matches.front()->mat();
  }
  return out;
}

// Disk triangulation with a fixed boundary ring.
struct FaceMesh {
  std::vector<Point3> vertices;  // the first boundary_count are fixed
  std::size_t boundary_count = 0;
  std::vector<std::array<int, 3>> triangles;

  double area() const {
    double a = 0.0;
    for (const auto& t : triangles)
      a += 0.5 * norm(cross(vertices[static_cast<std::size_t>(t[1])] -
                                vertices[static_cast<std::size_t>(t[0])],
                            vertices[static_cast<std::size_t>(t[2])] -
                                vertices[static_cast<std::size_t>(t[0])]));
    return a;
  }

  double min_angle_deg() const {
    double best = 180.0;
    for (const auto& t : triangles) {
      const Point3& a = vertices[static_cast<std::size_t>(t[0])];
      const Point3& b = vertices[static_cast<std::size_t>(t[1])];
      const Point3& c = vertices[static_cast<std::size_t>(t[2])];
      const double la = distance(b, c), lb = distance(a, c), lc = distance(a, b);
      const auto angle = [](double opp, double s1, double s2) {
        const double cosv =
            std::clamp((s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2), -1.0, 1.0);
        return std::acos(cosv) * 180.0 / std::numbers::pi;
      };
      best = std::min({best, angle(la, lb, lc), angle(lb, la, lc),
                       angle(lc, la, lb)});
    }
    return best;
  }
};

// Concentric-ring seed: boundary, shrinking interior rings, and an apex at
// the boundary centroid. Triangle orientation follows the boundary order.
inline FaceMesh seed_disk(const std::vector<Point3>& boundary,
                          std::size_t rings) {
  const std::size_t k = boundary.size();
  if (k < 3) throw mesh_error("seed_disk: boundary too short");
  rings = std::max<std::size_t>(rings, 1);
  Point3 centroid{};
  for (const auto& p : boundary) centroid += p;
  centroid = centroid / static_cast<double>(k);

  FaceMesh mesh;
  mesh.boundary_count = k;
  mesh.vertices = boundary;
  for (std::size_t r = 1; r < rings; ++r) {
    const double s = static_cast<double>(r) / static_cast<double>(rings);
    for (std::size_t i = 0; i < k; ++i)
      mesh.vertices.push_back(boundary[i] + s * (centroid - boundary[i]));
  }
  const int apex = static_cast<int>(mesh.vertices.size());
  mesh.vertices.push_back(centroid);

  const auto ring_vertex = [&](std::size_t r, std::size_t i) {
    return static_cast<int>(r * k + (i % k));
  };
  for (std::size_t r = 0; r + 1 < rings; ++r)
    for (std::size_t i = 0; i < k; ++i) {
      mesh.triangles.push_back(
          {ring_vertex(r, i), ring_vertex(r, i + 1), ring_vertex(r + 1, i)});
      mesh.triangles.push_back({ring_vertex(r, i + 1), ring_vertex(r + 1, i + 1),
                                ring_vertex(r + 1, i)});
    }
  for (std::size_t i = 0; i < k; ++i)
    mesh.triangles.push_back(
        {ring_vertex(rings - 1, i), ring_vertex(rings - 1, i + 1), apex});
  return mesh;
}

// Damped cotangent-weighted mean-curvature descent with a fixed boundary.
// Steps are accepted only if the total area does not increase; stops when the
// relative decrease per accepted step falls below `eps`.
inline FaceMesh relax_face(const std::vector<Point3>& boundary, FaceMesh mesh,
                           int max_iter = 2000, double eps = 1e-7,
                           std::vector<double>* area_trace = nullptr) {
  if (mesh.boundary_count != boundary.size())
    throw mesh_error("relax_face: boundary size mismatch");
  for (std::size_t i = 0; i < boundary.size(); ++i)
    mesh.vertices[i] = boundary[i];
  if (mesh.min_angle_deg() < 1.0)
    throw mesh_error("relax_face: degenerate seed (min angle < 1 deg)");

  const std::size_t nv = mesh.vertices.size();
  double area_prev = mesh.area();
  if (area_trace) area_trace->push_back(area_prev);
  double damping = 0.8;

  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<double> wsum(nv, 0.0);
    std::vector<Vec3> wpos(nv);
    for (const auto& t : mesh.triangles) {
      for (int corner = 0; corner < 3; ++corner) {
        const std::size_t i = static_cast<std::size_t>(t[static_cast<std::size_t>(corner)]);
        const std::size_t j = static_cast<std::size_t>(t[static_cast<std::size_t>((corner + 1) % 3)]);
        const std::size_t o = static_cast<std::size_t>(t[static_cast<std::size_t>((corner + 2) % 3)]);
        const Vec3 u = mesh.vertices[i] - mesh.vertices[o];
        const Vec3 v = mesh.vertices[j] - mesh.vertices[o];
        const double sin_area = norm(cross(u, v));
        if (sin_area < 1e-14) continue;
        // Nonnegative weights keep the averaging step inside the neighbor
        // hull; the area-descent acceptance below drives minimality.
        const double cot = std::clamp(dot(u, v) / sin_area, 0.0, 100.0);
        wsum[i] += 0.5 * cot;
        wpos[i] += 0.5 * cot * mesh.vertices[j];
        wsum[j] += 0.5 * cot;
        wpos[j] += 0.5 * cot * mesh.vertices[i];
      }
    }

    // A step is admissible only if the area does not grow and no triangle
    // collapses outright; thin triangles may appear transiently, but the
    // final mesh must satisfy the 1-degree invariant.
    bool accepted = false;
    bool finished = false;
    while (damping >= 1e-6) {
      FaceMesh trial = mesh;
      for (std::size_t i = mesh.boundary_count; i < nv; ++i) {
        if (wsum[i] <= 1e-12) continue;
        const Vec3 target = wpos[i] / wsum[i];
        trial.vertices[i] =
            mesh.vertices[i] + damping * (target - mesh.vertices[i]);
      }
      const double area_new = trial.area();
      if (area_new <= area_prev * (1.0 + 1e-14) &&
          trial.min_angle_deg() >= 0.01) {
        const double rel =
            area_prev > 0.0 ? (area_prev - area_new) / area_prev : 0.0;
        mesh = std::move(trial);
        area_prev = area_new;
        if (area_trace) area_trace->push_back(area_new);
        accepted = true;
        finished = rel < eps;
        if (damping < 0.8) damping *= 2.0;
        break;
      }
      damping *= 0.5;
    }
    if (finished || !accepted) break;  // converged or no admissible step
  }
  if (mesh.min_angle_deg() < 1.0)
    throw mesh_error("relax_face: degenerate triangle (min angle < 1 deg)");
  return mesh;
}

struct MeshFaceInfo {
  std::string name;  // "quad" or "hex" plus index
  double area = 0.0;
  std::size_t triangle_begin = 0;
  std::size_t triangle_end = 0;
  Point3 centroid{};
  std::vector<double> area_trace;
};

struct CellMesh {
  CellSolution solution;
  std::vector<Point3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<MeshFaceInfo> faces;
  double weld_residual = 0.0;

  double total_area() const {
    double a = 0.0;
    for (const auto& f : faces) a += f.area;
    return a;
  }
};

namespace detail {

struct WeldMap {
  std::map<std::tuple<long long, long long, long long>, std::vector<int>> grid;
  std::vector<Point3>* pool;
  double tol;
  double worst = 0.0;

  explicit WeldMap(std::vector<Point3>* p, double tolerance)
      : pool(p), tol(tolerance) {}

  std::tuple<long long, long long, long long> key(const Point3& p) const {
    const double cell = 4.0 * tol;
    return {static_cast<long long>(std::floor(p.x / cell)),
            static_cast<long long>(std::floor(p.y / cell)),
            static_cast<long long>(std::floor(p.z / cell))};
  }

  int insert(const Point3& p) {
    const auto [kx, ky, kz] = key(p);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dz = -1; dz <= 1; ++dz) {
          const auto it = grid.find({kx + dx, ky + dy, kz + dz});
          if (it == grid.end()) continue;
          for (int idx : it->second) {
            const double d = distance((*pool)[static_cast<std::size_t>(idx)], p);
            if (d <= tol) {
              worst = std::max(worst, d);
              return idx;
            }
          }
        }
    pool->push_back(p);
    const int idx = static_cast<int>(pool->size()) - 1;
    grid[{kx, ky, kz}].push_back(idx);
    return idx;
  }
};

inline Vec3 newell_normal(const std::vector<Point3>& poly) {
  Vec3 n{};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point3& a = poly[i];
    const Point3& b = poly[(i + 1) % poly.size()];
    n.x += (a.y - b.y) * (a.z + b.z);
    n.y += (a.z - b.z) * (a.x + b.x);
    n.z += (a.x - b.x) * (a.y + b.y);
  }
  return n;
}

}  // namespace detail

namespace detail {

// Structured disk triangulation of a face: one triangular patch per cycle
// edge, spanned between the edge polyline and the boundary centroid. Rows
// shrink by one point toward the centroid, so the grid stays well-shaped for
// any edge resolution, and congruent faces produce congruent seeds.
inline FaceMesh seed_face_patches(
    const std::vector<std::vector<Point3>>& edge_polylines) {
  std::vector<Point3> boundary;
  for (const auto& e : edge_polylines)
    boundary.insert(boundary.end(), e.begin(), e.end() - 1);
  Point3 centroid{};
  for (const auto& p : boundary) centroid += p;
  centroid = centroid / static_cast<double>(boundary.size());

  FaceMesh mesh;
  mesh.boundary_count = boundary.size();
  mesh.vertices = boundary;
  std::map<std::tuple<double, double, double>, int> index_of;
  for (std::size_t i = 0; i < boundary.size(); ++i)
    index_of[{boundary[i].x, boundary[i].y, boundary[i].z}] =
        static_cast<int>(i);
  const auto vertex = [&](const Point3& p) {
    const auto key = std::make_tuple(p.x, p.y, p.z);
    const auto it = index_of.find(key);
    if (it != index_of.end()) return it->second;
    mesh.vertices.push_back(p);
    const int idx = static_cast<int>(mesh.vertices.size()) - 1;
    index_of[key] = idx;
    return idx;
  };

  for (const auto& edge : edge_polylines) {
    const std::size_t m = edge.size() - 1;  // segments
    const auto along = [&](double frac) {
      if (frac <= 0.0) return edge[0];
      if (frac >= static_cast<double>(m)) return edge[m];
      const std::size_t i0 = std::min(static_cast<std::size_t>(frac), m - 1);
      const double t = frac - static_cast<double>(i0);
      return edge[i0] + t * (edge[i0 + 1] - edge[i0]);
    };
    const auto row_point = [&](std::size_t j, std::size_t i) {
      const std::size_t n = m + 1 - j;  // points in row j
      if (j == 0) return edge[i];
      if (n == 1) return centroid;
      const double frac = static_cast<double>(i) * static_cast<double>(m) /
                          static_cast<double>(n - 1);
      const double t = static_cast<double>(j) / static_cast<double>(m);
      const Point3 base = along(frac);
      return base + t * (centroid - base);
    };
    std::vector<int> prev(m + 1);
    for (std::size_t i = 0; i <= m; ++i) prev[i] = vertex(edge[i]);
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t n = m + 1 - j;
      std::vector<int> cur(n);
      for (std::size_t i = 0; i < n; ++i) cur[i] = vertex(row_point(j, i));
      for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
        mesh.triangles.push_back({prev[i], prev[i + 1], cur[std::min(i, n - 1)]});
        if (i + 1 < n)
          mesh.triangles.push_back({prev[i + 1], cur[i + 1], cur[i]});
      }
      prev = std::move(cur);
    }
  }
  return mesh;
}

}  // namespace detail

struct MeshOptions {
  std::size_t resolution = 64;  // samples per edge
  int relax_max_iter = 2000;
  double relax_eps = 1e-7;
  double weld_tol = 1e-6;
};

// Realizes a solution as a closed triangle mesh: arc edges from the propagated
// half-tangents, one relaxed disk per face, all welded along shared samples.
inline CellMesh build_cell_mesh(const CellSolution& solution,
                                const MeshOptions& opt = MeshOptions{}) {
  const FirstOrderCell cell = builtin_e2();
  const PointGroup group = cell_point_group(solution.mode);
  const HalfTangentAssignment assignment =
      propagate_halftangents(cell, solution, group);
  const Point3 center = cell.center();

  // Arc samples per undirected edge, endpoints snapped to the exact node
  // coordinates so shared corners weld bit-exactly.
  std::map<std::pair<int, int>, std::vector<Point3>> edge_samples;
  for (const auto& [i, j] : cell.edges) {
    const ArcEdge arc =
        arc_edge(cell.node(i), cell.node(j), UnitVec3(assignment.at(i, j), 1e-9),
                 UnitVec3(assignment.at(j, i), 1e-9), opt.resolution);
    std::vector<Point3> samples = arc.samples;
    samples.front() = cell.node(i);
    samples.back() = cell.node(j);
    edge_samples[{i, j}] = std::move(samples);
  }

  struct FaceJob {
    std::vector<std::vector<Point3>> edge_polylines;
    std::vector<Point3> boundary;
    FaceMesh mesh;
    std::vector<double> trace;
    std::string name;
  };
  std::vector<FaceJob> jobs(cell.faces.size());
  int quad_count = 0, hex_count = 0;
  for (std::size_t f = 0; f < cell.faces.size(); ++f) {
    const Face& face = cell.faces[f];
    std::vector<int> cycle = face.cycle;
    const auto polylines_for = [&](const std::vector<int>& cyc) {
      std::vector<std::vector<Point3>> out;
      for (std::size_t c = 0; c < cyc.size(); ++c) {
        const int u = cyc[c];
        const int v = cyc[(c + 1) % cyc.size()];
        std::vector<Point3> part =
            u < v ? edge_samples.at({u, v}) : edge_samples.at({v, u});
        if (u > v) std::reverse(part.begin(), part.end());
        out.push_back(std::move(part));
      }
      return out;
    };
    auto polylines = polylines_for(cycle);
    std::vector<Point3> boundary;
    for (const auto& part : polylines)
      boundary.insert(boundary.end(), part.begin(), part.end() - 1);
    const Vec3 nrm = detail::newell_normal(boundary);
    Point3 centroid{};
    for (const auto& p : boundary) centroid += p;
    centroid = centroid / static_cast<double>(boundary.size());
    if (dot(nrm, centroid - center) < 0.0) {
      std::reverse(cycle.begin(), cycle.end());
      polylines = polylines_for(cycle);
      boundary.clear();
      for (const auto& part : polylines)
        boundary.insert(boundary.end(), part.begin(), part.end() - 1);
    }
    jobs[f].edge_polylines = std::move(polylines);
    jobs[f].boundary = std::move(boundary);
    jobs[f].name = face.kind == FaceKind::quad
                       ? "quad" + std::to_string(++quad_count)
                       : "hex" + std::to_string(++hex_count);
  }

  detail::parallel_for(jobs.size(), [&](std::size_t f) {
    auto& job = jobs[f];
    job.mesh = relax_face(job.boundary,
                          detail::seed_face_patches(job.edge_polylines),
                          opt.relax_max_iter, opt.relax_eps, &job.trace);
  });

  CellMesh out{solution, {}, {}, {}, 0.0};
  detail::WeldMap weld(&out.vertices, opt.weld_tol);
  for (auto& job : jobs) {
    MeshFaceInfo info;
    info.name = job.name;
    info.triangle_begin = out.triangles.size();
    std::vector<int> remap(job.mesh.vertices.size());
    for (std::size_t i = 0; i < job.mesh.vertices.size(); ++i)
      remap[i] = weld.insert(job.mesh.vertices[i]);
    for (const auto& t : job.mesh.triangles)
      out.triangles.push_back({remap[static_cast<std::size_t>(t[0])],
                               remap[static_cast<std::size_t>(t[1])],
                               remap[static_cast<std::size_t>(t[2])]});
    info.triangle_end = out.triangles.size();
    info.area = job.mesh.area();
    info.area_trace = std::move(job.trace);
    Point3 centroid{};
    for (const auto& p : job.boundary) centroid += p;
    info.centroid = centroid / static_cast<double>(job.boundary.size());
    out.faces.push_back(std::move(info));
  }
  out.weld_residual = weld.worst;

  // Watertight and consistently oriented: every directed edge used once, and
  // its reverse used once.
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : out.triangles)
    for (int c = 0; c < 3; ++c) {
      const int a = t[static_cast<std::size_t>(c)];
      const int b = t[static_cast<std::size_t>((c + 1) % 3)];
      ++directed[{a, b}];
    }
  for (const auto& [e, uses] : directed) {
    const auto rev = directed.find({e.second, e.first});
    if (uses != 1 || rev == directed.end() || rev->second != 1) {
      std::ostringstream msg;
      const Point3& pa = out.vertices[static_cast<std::size_t>(e.first)];
      msg << "build_cell_mesh: weld failure near (" << pa.x << ", " << pa.y
          << ", " << pa.z << ")";
      throw mesh_error(msg.str());
    }
  }
  return out;
}

struct TilingMesh {
  CellMesh base;
  std::vector<Vec3> offsets;
  std::vector<std::pair<int, int>> adjacency;  // indices into offsets
};

// Translated copies of the cell mesh on the lattice, `counts` cells along each
// basis vector. Verifies that every face-neighbor pair inside the block shares
// a face within `tol`.
inline TilingMesh tile_box(CellMesh cellmesh, const Lattice& lattice,
                           std::array<int, 3> counts, double tol = 1e-6) {
  for (int c : counts)
    if (c < 1) throw std::invalid_argument("tile_box: counts must be >= 1");
  TilingMesh tiling{std::move(cellmesh), {}, {}};
  for (int i = 0; i < counts[0]; ++i)
    for (int j = 0; j < counts[1]; ++j)
      for (int k = 0; k < counts[2]; ++k)
        tiling.offsets.push_back(lattice.basis[0] * i + lattice.basis[1] * j +
                                 lattice.basis[2] * k);

  // Vertex set per face of the base mesh.
  const auto face_points = [&](const MeshFaceInfo& f) {
    std::vector<Point3> pts;
    std::vector<char> seen(tiling.base.vertices.size(), 0);
    for (std::size_t t = f.triangle_begin; t < f.triangle_end; ++t)
      for (int c = 0; c < 3; ++c) {
        const int v = tiling.base.triangles[t][static_cast<std::size_t>(c)];
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          pts.push_back(tiling.base.vertices[static_cast<std::size_t>(v)]);
        }
      }
    return pts;
  };
  std::vector<std::vector<Point3>> signatures;
  for (const auto& f : tiling.base.faces) signatures.push_back(face_points(f));

  // Symmetric point-set distance between two translated faces.
  const auto face_gap = [](const std::vector<Point3>& pa, const Vec3& oa,
                           const std::vector<Point3>& pb, const Vec3& ob) {
    double worst = 0.0;
    const auto one_sided = [&](const std::vector<Point3>& from, const Vec3& of,
                               const std::vector<Point3>& to, const Vec3& ot) {
      for (const auto& p : from) {
        const Point3 q = p + of;
        double best = 1e30;
        for (const auto& r : to) best = std::min(best, distance(q, r + ot));
        worst = std::max(worst, best);
      }
    };
    one_sided(pa, oa, pb, ob);
    one_sided(pb, ob, pa, oa);
    return worst;
  };

  for (std::size_t a = 0; a < tiling.offsets.size(); ++a)
    for (std::size_t b = a + 1; b < tiling.offsets.size(); ++b) {
      const Vec3 diff = tiling.offsets[b] - tiling.offsets[a];
      bool neighbor = false;
      for (const auto& t : lattice.face_translations)
        if (near(diff, t, 1e-9)) neighbor = true;
      if (!neighbor) continue;

      double best = 1e30;
      for (std::size_t fa = 0; fa < signatures.size(); ++fa)
        for (std::size_t fb = 0; fb < signatures.size(); ++fb) {
          if (signatures[fa].size() != signatures[fb].size()) continue;
          const Point3 ca = tiling.base.faces[fa].centroid + tiling.offsets[a];
          const Point3 cb = tiling.base.faces[fb].centroid + tiling.offsets[b];
          if (distance(ca, cb) > 0.5) continue;
          best = std::min(best, face_gap(signatures[fa], tiling.offsets[a],
                                         signatures[fb], tiling.offsets[b]));
        }
      if (best > tol)
        throw mesh_error("tile_box: neighbor cells " + std::to_string(a) +
                         " and " + std::to_string(b) +
                         " do not share a face within tolerance");
      tiling.adjacency.push_back({static_cast<int>(a), static_cast<int>(b)});
    }
  return tiling;
}

namespace detail {

inline void write_obj_object(std::ostream& os, const CellMesh& mesh,
                             const Vec3& offset, const std::string& name,
                             int& vertex_base) {
  os << "o " << name << "\n";
  for (const auto& p : mesh.vertices)
    os << "v " << fmt17(p.x + offset.x) << " " << fmt17(p.y + offset.y) << " "
       << fmt17(p.z + offset.z) << "\n";
  for (const auto& t : mesh.triangles)
    os << "f " << (t[0] + 1 + vertex_base) << " " << (t[1] + 1 + vertex_base)
       << " " << (t[2] + 1 + vertex_base) << "\n";
  vertex_base += static_cast<int>(mesh.vertices.size());
}

inline void write_obj_header(std::ostream& os, const CellSolution& s) {
  os << "# solution " << s.name << "\n";
  os << "# a = (" << fmt17(s.a.x()) << ", " << fmt17(s.a.y()) << ", "
     << fmt17(s.a.z()) << ")\n";
  os << "# phi = " << fmt17(s.euler.phi) << ", theta = " << fmt17(s.euler.theta)
     << "\n";
}

}  // namespace detail

inline void write_obj(std::ostream& os, const CellMesh& mesh) {
  detail::write_obj_header(os, mesh.solution);
  int base = 0;
  detail::write_obj_object(os, mesh, Vec3{}, mesh.solution.name, base);
}

inline void write_obj(std::ostream& os, const TilingMesh& tiling) {
  detail::write_obj_header(os, tiling.base.solution);
  int base = 0;
  for (std::size_t i = 0; i < tiling.offsets.size(); ++i)
    detail::write_obj_object(os, tiling.base, tiling.offsets[i],
                             tiling.base.solution.name + "_" +
                                 std::to_string(i),
                             base);
}

}  // namespace softtiler

#endif  // SOFTTILER_REALIZE_HPP_
