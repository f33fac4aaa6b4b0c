// The extended edge-bending pipeline: enumerate complete softening-equation
// systems, solve them over the sphere, combine with planar-face constraints,
// deduplicate modulo the nodal-set stabilizer, classify softness and
// standardness, and produce the catalogue, the equal-angle and geodesic
// special solutions, and one-parameter families.

#ifndef SOFTTILER_EEB_HPP_
#define SOFTTILER_EEB_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "softtiler/cell.hpp"
#include "softtiler/group.hpp"
#include "softtiler/solution_set.hpp"
#include "softtiler/sphere.hpp"
#include "softtiler/vec.hpp"

namespace softtiler {

// A set of antipodality equations u_i . u_j = -1 over nodal indices 1..4.
struct SofteningSystem {
  std::vector<std::pair<int, int>> pairs;  // i < j

  bool operator==(const SofteningSystem& o) const { return pairs == o.pairs; }
};

namespace detail {

inline bool covers_all_vertex_sets(const std::vector<std::pair<int, int>>& pairs,
                                   const NodalStructure& ns) {
  for (const auto& vs : ns.vertex_sets) {
    bool covered = false;
    for (const auto& [i, j] : pairs) {
      const bool has_i = std::find(vs.begin(), vs.end(), i) != vs.end();
      const bool has_j = std::find(vs.begin(), vs.end(), j) != vs.end();
      if (has_i && has_j) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

// u_i . u_j = -1 forces u_j = -u_i, so a system is consistent only if sign
// propagation over its pair graph never contradicts itself (no odd cycle).
inline bool sign_consistent(const std::vector<std::pair<int, int>>& pairs) {
  std::array<int, 5> sign{};  // 0 unknown, +-1 assigned; indices 1..4
  for (int seed = 1; seed <= 4; ++seed) {
    if (sign[static_cast<std::size_t>(seed)] != 0) continue;
    sign[static_cast<std::size_t>(seed)] = 1;
    std::vector<int> stack{seed};
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      for (const auto& [i, j] : pairs) {
        if (i != cur && j != cur) continue;
        const int other = i == cur ? j : i;
        const int want = -sign[static_cast<std::size_t>(cur)];
        int& s = sign[static_cast<std::size_t>(other)];
        if (s == 0) {
          s = want;
          stack.push_back(other);
        } else if (s != want) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace detail

// All minimal complete softening systems: consistent sets of equations
// touching every vertex set, with no complete proper subset.
inline std::vector<SofteningSystem> enumerate_complete_systems(
    const NodalStructure& ns) {
  std::vector<std::pair<int, int>> all_pairs;
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) all_pairs.push_back({i, j});

  const auto subset_pairs = [&](unsigned mask) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t b = 0; b < all_pairs.size(); ++b)
      if (mask & (1u << b)) out.push_back(all_pairs[b]);
    return out;
  };

  std::vector<unsigned> complete_masks;
  for (unsigned mask = 1; mask < (1u << all_pairs.size()); ++mask) {
    const auto pairs = subset_pairs(mask);
    if (detail::covers_all_vertex_sets(pairs, ns)) complete_masks.push_back(mask);
  }

  std::vector<SofteningSystem> systems;
  for (unsigned mask : complete_masks) {
    const auto pairs = subset_pairs(mask);
    if (!detail::sign_consistent(pairs)) continue;
    bool minimal = true;
    for (unsigned sub : complete_masks) {
      if (sub != mask && (sub & mask) == sub) {
        minimal = false;
        break;
      }
    }
    if (minimal) systems.push_back(SofteningSystem{pairs});
  }
  return systems;
}

// Intersection of the antipodality loci of all pairs in the system.
inline SolutionSet solve_system(const SofteningSystem& sys,
                                const NodalTransforms& transforms) {
  SolutionSet acc = SolutionSet::full_sphere();
  for (const auto& [i, j] : sys.pairs) {
    const Orthogonal3 m =
        transforms.by_index(j).transposed() * transforms.by_index(i);
    acc = intersect(acc, antipodal_constraint(m));
  }
  return acc;
}

// A cell is soft at the node iff every vertex set contains an antipodal pair.
inline bool is_soft(const std::array<Vec3, 4>& nodal,
                    const std::array<std::array<int, 3>, 4>& vertex_sets,
                    double tol = 1e-9) {
  for (const auto& vs : vertex_sets) {
    bool has_pair = false;
    for (int a = 0; a < 3 && !has_pair; ++a)
      for (int b = a + 1; b < 3 && !has_pair; ++b) {
        const std::size_t i = static_cast<std::size_t>(vs[static_cast<std::size_t>(a)] - 1);
        const std::size_t j = static_cast<std::size_t>(vs[static_cast<std::size_t>(b)] - 1);
        if (dot(nodal[i], nodal[j]) <= -1.0 + tol) has_pair = true;
      }
    if (!has_pair) return false;
  }
  return true;
}

// Standard: the four half-tangents span a single line (direction matrix has
// rank 1 at the 1e-9 singular-value threshold).
inline bool is_standard(const std::array<Vec3, 4>& nodal, double tol = 1e-9) {
  Eigen::MatrixXd m(4, 3);
  for (int i = 0; i < 4; ++i) {
    const Vec3& v = nodal[static_cast<std::size_t>(i)];
    m(i, 0) = v.x;
    m(i, 1) = v.y;
    m(i, 2) = v.z;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return rank == 1;
}

// Representative faces at node 1 with the transforms of the half-tangents
// they constrain. Remaining faces follow by symmetry.
struct FaceConstraint {
  std::string name;
  UnitVec3 normal;
  std::vector<Orthogonal3> transforms;
};

inline std::vector<FaceConstraint> face_constraints() {
  const double q = 2.0 / std::sqrt(6.0);
  const double r = std::sqrt(2.0) / std::sqrt(6.0);
  const Orthogonal3 id(Mat3::identity());
  return {
      {"quad", UnitVec3({0, 0, 1}), {id, transform_b()}},
      {"hex1", UnitVec3({0, q, r}), {id, transform_c()}},
      {"hex2", UnitVec3({q, 0, r}), {transform_b(), transform_c()}},
  };
}

// Faces kept planar by the fundamental vector `a` (all constraint rows of the
// face vanish within tol).
inline std::vector<std::string> classify_planar_faces(const UnitVec3& a,
                                                      SymmetryMode /*mode*/,
                                                      double tol = 1e-9) {
  std::vector<std::string> out;
  for (const auto& fc : face_constraints()) {
    bool planar = true;
    for (const auto& t : fc.transforms) {
      if (std::abs(dot(t.transposed()(fc.normal), a.vec())) > tol) {
        planar = false;
        break;
      }
    }
    if (planar) out.push_back(fc.name);
  }
  return out;
}

struct NamedCircle {
  std::string name;
  SolutionSet locus;
};

// The great circles of the constraint structure: one per softening system
// (the circle solved by its fundamental-vector equation) and one per
// planar-face representative. The hex2 circle is the locus derived by
// substitution; it does not coincide with the face normal itself.
inline std::vector<NamedCircle> named_circles() {
  std::vector<NamedCircle> out;
  out.push_back({"abcd", antipodal_constraint(transform_b())});
  out.push_back({"acbd", antipodal_constraint(transform_c())});
  out.push_back({"adbc", antipodal_constraint(
                             transform_c().transposed() * transform_b())});
  for (const auto& fc : face_constraints())
    out.push_back({fc.name, planar_face_constraint(fc.normal, fc.transforms)});
  return out;
}

struct CellSolution {
  std::string name;  // table label when recognized, otherwise synthetic
  UnitVec3 a;
  EulerAngles euler;
  std::array<Vec3, 4> nodal;
  SymmetryMode mode;
  std::vector<std::string> member_circles;
  bool soft = false;
  bool standard = false;
  std::vector<std::string> planar_faces;
  double min_pair_dot = 1.0;
};

inline CellSolution classify_point(const UnitVec3& a, SymmetryMode mode) {
  const NodalTransforms t = paper_matrices(mode);
  const NodalStructure ns = reference_nodal_structure(builtin_e2());
  CellSolution s{.name = "",
                 .a = a,
                 .euler = euler_from_unit(a),
                 .nodal = t.nodal_set(a),
                 .mode = mode,
                 .member_circles = {},
                 .soft = false,
                 .standard = false,
                 .planar_faces = {},
                 .min_pair_dot = 1.0};
  s.soft = is_soft(s.nodal, ns.vertex_sets);
  s.standard = is_standard(s.nodal);
  s.planar_faces = classify_planar_faces(a, mode);
  for (const auto& nc : named_circles())
    if (nc.locus.kind() == LocusKind::great_circle && nc.locus.contains(a))
      s.member_circles.push_back(nc.name);
  for (double p : detail::pairwise_products(s.nodal))
    s.min_pair_dot = std::min(s.min_pair_dot, p);
  return s;
}

// Known table coordinates, used to attach the conventional labels.
inline std::vector<std::pair<std::string, Vec3>> known_points() {
  const double h = 1.0 / std::sqrt(2.0);
  const double s6 = 1.0 / std::sqrt(6.0);
  return {
      {"e2", {1, 0, 0}},
      {"f2", {h, h, 0}},
      {"g2", {h, -h, 0}},
      {"h2", {0.5, -0.5, h}},
      {"i2", {std::sqrt(3.0) / 2.0, std::sqrt(3.0) / 6.0, s6}},
  };
}

inline std::optional<std::string> known_label(const Vec3& a, double tol = 1e-7) {
  for (const auto& [name, p] : known_points())
    if (near(canonical_sign(a), p, tol)) return name;
  return std::nullopt;
}

// Orthogonal maps preserving the polyhedral nodal set; solutions related by
// one of these describe the same tiling.
inline PointGroup dedup_group() {
  const PointGroup big = closure(
      {transform_b(), transform_c(), transform_d1(), swap_xy(), inversion()},
      96);
  const NodalStructure ns = reference_nodal_structure(builtin_e2());
  return nodal_stabilizer(big, ns.directions);
}

// Two solutions are equivalent when a dedup-group element maps one nodal set
// onto the other (as sets of four directions).
inline bool equivalent_solutions(const std::array<Vec3, 4>& na,
                                 const std::array<Vec3, 4>& nb,
                                 const PointGroup& group, double tol = 1e-9) {
  for (const auto& g : group.elements) {
    bool used[4] = {false, false, false, false};
    bool all = true;
    for (const auto& v : na) {
      const Vec3 image = g(v);
      bool matched = false;
      for (int j = 0; j < 4 && !matched; ++j)
        if (!used[j] && near(image, nb[static_cast<std::size_t>(j)], tol)) {
          used[j] = true;
          matched = true;
        }
      if (!matched) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

struct Catalogue {
  SymmetryMode mode;
  bool require_soft = false;
  bool require_planar = false;
  std::size_t dedup_group_order = 0;
  std::vector<CellSolution> solutions;
};

namespace detail {

inline void verify_catalogue(const Catalogue& cat) {
  const NodalStructure ns = reference_nodal_structure(builtin_e2());
  for (const auto& s : cat.solutions) {
    if (cat.require_soft && !is_soft(s.nodal, ns.vertex_sets))
      throw solver_error("catalogue: solution fails softness re-check");
    if (cat.require_planar && s.planar_faces.empty())
      throw solver_error("catalogue: solution fails planar-face re-check");
    if (s.soft != is_soft(s.nodal, ns.vertex_sets) ||
        s.standard != is_standard(s.nodal))
      throw solver_error("catalogue: stored flags disagree with re-check");
    for (const auto& fc : face_constraints()) {
      const bool claimed = std::find(s.planar_faces.begin(),
                                     s.planar_faces.end(),
                                     fc.name) != s.planar_faces.end();
      bool holds = true;
      for (const auto& t : fc.transforms)
        if (std::abs(dot(t.transposed()(fc.normal), s.a.vec())) > 1e-9)
          holds = false;
      if (claimed != holds)
        throw solver_error("catalogue: planar-face claim disagrees");
    }
  }
}

}  // namespace detail

// Runs the pipeline for one symmetry mode. Candidates are the isolated system
// solutions plus all pairwise intersections among system loci and constraint
// circles; they are filtered by the requested flags and deduplicated modulo
// the nodal-set stabilizer.
inline Catalogue run_catalogue(SymmetryMode mode, bool require_planar,
                               bool require_soft) {
  const FirstOrderCell cell = builtin_e2();
  const NodalStructure ns = reference_nodal_structure(cell);
  const NodalTransforms transforms = paper_matrices(mode);

  std::vector<SolutionSet> loci;
  for (const auto& sys : enumerate_complete_systems(ns))
    loci.push_back(solve_system(sys, transforms));
  for (const auto& fc : face_constraints())
    loci.push_back(planar_face_constraint(fc.normal, fc.transforms));

  std::vector<Vec3> candidates;
  const auto push_candidate = [&](const Vec3& p) {
    const Vec3 c = canonical_sign(p);
    for (const auto& q : candidates)
      if (near(c, q, 1e-9)) return;
    candidates.push_back(c);
  };
  for (const auto& l : loci)
    if (l.kind() == LocusKind::antipodal_pair) push_candidate(l.point());
  for (std::size_t i = 0; i < loci.size(); ++i)
    for (std::size_t j = i + 1; j < loci.size(); ++j) {
      const SolutionSet meet = intersect(loci[i], loci[j]);
      if (meet.kind() == LocusKind::antipodal_pair)
        push_candidate(meet.point());
    }

  std::vector<CellSolution> kept;
  for (const auto& p : candidates) {
    CellSolution s = classify_point(UnitVec3(p, 1e-9), mode);
    if (require_soft && !s.soft) continue;
    if (require_planar && s.planar_faces.empty()) continue;
    if (const auto label = known_label(p)) s.name = *label;
    kept.push_back(std::move(s));
  }

  // Deduplicate; labeled candidates take precedence as representatives.
  std::stable_sort(kept.begin(), kept.end(),
                   [](const CellSolution& a, const CellSolution& b) {
                     if (a.name.empty() != b.name.empty())
                       return !a.name.empty();
                     return lex_less(b.a.vec(), a.a.vec());
                   });
  const PointGroup dedup = dedup_group();
  Catalogue cat{mode, require_soft, require_planar, dedup.order(), {}};
  for (auto& s : kept) {
    bool duplicate = false;
    for (const auto& have : cat.solutions)
      if (equivalent_solutions(s.nodal, have.nodal, dedup)) {
        duplicate = true;
        break;
      }
    if (!duplicate) cat.solutions.push_back(std::move(s));
  }
  int unnamed = 0;
  for (auto& s : cat.solutions)
    if (s.name.empty()) s.name = "sol-" + std::to_string(++unnamed);

  std::sort(cat.solutions.begin(), cat.solutions.end(),
            [](const CellSolution& a, const CellSolution& b) {
              return lex_less(a.a.vec(), b.a.vec());
            });
  detail::verify_catalogue(cat);
  return cat;
}

// The equal-angle cell: octahedral solutions with all six tangent products
// equal, restricted to the quad-planarity circle, canonical representative.
inline CellSolution kelvin_solution() {
  const NodalTransforms transforms = paper_matrices(SymmetryMode::octahedral);
  const SolutionSet quad =
      planar_face_constraint(UnitVec3({0, 0, 1}),
                             {Orthogonal3(Mat3::identity()), transform_b()});
  std::vector<Vec3> matches;
  for (const auto& root : equal_angle_solve(transforms))
    if (quad.contains(root)) matches.push_back(root);
  if (matches.empty())
    throw solver_error("kelvin_solution: no equal-angle root on quad circle");
  Vec3 best = matches.front();
  for (const auto& m : matches)
    if (lex_less(best, m)) best = m;
  CellSolution s = classify_point(UnitVec3(best, 1e-9),
                                  SymmetryMode::octahedral);
  s.name = "kelvin";
  const auto products = detail::pairwise_products(s.nodal);
  for (double p : products)
    if (std::abs(p + 1.0 / 3.0) > 1e-10)
      throw solver_error("kelvin_solution: tangent products are not -1/3");
  return s;
}

// The isolated cell at the intersection of the geodesic through the g2 and i2
// points with the hex1 planarity circle.
inline CellSolution pd_solution() {
  const double h = 1.0 / std::sqrt(2.0);
  const UnitVec3 g2({h, -h, 0});
  const UnitVec3 i2(
      {std::sqrt(3.0) / 2.0, std::sqrt(3.0) / 6.0, 1.0 / std::sqrt(6.0)});
  const SolutionSet geodesic = geodesic_through(g2, i2);
  SolutionSet hex1 = SolutionSet::empty();
  for (const auto& fc : face_constraints())
    if (fc.name == "hex1")
      hex1 = planar_face_constraint(fc.normal, fc.transforms);
  const SolutionSet meet = intersect(geodesic, hex1);
  if (meet.kind() != LocusKind::antipodal_pair)
    throw solver_error("pd_solution: geodesic and hex1 circle do not meet");
  CellSolution s = classify_point(UnitVec3(meet.point(), 1e-9),
                                  SymmetryMode::tetrahedral);
  s.name = "pd";
  return s;
}

// In-plane orthonormal frame fixing the parameter origin of a circle sweep:
// the +x axis for the equator, a deterministic in-plane axis otherwise. With
// `arc_from` the origin is that point; with `arc_to` as well, the second axis
// is oriented so the sweep reaches `arc_to` at a positive parameter below pi.
inline std::pair<Vec3, Vec3> family_basis(
    const SolutionSet& circle, std::optional<UnitVec3> arc_from = std::nullopt,
    std::optional<UnitVec3> arc_to = std::nullopt) {
  if (circle.kind() != LocusKind::great_circle)
    throw std::invalid_argument("family_basis: locus is not a great circle");
  const Vec3 n = circle.normal();
  Vec3 e1;
  if (arc_from) {
    if (std::abs(dot(n, arc_from->vec())) > 1e-9)
      throw std::invalid_argument("family_basis: point is not on the circle");
    e1 = arc_from->vec();
  } else if (std::abs(n.z) > 1.0 - 1e-12) {
    e1 = {1, 0, 0};
  } else {
    e1 = normalized(cross({0, 0, 1}, n));
  }
  Vec3 e2 = cross(n, e1);
  if (arc_to) {
    if (std::abs(dot(n, arc_to->vec())) > 1e-9)
      throw std::invalid_argument("family_basis: point is not on the circle");
    if (dot(e2, arc_to->vec()) < 0.0) e2 = -e2;
  }
  return {e1, e2};
}

// Uniformly parameterized sweep of a great circle, with full classification
// per sample. With both arc endpoints given, the sweep covers exactly the
// shorter arc from `arc_from` to `arc_to`, endpoints included.
inline std::vector<std::pair<double, CellSolution>> family(
    const SolutionSet& circle, std::size_t samples, SymmetryMode mode,
    std::optional<UnitVec3> arc_from = std::nullopt,
    std::optional<UnitVec3> arc_to = std::nullopt) {
  if (samples < 2) throw std::invalid_argument("family: samples < 2");
  const auto [e1, e2] = family_basis(circle, arc_from, arc_to);

  const bool closed = !arc_to.has_value();
  double arc = 2.0 * std::numbers::pi;
  if (arc_to) {
    arc = std::atan2(dot(arc_to->vec(), e2), dot(arc_to->vec(), e1));
    if (arc <= 0.0) throw std::invalid_argument("family: empty arc");
  }
  std::vector<std::pair<double, CellSolution>> out;
  out.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t =
        closed ? arc * static_cast<double>(k) / static_cast<double>(samples)
               : arc * static_cast<double>(k) /
                     static_cast<double>(samples - 1);
    const Vec3 p = std::cos(t) * e1 + std::sin(t) * e2;
    CellSolution s = classify_point(UnitVec3::normalize(p), mode);
    if (const auto label = known_label(p)) s.name = *label;
    out.push_back({t, std::move(s)});
  }
  return out;
}

}  // namespace softtiler

#endif  // SOFTTILER_EEB_HPP_
