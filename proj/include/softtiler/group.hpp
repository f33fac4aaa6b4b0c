// Orthogonal transforms acting on edge half-tangents, the built-in nodal
// transform triple for each symmetry mode, and finite point-group machinery
// (closure by products, orbits, set stabilizers).

#ifndef SOFTTILER_GROUP_HPP_
#define SOFTTILER_GROUP_HPP_

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "softtiler/vec.hpp"

namespace softtiler {

class Orthogonal3 {
 public:
  explicit Orthogonal3(const Mat3& m, double tol = 1e-12) : m_(m) {
    if (!is_orthogonal(m, tol))
      throw std::invalid_argument("Orthogonal3: matrix is not orthogonal");
  }

  const Mat3& mat() const { return m_; }
  Vec3 operator()(const Vec3& v) const { return m_.apply(v); }
  Orthogonal3 transposed() const { return Orthogonal3(m_.transposed()); }
  Orthogonal3 operator*(const Orthogonal3& o) const {
    return Orthogonal3(m_ * o.m_, 1e-9);
  }
  double det() const { return m_.det(); }

 private:
  Mat3 m_;
};

enum class SymmetryMode { octahedral, tetrahedral };

inline const char* to_string(SymmetryMode m) {
  return m == SymmetryMode::octahedral ? "octahedral" : "tetrahedral";
}

namespace detail {
inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

inline Orthogonal3 transform_b() {
  return Orthogonal3(Mat3{{0, 1, 0, 1, 0, 0, 0, 0, -1}});
}

inline Orthogonal3 transform_c() {
  const double h = detail::kInvSqrt2;
  return Orthogonal3(Mat3{{-0.5, -0.5, h, -0.5, -0.5, -h, h, -h, 0}});
}

inline Orthogonal3 transform_d1() {
  const double h = detail::kInvSqrt2;
  return Orthogonal3(Mat3{{-0.5, -0.5, h, -0.5, -0.5, -h, -h, h, 0}});
}

inline Orthogonal3 transform_d2() {
  const double h = detail::kInvSqrt2;
  return Orthogonal3(Mat3{{-0.5, -0.5, -h, -0.5, -0.5, h, -h, h, 0}});
}

inline Orthogonal3 swap_xy() {
  return Orthogonal3(Mat3{{0, 1, 0, 1, 0, 0, 0, 0, 1}});
}

inline Orthogonal3 mirror_x() {
  return Orthogonal3(Mat3{{-1, 0, 0, 0, 1, 0, 0, 0, 1}});
}

inline Orthogonal3 reflect_z() {
  return Orthogonal3(Mat3{{1, 0, 0, 0, 1, 0, 0, 0, -1}});
}

inline Orthogonal3 inversion() {
  return Orthogonal3(Mat3{{-1, 0, 0, 0, -1, 0, 0, 0, -1}});
}

// The transforms generating the nodal set from the fundamental vector.
// Nodal indices are 1-based: 1 -> identity, 2 -> b, 3 -> c, 4 -> d.
struct NodalTransforms {
  SymmetryMode mode;
  std::array<Orthogonal3, 4> t;

  const Orthogonal3& by_index(int nodal_index) const {
    if (nodal_index < 1 || nodal_index > 4)
      throw std::out_of_range("NodalTransforms: nodal index");
    return t[static_cast<std::size_t>(nodal_index - 1)];
  }
  const Orthogonal3& b() const { return t[1]; }
  const Orthogonal3& c() const { return t[2]; }
  const Orthogonal3& d() const { return t[3]; }

  std::array<Vec3, 4> nodal_set(const Vec3& a) const {
    return {a, t[1](a), t[2](a), t[3](a)};
  }
};

inline NodalTransforms paper_matrices(SymmetryMode mode) {
  return NodalTransforms{
      mode,
      {Orthogonal3(Mat3::identity()), transform_b(), transform_c(),
       mode == SymmetryMode::octahedral ? transform_d1() : transform_d2()}};
}

struct PointGroup {
  std::vector<Orthogonal3> elements;
  std::vector<Orthogonal3> generators;

  std::size_t order() const { return elements.size(); }

  bool contains(const Mat3& m, double tol = 1e-9) const {
    for (const auto& e : elements)
      if (max_entry_diff(e.mat(), m) <= tol) return true;
    return false;
  }
};

// Breadth-first product closure with element matching at 1e-9. Throws if the
// closure exceeds `max_order` (the generators do not generate a finite group
// at this tolerance).
inline PointGroup closure(std::vector<Orthogonal3> generators,
                          std::size_t max_order) {
  if (max_order < 1) throw std::invalid_argument("closure: max_order < 1");
  PointGroup g;
  g.generators = generators;
  g.elements.push_back(Orthogonal3(Mat3::identity()));
  std::vector<std::size_t> frontier{0};
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (const auto& gen : generators) {
        const Orthogonal3 prod = g.elements[idx] * gen;
        if (!g.contains(prod.mat())) {
          g.elements.push_back(prod);
          if (g.elements.size() > max_order)
            throw std::runtime_error("closure: exceeded max_order " +
                                     std::to_string(max_order));
          next.push_back(g.elements.size() - 1);
        }
      }
    }
    frontier = std::move(next);
  }
  // Finite group closed under products of generators is closed under inverse;
  // sort for deterministic downstream iteration.
  std::sort(g.elements.begin(), g.elements.end(),
            [](const Orthogonal3& a, const Orthogonal3& b) {
              return mat_lex_less(a.mat(), b.mat());
            });
  return g;
}

// Subgroup of elements mapping the direction set onto itself (as a set).
inline PointGroup nodal_stabilizer(const PointGroup& group,
                                   const std::array<UnitVec3, 4>& directions,
                                   double tol = 1e-9) {
  PointGroup sub;
  sub.generators = group.generators;
  for (const auto& e : group.elements) {
    bool used[4] = {false, false, false, false};
    bool ok = true;
    for (const auto& d : directions) {
      const Vec3 image = e(d);
      bool matched = false;
      for (int j = 0; j < 4 && !matched; ++j) {
        if (!used[j] && near(image, directions[static_cast<std::size_t>(j)], tol)) {
          used[j] = true;
          matched = true;
        }
      }
      if (!matched) {
        ok = false;
        break;
      }
    }
    if (ok) sub.elements.push_back(e);
  }
  return sub;
}

// Three-fold rotation cycling the cubic axes of the cell frame, which are
// (1,1,0)/sqrt2, (1,-1,0)/sqrt2 and the z axis.
inline Orthogonal3 axis_cycle() {
  const double s = 1.0 / std::sqrt(2.0);
  const Mat3 u{{s, s, 0, s, -s, 0, 0, 0, 1}};
  const Mat3 p{{0, 0, 1, 1, 0, 0, 0, 1, 0}};
  return Orthogonal3(u.transposed() * (p * u), 1e-9);
}

// Point symmetries of the cell about its center: the full cubic group of
// order 48 for the octahedral mode, its order-24 tetrahedral subgroup (no
// axis mirrors, no edge two-folds) for the tetrahedral mode. Both act
// transitively on the 24 vertices.
inline PointGroup cell_point_group(SymmetryMode mode) {
  std::vector<Orthogonal3> gens{mirror_x(), transform_b(), axis_cycle()};
  if (mode == SymmetryMode::octahedral) gens.push_back(reflect_z());
  return closure(gens, 48);
}

inline std::vector<UnitVec3> orbit(const PointGroup& group, const UnitVec3& v,
                                   double tol = 1e-9) {
  std::vector<UnitVec3> out;
  for (const auto& e : group.elements) {
    const Vec3 image = e(v);
    bool seen = false;
    for (const auto& u : out)
      if (near(image, u, tol)) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(UnitVec3(image, 1e-9));
  }
  return out;
}

}  // namespace softtiler

#endif  // SOFTTILER_GROUP_HPP_
