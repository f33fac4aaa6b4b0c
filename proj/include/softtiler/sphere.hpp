// Constraint solving on the unit sphere: antipodality ("softening") equations
// reduced to null spaces of small matrices, linear planar-face constraints,
// exact intersection of solution loci, geodesics, the equal-angle system, and
// a grid-scan oracle used to cross-validate every analytic locus.

#ifndef SOFTTILER_SPHERE_HPP_
#define SOFTTILER_SPHERE_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "softtiler/group.hpp"
#include "softtiler/solution_set.hpp"
#include "softtiler/vec.hpp"

namespace softtiler {

struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Null space of the row span, classified by dimension. Rank decisions use
// singular values against a fixed 1e-9 threshold; the matrices seen here have
// exact algebraic entries with well-separated spectra.
inline SolutionSet classify_null_space(const std::vector<Vec3>& rows,
                                       double sv_tol = 1e-9) {
  if (rows.empty()) return SolutionSet::full_sphere();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    a(static_cast<Eigen::Index>(i), 0) = rows[i].x;
    a(static_cast<Eigen::Index>(i), 1) = rows[i].y;
    a(static_cast<Eigen::Index>(i), 2) = rows[i].z;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > sv_tol) ++rank;
  const Eigen::Matrix3d v = svd.matrixV();
  const auto column = [&](int c) {
    return Vec3{v(0, c), v(1, c), v(2, c)};
  };
  switch (3 - rank) {
    case 0: return SolutionSet::empty();
    case 1: return SolutionSet::antipodal_pair(column(2));
    case 2: return SolutionSet::great_circle(column(0));
    default: return SolutionSet::full_sphere();
  }
}

}  // namespace detail

// Solutions of u . (M u) = -1 over unit u, i.e. the null space of M + I.
inline SolutionSet antipodal_constraint(const Orthogonal3& m) {
  const Mat3 s = m.mat() + Mat3::identity();
  return detail::classify_null_space({s.row(0), s.row(1), s.row(2)});
}

// Solutions of (T_i a) . u_face = 0 for every transform in the list, i.e. the
// null space of the rows T_i^T u_face. Pass the identity when the fundamental
// vector itself is involved.
inline SolutionSet planar_face_constraint(
    const UnitVec3& face_normal, const std::vector<Orthogonal3>& transforms) {
  if (transforms.empty())
    throw std::invalid_argument("planar_face_constraint: no transforms");
  std::vector<Vec3> rows;
  rows.reserve(transforms.size());
  for (const auto& t : transforms) rows.push_back(t.transposed()(face_normal));
  return detail::classify_null_space(rows);
}

inline SolutionSet intersect(const SolutionSet& s1, const SolutionSet& s2,
                             double tol = 1e-9) {
  using K = LocusKind;
  if (s1.kind() == K::empty || s2.kind() == K::empty)
    return SolutionSet::empty();
  if (s1.kind() == K::full_sphere) return s2;
  if (s2.kind() == K::full_sphere) return s1;
  if (s1.kind() == K::great_circle && s2.kind() == K::great_circle) {
    const Vec3 n1 = s1.normal(), n2 = s2.normal();
    if (std::abs(std::abs(dot(n1, n2)) - 1.0) < tol) return s1;
    return SolutionSet::antipodal_pair(cross(n1, n2));
  }
  if (s1.kind() == K::antipodal_pair && s2.kind() == K::antipodal_pair) {
    if (near(s1.point(), s2.point(), tol)) return s1;
    return SolutionSet::empty();
  }
  // Mixed circle/pair: the pair survives iff it lies on the circle.
  const SolutionSet& pair = s1.kind() == K::antipodal_pair ? s1 : s2;
  const SolutionSet& circle = s1.kind() == K::great_circle ? s1 : s2;
  if (std::abs(dot(circle.normal(), pair.point())) < tol) return pair;
  return SolutionSet::empty();
}

// Great circle through two non-parallel unit directions.
inline SolutionSet geodesic_through(const UnitVec3& u1, const UnitVec3& u2) {
  if (std::abs(dot(u1.vec(), u2.vec())) >= 1.0 - 1e-9)
    throw std::invalid_argument("geodesic_through: parallel directions");
  return SolutionSet::great_circle(cross(u1, u2));
}

// Deterministic spiral covering of the sphere.
inline std::vector<Vec3> fibonacci_sphere(std::size_t n) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) /
                               static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double t = golden * static_cast<double>(i);
    pts.push_back({r * std::cos(t), r * std::sin(t), z});
  }
  return pts;
}

// Grid points whose residual falls below a grid-adaptive threshold, in grid
// order. The threshold is tuned for residuals with O(1) curvature, so that
// accepted points lie within a few grid spacings of the residual's zero set.
inline std::vector<UnitVec3> brute_force_scan(
    const std::function<double(const Vec3&)>& residual, std::size_t grid_size) {
  if (grid_size < 1000)
    throw std::invalid_argument("brute_force_scan: grid_size < 1000");
  const double threshold = 16.0 / static_cast<double>(grid_size);
  std::vector<UnitVec3> hits;
  for (const Vec3& p : fibonacci_sphere(grid_size)) {
    if (residual(p) < threshold) hits.push_back(UnitVec3(p, 1e-9));
  }
  return hits;
}

// Greedy chaining of points closer than `radius` into connected clusters.
inline std::vector<std::vector<Vec3>> cluster_points(
    const std::vector<UnitVec3>& pts, double radius) {
  std::vector<std::vector<Vec3>> clusters;
  std::vector<char> assigned(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (assigned[i]) continue;
    std::vector<std::size_t> stack{i};
    assigned[i] = 1;
    std::vector<Vec3> cluster;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      cluster.push_back(pts[cur]);
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (!assigned[j] && distance(pts[cur], pts[j]) <= radius) {
          assigned[j] = 1;
          stack.push_back(j);
        }
    }
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

namespace detail {

inline std::array<double, 6> pairwise_products(const std::array<Vec3, 4>& n) {
  return {dot(n[0], n[1]), dot(n[0], n[2]), dot(n[0], n[3]),
          dot(n[1], n[2]), dot(n[1], n[3]), dot(n[2], n[3])};
}

inline double equal_angle_residual(const std::array<double, 6>& p) {
  double lo = p[0], hi = p[0];
  for (double v : p) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

inline void tangent_basis(const Vec3& a, Vec3& e1, Vec3& e2) {
  const Vec3 seed = std::abs(a.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  e1 = normalized(cross(seed, a));
  e2 = cross(a, e1);
}

}  // namespace detail

// All unit vectors (up to antipodality) for which the four nodal half-tangents
// {a, T_b a, T_c a, T_d a} meet at identical angles: every one of the six
// pairwise products equal. Multistart Gauss-Newton over a tangent-plane chart,
// polished until the product spread is below 1e-12.
inline std::vector<UnitVec3> equal_angle_solve(
    const NodalTransforms& transforms, std::size_t starts = 10000) {
  const auto spread_at = [&](const Vec3& a) {
    return detail::equal_angle_residual(
        detail::pairwise_products(transforms.nodal_set(a)));
  };
  // Five independent differences drive the 2-dof Gauss-Newton step.
  const auto residual_vec = [&](const Vec3& a, double* f) {
    const auto p = detail::pairwise_products(transforms.nodal_set(a));
    for (int i = 0; i < 5; ++i) f[i] = p[static_cast<std::size_t>(i) + 1] - p[0];
  };

  std::vector<UnitVec3> roots;
  const auto record = [&](const Vec3& a) {
    const Vec3 c = canonical_sign(a);
    for (const auto& r : roots)
      if (near(c, r, 1e-7)) return;
    roots.push_back(UnitVec3(c, 1e-9));
  };

  for (const Vec3& start : fibonacci_sphere(std::max<std::size_t>(starts, 1))) {
    Vec3 a = start;
    bool converged = false;
    for (int iter = 0; iter < 60; ++iter) {
      double f0[5];
      residual_vec(a, f0);
      if (spread_at(a) < 1e-13) {
        converged = true;
        break;
      }
      Vec3 e1, e2;
      detail::tangent_basis(a, e1, e2);
      const double h = 1e-7;
      double fp1[5], fm1[5], fp2[5], fm2[5];
      residual_vec(normalized(a + h * e1), fp1);
      residual_vec(normalized(a - h * e1), fm1);
      residual_vec(normalized(a + h * e2), fp2);
      residual_vec(normalized(a - h * e2), fm2);
      double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtf0 = 0, jtf1 = 0;
      for (int i = 0; i < 5; ++i) {
        const double j0 = (fp1[i] - fm1[i]) / (2 * h);
        const double j1 = (fp2[i] - fm2[i]) / (2 * h);
        jtj00 += j0 * j0;
        jtj01 += j0 * j1;
        jtj11 += j1 * j1;
        jtf0 += j0 * f0[i];
        jtf1 += j1 * f0[i];
      }
      const double det = jtj00 * jtj11 - jtj01 * jtj01;
      if (std::abs(det) < 1e-14) break;  // rank-deficient start, discard
      const double s0 = (-jtf0 * jtj11 + jtf1 * jtj01) / det;
      const double s1 = (-jtj00 * jtf1 + jtj01 * jtf0) / det;
      const double step = std::sqrt(s0 * s0 + s1 * s1);
      const double cap = 0.5;  // keep the chart valid
      const double scale = step > cap ? cap / step : 1.0;
      a = normalized(a + (s0 * scale) * e1 + (s1 * scale) * e2);
    }
    if (converged && spread_at(a) < 1e-12) record(a);
  }

  std::sort(roots.begin(), roots.end(),
            [](const UnitVec3& a, const UnitVec3& b) {
              return lex_less(a.vec(), b.vec());
            });
  return roots;
}

}  // namespace softtiler

#endif  // SOFTTILER_SPHERE_HPP_
