// Edge curves interpolating prescribed endpoint half-tangents: straight
// segments, single circular arcs, and C1 biarcs as the fallback when one arc
// cannot match both tangents.

#ifndef SOFTTILER_ARC_HPP_
#define SOFTTILER_ARC_HPP_

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "softtiler/vec.hpp"

namespace softtiler {

struct arc_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EdgeCurveKind { straight, arc, biarc };

struct ArcSegment {
  Point3 center;
  double radius = 0.0;
  Vec3 plane_normal;  // travel is counterclockwise about this normal
  double sweep = 0.0;  // radians, in (0, 2 pi)
  Point3 start;
};

struct ArcEdge {
  EdgeCurveKind kind = EdgeCurveKind::straight;
  Point3 p, q;
  Vec3 tangent_p, tangent_q;       // inward half-tangents, as prescribed
  std::vector<ArcSegment> segments;  // empty for straight
  std::vector<Point3> samples;     // from p to q, size = resolution
};

namespace detail {

struct SingleArc {
  ArcSegment seg;
  Vec3 end_forward_tangent;
};

// Unique circle through `p` with forward tangent `t1`, ending at `q`.
// Degenerates (t1 parallel to the chord) are reported via the radius = 0
// sentinel so the caller can fall back.
inline bool solve_single_arc(const Point3& p, const Point3& q, const Vec3& t1,
                             SingleArc& out) {
  const Vec3 v = q - p;
  const Vec3 w = v - dot(v, t1) * t1;
  const double wn = norm(w);
  if (wn < 1e-12) return false;  // chord along the tangent
  const Vec3 n = w / wn;
  const double vn = dot(v, n);
  const double radius = norm2(v) / (2.0 * vn);
  const Point3 center = p + radius * n;
  const Vec3 m = normalized(cross(t1, n));
  const Vec3 u0 = (p - center) / radius;
  const Vec3 w0 = cross(m, u0);
  const Vec3 uq = (q - center) / radius;
  double sweep = std::atan2(dot(uq, w0), dot(uq, u0));
  if (sweep <= 0.0) sweep += 2.0 * std::numbers::pi;
  out.seg = {center, radius, m, sweep, p};
  out.end_forward_tangent =
      normalized(-std::sin(sweep) * u0 + std::cos(sweep) * w0);
  return true;
}

inline Point3 arc_point(const ArcSegment& s, double theta) {
  const Vec3 u0 = (s.start - s.center) / s.radius;
  const Vec3 w0 = cross(s.plane_normal, u0);
  return s.center + s.radius * (std::cos(theta) * u0 + std::sin(theta) * w0);
}

inline void sample_arc(const ArcSegment& s, std::size_t count, bool drop_first,
                       std::vector<Point3>& out) {
  for (std::size_t i = drop_first ? 1 : 0; i < count; ++i) {
    const double theta =
        s.sweep * static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(arc_point(s, theta));
  }
}

}  // namespace detail

// Builds the edge curve between `p` and `q` whose half-tangents at the two
// endpoints (both pointing into the curve) are `tp` and `tq`.
inline ArcEdge arc_edge(const Point3& p, const Point3& q, const UnitVec3& tp,
                        const UnitVec3& tq, std::size_t resolution = 64) {
  if (resolution < 2) throw std::invalid_argument("arc_edge: resolution < 2");
  if (near(p, q, 1e-12)) throw std::invalid_argument("arc_edge: p == q");

  ArcEdge edge;
  edge.p = p;
  edge.q = q;
  edge.tangent_p = tp;
  edge.tangent_q = tq;

  const Vec3 chord = normalized(q - p);
  const Vec3 t1 = tp.vec();        // forward tangent at p
  const Vec3 t2 = -tq.vec();       // forward tangent at q
  const double tangent_tol = 1e-6;

  if (near(t1, chord, tangent_tol) && near(t2, chord, tangent_tol)) {
    edge.kind = EdgeCurveKind::straight;
    for (std::size_t i = 0; i < resolution; ++i) {
      const double s =
          static_cast<double>(i) / static_cast<double>(resolution - 1);
      edge.samples.push_back(p + s * (q - p));
    }
    return edge;
  }

  detail::SingleArc one;
  if (detail::solve_single_arc(p, q, t1, one) &&
      near(one.end_forward_tangent, t2, tangent_tol)) {
    edge.kind = EdgeCurveKind::arc;
    edge.segments.push_back(one.seg);
    detail::sample_arc(one.seg, resolution, false, edge.samples);
    return edge;
  }

  // Biarc: junction J midway between the tangent control points, with equal
  // tangent lengths d on both sides; d solves
  // 2 (t1.t2 - 1) d^2 - 2 v.(t1 + t2) d + v.v = 0.
  const Vec3 v = q - p;
  const double c2 = 2.0 * (dot(t1, t2) - 1.0);
  const double c1 = -2.0 * dot(v, t1 + t2);
  const double c0 = norm2(v);
  double d = -1.0;
  if (std::abs(c2) < 1e-12) {
    if (std::abs(c1) < 1e-12)
      throw arc_error("arc_edge: tangents unreachable by biarc");
    d = -c0 / c1;
  } else {
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) throw arc_error("arc_edge: no real biarc parameter");
    const double sq = std::sqrt(disc);
    for (double root : {(-c1 + sq) / (2.0 * c2), (-c1 - sq) / (2.0 * c2)})
      if (root > 1e-12 && (d < 0.0 || root < d)) d = root;
  }
  if (d <= 1e-12) throw arc_error("arc_edge: degenerate biarc parameter");

  const Point3 junction = 0.5 * ((p + d * t1) + (q - d * t2));
  detail::SingleArc arc1, arc2;
  if (!detail::solve_single_arc(p, junction, t1, arc1))
    throw arc_error("arc_edge: first biarc segment is degenerate");
  if (!detail::solve_single_arc(junction, q, arc1.end_forward_tangent, arc2))
    throw arc_error("arc_edge: second biarc segment is degenerate");
  if (!near(arc2.end_forward_tangent, t2, tangent_tol))
    throw arc_error("arc_edge: biarc end tangent mismatch");

  edge.kind = EdgeCurveKind::biarc;
  edge.segments = {arc1.seg, arc2.seg};
  const double len1 = arc1.seg.radius * arc1.seg.sweep;
  const double len2 = arc2.seg.radius * arc2.seg.sweep;
  std::size_t n1 = static_cast<std::size_t>(
      std::round(static_cast<double>(resolution) * len1 / (len1 + len2)));
  n1 = std::min(std::max<std::size_t>(n1, 2), resolution - 1);
  const std::size_t n2 = resolution - n1 + 1;
  detail::sample_arc(arc1.seg, n1, false, edge.samples);
  detail::sample_arc(arc2.seg, n2, true, edge.samples);
  return edge;
}

}  // namespace softtiler

#endif  // SOFTTILER_ARC_HPP_
