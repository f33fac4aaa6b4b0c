// Exact classification of a spherical constraint's solution locus, and the
// Euler-angle chart used for reporting (theta = 0 and phi = 0 coincide with
// the x and z axes: v = (sin phi cos theta, sin phi sin theta, cos phi)).

#ifndef SOFTTILER_SOLUTION_SET_HPP_
#define SOFTTILER_SOLUTION_SET_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "softtiler/vec.hpp"

namespace softtiler {

enum class LocusKind { empty, antipodal_pair, great_circle, full_sphere };

inline const char* to_string(LocusKind k) {
  switch (k) {
    case LocusKind::empty: return "empty";
    case LocusKind::antipodal_pair: return "antipodal_pair";
    case LocusKind::great_circle: return "great_circle";
    case LocusKind::full_sphere: return "full_sphere";
  }
  return "?";
}

class SolutionSet {
 public:
  static SolutionSet empty() { return SolutionSet(LocusKind::empty, {}); }
  static SolutionSet full_sphere() {
    return SolutionSet(LocusKind::full_sphere, {});
  }
  static SolutionSet antipodal_pair(const Vec3& p) {
    return SolutionSet(LocusKind::antipodal_pair,
                       canonical_sign(normalized(p)));
  }
  static SolutionSet great_circle(const Vec3& n) {
    return SolutionSet(LocusKind::great_circle, canonical_sign(normalized(n)));
  }

  LocusKind kind() const { return kind_; }
  bool is_empty() const { return kind_ == LocusKind::empty; }

  // Representative point of an antipodal pair (canonical sign).
  const Vec3& point() const {
    require(LocusKind::antipodal_pair);
    return v_;
  }

  // Unit normal of a great circle (canonical sign).
  const Vec3& normal() const {
    require(LocusKind::great_circle);
    return v_;
  }

  bool contains(const Vec3& u, double tol = 1e-9) const {
    switch (kind_) {
      case LocusKind::empty: return false;
      case LocusKind::full_sphere: return true;
      case LocusKind::great_circle: return std::abs(dot(v_, u)) <= tol;
      case LocusKind::antipodal_pair:
        return near(u, v_, tol) || near(u, -v_, tol);
    }
    return false;
  }

  bool same_as(const SolutionSet& o, double tol = 1e-9) const {
    if (kind_ != o.kind_) return false;
    if (kind_ == LocusKind::empty || kind_ == LocusKind::full_sphere)
      return true;
    return near(v_, o.v_, tol);
  }

 private:
  SolutionSet(LocusKind k, const Vec3& v) : kind_(k), v_(v) {}

  void require(LocusKind k) const {
    if (kind_ != k)
      throw std::logic_error(std::string("SolutionSet: variant is ") +
                             to_string(kind_));
  }

  LocusKind kind_;
  Vec3 v_;
};

struct EulerAngles {
  double phi = 0.0;    // in [0, pi], measured from the z axis
  double theta = 0.0;  // in (-pi, pi], measured from the x axis
};

inline EulerAngles euler_from_unit(const UnitVec3& v) {
  EulerAngles e;
  e.phi = std::acos(std::clamp(v.z(), -1.0, 1.0));
  // Pole convention: theta = 0 when the direction is +-z.
  e.theta = (std::abs(v.x()) < 1e-15 && std::abs(v.y()) < 1e-15)
                ? 0.0
                : std::atan2(v.y(), v.x());
  return e;
}

inline UnitVec3 unit_from_euler(const EulerAngles& e) {
  const double sp = std::sin(e.phi);
  return UnitVec3::normalize(
      {sp * std::cos(e.theta), sp * std::sin(e.theta), std::cos(e.phi)});
}

}  // namespace softtiler

#endif  // SOFTTILER_SOLUTION_SET_HPP_
