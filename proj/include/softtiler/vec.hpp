// Small fixed-size vector/matrix types used throughout the library.
// Coordinates are in the lattice units of the built-in cell description.

#ifndef SOFTTILER_VEC_HPP_
#define SOFTTILER_VEC_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace softtiler {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

using Point3 = Vec3;

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
  return v / n;
}

inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline bool near(const Vec3& a, const Vec3& b, double tol) {
  return distance(a, b) <= tol;
}

// Flips the sign so the first component larger than `tol` in magnitude is
// positive. Makes antipodal representatives and circle normals comparable.
inline Vec3 canonical_sign(const Vec3& v, double tol = 1e-9) {
  for (int i = 0; i < 3; ++i) {
    if (v[i] > tol) return v;
    if (v[i] < -tol) return -v;
  }
  return v;
}

inline bool lex_less(const Vec3& a, const Vec3& b, double tol = 1e-9) {
  for (int i = 0; i < 3; ++i) {
    if (a[i] < b[i] - tol) return true;
    if (a[i] > b[i] + tol) return false;
  }
  return false;
}

// Unit vector with the invariant checked at construction.
class UnitVec3 {
 public:
  explicit UnitVec3(const Vec3& v, double tol = 1e-12) : v_(v) {
    if (std::abs(norm(v) - 1.0) > tol)
      throw std::invalid_argument("UnitVec3: |v| = " + std::to_string(norm(v)));
  }

  static UnitVec3 normalize(const Vec3& v) { return UnitVec3(normalized(v)); }

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }
  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }

 private:
  Vec3 v_;
};

struct Mat3 {
  std::array<double, 9> m{};  // row-major

  static Mat3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

  static Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    return {{r0.x, r0.y, r0.z, r1.x, r1.y, r1.z, r2.x, r2.y, r2.z}};
  }

  double operator()(int r, int c) const { return m[3 * r + c]; }
  double& operator()(int r, int c) { return m[3 * r + c]; }

  Vec3 row(int r) const { return {m[3 * r], m[3 * r + 1], m[3 * r + 2]}; }
  Vec3 col(int c) const { return {m[c], m[c + 3], m[c + 6]}; }

  Vec3 apply(const Vec3& v) const {
    return {dot(row(0), v), dot(row(1), v), dot(row(2), v)};
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }

  Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
    return r;
  }

  Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
    return r;
  }

  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  double det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) -
           m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  }
};

inline double max_entry_diff(const Mat3& a, const Mat3& b) {
  double d = 0.0;
  for (int i = 0; i < 9; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
  return d;
}

inline bool mat_lex_less(const Mat3& a, const Mat3& b, double tol = 1e-9) {
  for (int i = 0; i < 9; ++i) {
    if (a.m[i] < b.m[i] - tol) return true;
    if (a.m[i] > b.m[i] + tol) return false;
  }
  return false;
}

inline bool is_orthogonal(const Mat3& m, double tol = 1e-12) {
  if (max_entry_diff(m.transposed() * m, Mat3::identity()) > tol) return false;
  return std::abs(std::abs(m.det()) - 1.0) <= tol;
}

}  // namespace softtiler

#endif  // SOFTTILER_VEC_HPP_
