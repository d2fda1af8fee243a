#pragma once

#include <array>
#include <cmath>

namespace mvf {

using real = double;

struct Vec2 {
  real x = 0, y = 0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(real s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

struct Vec3 {
  real x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(real s) const { return {x * s, y * s, z * s}; }
  bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
  real& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  real operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline real dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline real dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
// z-component of the 2D cross product; twice the signed triangle area.
inline real cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline real norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline real norm(const Vec2& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) {
  real n = norm(v);
  return n > 0 ? v * (1.0 / n) : v;
}

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<real, 9> m = {1, 0, 0, 0, 1, 0, 0, 0, 1};

  real& operator()(int r, int c) { return m[r * 3 + c]; }
  real operator()(int r, int c) const { return m[r * 3 + c]; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        real s = 0;
        for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }
  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }
  real det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  }
  Mat3 inverse() const {
    real d = det();
    Mat3 r;
    r.m = {(m[4] * m[8] - m[5] * m[7]) / d, (m[2] * m[7] - m[1] * m[8]) / d,
           (m[1] * m[5] - m[2] * m[4]) / d, (m[5] * m[6] - m[3] * m[8]) / d,
           (m[0] * m[8] - m[2] * m[6]) / d, (m[2] * m[3] - m[0] * m[5]) / d,
           (m[3] * m[7] - m[4] * m[6]) / d, (m[1] * m[6] - m[0] * m[7]) / d,
           (m[0] * m[4] - m[1] * m[3]) / d};
    return r;
  }
  static Mat3 identity() { return Mat3{}; }
};

// Row-major 3x4 rigid transform block [R | t].
struct Mat34 {
  std::array<real, 12> m = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0};

  real& operator()(int r, int c) { return m[r * 4 + c]; }
  real operator()(int r, int c) const { return m[r * 4 + c]; }

  Mat3 rotation() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(i, j);
    return r;
  }
  Vec3 translation() const { return {m[3], m[7], m[11]}; }
  void set_rotation(const Mat3& r) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) (*this)(i, j) = r(i, j);
  }
  void set_translation(const Vec3& t) { m[3] = t.x; m[7] = t.y; m[11] = t.z; }

  Vec3 apply(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z + m[3],
            m[4] * v.x + m[5] * v.y + m[6] * v.z + m[7],
            m[8] * v.x + m[9] * v.y + m[10] * v.z + m[11]};
  }
  static Mat34 identity() { return Mat34{}; }
};

// Rotation about a unit axis by angle (radians), Rodrigues form.
inline Mat3 axis_angle(const Vec3& axis, real angle) {
  Vec3 a = normalized(axis);
  real c = std::cos(angle), s = std::sin(angle), t = 1 - c;
  Mat3 r;
  r.m = {t * a.x * a.x + c,       t * a.x * a.y - s * a.z, t * a.x * a.z + s * a.y,
         t * a.x * a.y + s * a.z, t * a.y * a.y + c,       t * a.y * a.z - s * a.x,
         t * a.x * a.z - s * a.y, t * a.y * a.z + s * a.x, t * a.z * a.z + c};
  return r;
}

}  // namespace mvf
