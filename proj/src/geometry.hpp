#pragma once

#include <array>
#include <cmath>

namespace ofem {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Row-major 2x2 matrix; m[i][j] as in (grad u)_{ij} = d u_i / d x_j.
struct Mat2 {
  std::array<std::array<double, 2>, 2> m{{{0.0, 0.0}, {0.0, 0.0}}};

  static Mat2 from_columns(Vec2 c0, Vec2 c1) {
    Mat2 a;
    a.m[0][0] = c0.x;
    a.m[1][0] = c0.y;
    a.m[0][1] = c1.x;
    a.m[1][1] = c1.y;
    return a;
  }
  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  double trace() const { return m[0][0] + m[1][1]; }
  Mat2 inverse() const {
    const double d = det();
    Mat2 a;
    a.m[0][0] = m[1][1] / d;
    a.m[0][1] = -m[0][1] / d;
    a.m[1][0] = -m[1][0] / d;
    a.m[1][1] = m[0][0] / d;
    return a;
  }
  Mat2 transpose() const {
    Mat2 a;
    a.m[0][0] = m[0][0];
    a.m[0][1] = m[1][0];
    a.m[1][0] = m[0][1];
    a.m[1][1] = m[1][1];
    return a;
  }
  Vec2 operator*(Vec2 v) const {
    return {m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y};
  }
  Mat2 operator*(const Mat2& b) const {
    Mat2 a;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        a.m[i][j] = m[i][0] * b.m[0][j] + m[i][1] * b.m[1][j];
    return a;
  }
  Mat2 operator-(const Mat2& b) const {
    Mat2 a;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) a.m[i][j] = m[i][j] - b.m[i][j];
    return a;
  }
  double frobenius_sq() const {
    return m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] +
           m[1][1] * m[1][1];
  }
};

}  // namespace ofem
