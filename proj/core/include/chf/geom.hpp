#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace chf {

/// Error type for all precondition and construction failures in the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double c) const { return {x * c, y * c}; }
  Vec2 operator/(double c) const { return {x / c, y / c}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }

  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
  Vec2 normalized() const {
    double n = norm();
    if (n == 0.0) throw Error("cannot normalize zero vector");
    return {x / n, y / n};
  }
  /// Rotation by -pi/2; for a boundary traversed with the domain on the
  /// left, this turns the unit tangent into the outward unit normal.
  Vec2 right_normal() const { return {y, -x}; }
};

inline Vec2 operator*(double c, Vec2 v) { return v * c; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

using Point2 = Vec2;

/// Counterclockwise angle in [0, 2*pi) turning `from` onto `to`.
inline double ccw_angle(Vec2 from, Vec2 to) {
  double a = std::atan2(cross(from, to), dot(from, to));
  if (a < 0) a += 2.0 * M_PI;
  return a;
}

/// y = A*x + b with A = [[a00 a01],[a10 a11]].
struct AffineMap {
  double a00 = 1, a01 = 0, a10 = 0, a11 = 1;
  double bx = 0, by = 0;

  Point2 apply(Point2 p) const {
    return {a00 * p.x + a01 * p.y + bx, a10 * p.x + a11 * p.y + by};
  }
  Vec2 apply_linear(Vec2 v) const {
    return {a00 * v.x + a01 * v.y, a10 * v.x + a11 * v.y};
  }
  double det() const { return a00 * a11 - a01 * a10; }

  AffineMap inverse() const {
    double d = det();
    if (d == 0.0) throw Error("degenerate affine map");
    AffineMap inv;
    inv.a00 = a11 / d;
    inv.a01 = -a01 / d;
    inv.a10 = -a10 / d;
    inv.a11 = a00 / d;
    Vec2 t = inv.apply_linear({bx, by});
    inv.bx = -t.x;
    inv.by = -t.y;
    return inv;
  }
  /// Composition: (this ∘ g)(x) = this(g(x)).
  AffineMap compose(const AffineMap& g) const {
    AffineMap r;
    r.a00 = a00 * g.a00 + a01 * g.a10;
    r.a01 = a00 * g.a01 + a01 * g.a11;
    r.a10 = a10 * g.a00 + a11 * g.a10;
    r.a11 = a10 * g.a01 + a11 * g.a11;
    Vec2 t = apply({g.bx, g.by});
    r.bx = t.x;
    r.by = t.y;
    return r;
  }

  static AffineMap identity() { return {}; }
  static AffineMap translation(Vec2 t) { return {1, 0, 0, 1, t.x, t.y}; }
  static AffineMap rotation(double theta, Point2 center = {0, 0}) {
    double c = std::cos(theta), s = std::sin(theta);
    AffineMap m{c, -s, s, c, 0, 0};
    Vec2 t = Vec2{center.x, center.y} - m.apply_linear(center);
    m.bx = t.x;
    m.by = t.y;
    return m;
  }
  /// x + mu*(p - x): homothety of ratio mu about center x.
  static AffineMap homothety(Point2 x, double mu) {
    return {mu, 0, 0, mu, x.x * (1 - mu), x.y * (1 - mu)};
  }
};

struct BBox {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  Point2 center() const { return {(xmin + xmax) / 2, (ymin + ymax) / 2}; }
  double diag() const { return std::hypot(width(), height()); }
  bool contains(Point2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  void expand(Point2 p) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  BBox padded(double m) const { return {xmin - m, xmax + m, ymin - m, ymax + m}; }
};

}  // namespace chf
