#pragma once

#include <array>
#include <memory>
#include <vector>

#include "chf/geom.hpp"

namespace chf {

/// A C2 parametric boundary piece on [0,1].
///
/// Four constructible kinds (segment, circular arc, cubic parametric, polar
/// graph) plus a composite of chained pieces. A curve may carry a parameter
/// subinterval (restriction / reversal) and an affine map on top of its base
/// shape, so restrictions and transformed domains evaluate exactly.
class ParametricCurve {
 public:
  enum class Kind { Segment, CircularArc, Cubic, PolarGraph, Composite };

  /// Empty curve; usable only as a slot to assign into.
  ParametricCurve() = default;

  struct Jet {
    Point2 p;   // position
    Vec2 d1;    // first derivative w.r.t. the [0,1] parameter
    Vec2 d2;    // second derivative
  };

  static ParametricCurve segment(Point2 a, Point2 b);
  static ParametricCurve circular_arc(Point2 center, double radius,
                                      double theta0, double theta1);
  /// x(s) = sum cx[i] s^i, y(s) = sum cy[i] s^i.
  static ParametricCurve cubic(const std::array<double, 4>& cx,
                               const std::array<double, 4>& cy);
  /// r(theta) = cos_coeffs[0] + sum_k cos_coeffs[k] cos(k theta)
  ///          + sum_k sin_coeffs[k-1] sin(k theta), theta in [theta0,theta1].
  static ParametricCurve polar_graph(Point2 center,
                                     std::vector<double> cos_coeffs,
                                     std::vector<double> sin_coeffs,
                                     double theta0 = 0.0,
                                     double theta1 = 2.0 * M_PI);
  /// Chain of curves, parametrized proportionally to arc length.
  static ParametricCurve composite(std::vector<ParametricCurve> pieces);

  Kind kind() const;

  /// Position and derivatives at s in [0,1]. Throws on out-of-domain s.
  Jet eval(double s) const;
  Point2 point(double s) const { return eval(s).p; }
  Point2 start() const { return point(0.0); }
  Point2 end() const { return point(1.0); }
  bool is_closed(double tol) const { return dist(start(), end()) <= tol; }

  /// Restriction to [s0,s1], reparametrized to [0,1]; s0 > s1 reverses.
  ParametricCurve subcurve(double s0, double s1) const;
  ParametricCurve reversed() const { return subcurve(1.0, 0.0); }
  ParametricCurve transformed(const AffineMap& m) const;

  double arclength(double s0, double s1) const;
  double total_arclength() const { return arclength(0.0, 1.0); }
  /// Parameter s >= s0 with arclength(s0, s) == target (clamped to 1).
  double param_at_arclength(double s0, double target) const;

  /// Axis-aligned box of 257 samples (adequate for seeding and padding).
  BBox sample_bbox() const;

  const std::vector<ParametricCurve>& composite_children() const;

 private:
  struct Base;
  std::shared_ptr<const Base> base_;
  double u0_ = 0.0, u1_ = 1.0;
  AffineMap map_;

  Jet base_eval(double u) const;
};

struct NearestPoint {
  double s = 0.0;     // parameter of the closest point
  double distance = 0.0;
  Point2 p;           // the closest point itself
};

/// Global nearest point on the curve: dense seeding refined by root-finding
/// on the orthogonality equation phi'(s) . (phi(s) - x) = 0, clamped to the
/// endpoints. Total function.
NearestPoint nearest_point(const ParametricCurve& curve, Point2 x,
                           int seeds = 64);

/// Adaptive flattening: polyline with chord deviation <= tol. Appends
/// (parameter, point) pairs including both endpoints.
void flatten(const ParametricCurve& curve, double tol,
             std::vector<std::pair<double, Point2>>& out);

}  // namespace chf
