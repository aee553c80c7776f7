#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chf/curve.hpp"
#include "chf/geom.hpp"

namespace chf {

enum class Orientation { Outer, Hole };

struct BoundaryLoop {
  std::vector<ParametricCurve> curves;
  Orientation orientation = Orientation::Outer;
};

/// A corner of the boundary: junction point, interior angle, and the two
/// short boundary arms on either side (arm_minus ends at v, arm_plus starts
/// at v; both oriented with the domain on the left).
struct CornerData {
  Point2 v;
  double alpha = 0.0;          // interior angle, in [0, 2*pi)
  ParametricCurve arm_minus;
  ParametricCurve arm_plus;
  double arm_length = 0.0;     // arc length of each arm
  Vec2 t_minus, t_plus;        // unit tangents at v (incoming / outgoing)
  int loop = 0;
  int prev_curve = 0;          // global curve index ending at v
  int next_curve = 0;          // global curve index starting at v
};

enum class Membership { Inside, Boundary, Outside };

struct DomainOptions {
  // Tolerances are relative to the domain diameter.
  double tau_join = 1e-9;
  double tau_dist = 1e-12;
  double tau_flat = 1e-6;
  double tau_bdry = 1e-9;
  double tol_angle = 1e-6;        // radians, absolute
  double delta_geom_rel = 0.1;    // delta_geom = delta_geom_rel * diam
  std::optional<double> arm_eps;  // absolute; default min(L_adj/3, delta_geom)
};

/// Immutable piecewise-C2 planar domain: oriented boundary loops plus
/// derived corner data, membership test, and geometric queries.
class Domain {
 public:
  static Domain build(std::vector<BoundaryLoop> loops,
                      DomainOptions opts = {});

  const std::vector<BoundaryLoop>& loops() const { return loops_; }
  /// All boundary curves flattened across loops, in loop order.
  const std::vector<ParametricCurve>& curves() const { return curves_; }
  const std::vector<CornerData>& corners() const { return corners_; }
  const BBox& bounding_box() const { return bbox_; }
  double diameter() const { return diam_; }
  double area() const { return area_; }
  double delta_geom() const { return delta_geom_; }
  /// Theorem hypothesis flag: all interior angles in (0, pi).
  bool all_angles_convex() const { return all_angles_convex_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const DomainOptions& options() const { return opts_; }

  Membership contains(Point2 x) const;
  bool is_inside(Point2 x) const { return contains(x) != Membership::Outside; }

  /// Distance from x to the boundary together with the nearest curve.
  struct BoundaryHit {
    double distance;
    int curve;     // global curve index
    NearestPoint nearest;
  };
  BoundaryHit distance_to_boundary(Point2 x) const;

  Domain homothety(Point2 x, double mu) const;
  Domain transformed(const AffineMap& m) const;

  /// Flattened boundary (chord deviation <= tau_flat * diam), one polyline
  /// per loop; each polyline is closed (first point repeated last).
  const std::vector<std::vector<Point2>>& polylines() const {
    return polylines_;
  }

 private:
  std::vector<BoundaryLoop> loops_;
  std::vector<ParametricCurve> curves_;
  std::vector<CornerData> corners_;
  std::vector<std::vector<Point2>> polylines_;
  std::vector<std::string> warnings_;
  BBox bbox_;
  double diam_ = 0.0;
  double area_ = 0.0;
  double delta_geom_ = 0.0;
  bool all_angles_convex_ = true;
  DomainOptions opts_;
};

/// Corners of a domain re-detected with an explicit tangent threshold.
std::vector<CornerData> detect_corners(const Domain& domain,
                                       double tol_angle);

/// The two corner arms of arc length eps on each side of the corner,
/// reparametrized to [0,1] and oriented with the domain on the left.
std::pair<ParametricCurve, ParametricCurve> corner_arms(
    const Domain& domain, const CornerData& corner, double eps);

struct TangentDiscs {
  Point2 center_plus;   // on the outward-normal side
  Point2 center_minus;  // on the inward side
  double radius;
  double s;             // parameter of the tangency point on the curve
};

/// The two discs of radius r tangent to the curve at y. "Plus" lies on the
/// right of the traversal direction (outward when the curve bounds a domain
/// kept on the left).
TangentDiscs tangent_discs(double r, Point2 y, const ParametricCurve& curve,
                           double tol = 1e-9);

/// Largest radius on a dyadic search grid for which both tangent discs touch
/// the curve only at the tangency point, for all sampled points.
double rolling_radius_estimate(const ParametricCurve& curve,
                               int grid_resolution = 256);

/// Extends the curve beyond both endpoints along its tangent lines.
ParametricCurve local_linear_extension(const ParametricCurve& curve,
                                       double len_before, double len_after);

/// Signed area of a closed polyline (positive when counterclockwise).
double polyline_signed_area(const std::vector<Point2>& poly);

}  // namespace chf
