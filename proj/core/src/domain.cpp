#include "chf/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chf {

double polyline_signed_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i)
    a += cross(poly[i], poly[i + 1]);
  return 0.5 * a;
}

namespace {

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  Vec2 ab = b - a;
  double t = ab.norm2() > 0 ? dot(p - a, ab) / ab.norm2() : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, a + t * ab);
}

// arms must meet only at v: sampled pairwise separation check
void check_arms_disjoint(const ParametricCurve& minus,
                         const ParametricCurve& plus, Point2 v, double scale) {
  const int M = 48;
  for (int i = 1; i <= M; ++i) {
    // arm_minus ends at v, arm_plus starts at v; skip the shared endpoint
    Point2 a = minus.point(1.0 - static_cast<double>(i) / (M + 1));
    for (int j = 1; j <= M; ++j) {
      Point2 b = plus.point(static_cast<double>(j) / (M + 1));
      double da = dist(a, v), db = dist(b, v);
      if (dist(a, b) < 1e-9 * scale && std::min(da, db) > 1e-9 * scale)
        throw Error("corner arms intersect away from the corner point");
    }
  }
}

std::pair<ParametricCurve, ParametricCurve> make_arms(
    const ParametricCurve& prev, const ParametricCurve& next, Point2 v,
    double eps, double scale) {
  double lp = prev.total_arclength();
  double ln = next.total_arclength();
  if (eps <= 0.0) throw Error("arm length must be positive");
  if (eps > 0.5 * lp || eps > 0.5 * ln)
    throw Error("arm length exceeds half the arclength of an adjacent curve");
  // arm_minus: last eps of prev (ends at v); arm_plus: first eps of next
  double s_from = 0.0, s_to = 1.0;
  {
    // find s with arclength(s, 1) = eps  <=>  arclength(0, s) = lp - eps
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      (prev.arclength(0.0, mid) < lp - eps ? lo : hi) = mid;
    }
    s_from = 0.5 * (lo + hi);
  }
  s_to = next.param_at_arclength(0.0, eps);
  ParametricCurve arm_minus = prev.subcurve(s_from, 1.0);
  ParametricCurve arm_plus = next.subcurve(0.0, s_to);
  check_arms_disjoint(arm_minus, arm_plus, v, scale);
  return {arm_minus, arm_plus};
}

struct Junction {
  int loop;
  int prev;  // global curve index
  int next;
  Point2 v;
  Vec2 t_minus, t_plus;
  Vec2 d2_minus, d2_plus;
};

std::vector<Junction> find_junctions(
    const std::vector<BoundaryLoop>& loops,
    const std::vector<int>& loop_offset, double tau_join) {
  std::vector<Junction> out;
  for (std::size_t li = 0; li < loops.size(); ++li) {
    const auto& cs = loops[li].curves;
    int m = static_cast<int>(cs.size());
    for (int i = 0; i < m; ++i) {
      int j = (i + 1) % m;
      Point2 e = cs[i].end();
      Point2 b = cs[j].start();
      if (dist(e, b) > tau_join)
        throw Error("boundary loop is not closed: curve chain gap of " +
                    std::to_string(dist(e, b)));
      Junction jn;
      jn.loop = static_cast<int>(li);
      jn.prev = loop_offset[li] + i;
      jn.next = loop_offset[li] + j;
      jn.v = 0.5 * (e + b);
      auto je = cs[i].eval(1.0);
      auto jb = cs[j].eval(0.0);
      if (je.d1.norm() == 0.0 || jb.d1.norm() == 0.0)
        throw Error("degenerate tangent at a boundary junction");
      jn.t_minus = je.d1.normalized();
      jn.t_plus = jb.d1.normalized();
      jn.d2_minus = je.d2;
      jn.d2_plus = jb.d2;
      out.push_back(jn);
    }
  }
  return out;
}

}  // namespace

Domain Domain::build(std::vector<BoundaryLoop> loops, DomainOptions opts) {
  if (loops.empty()) throw Error("domain needs at least one boundary loop");
  Domain d;
  d.opts_ = opts;
  d.loops_ = std::move(loops);

  std::vector<int> loop_offset;
  for (const auto& loop : d.loops_) {
    if (loop.curves.empty()) throw Error("empty boundary loop");
    loop_offset.push_back(static_cast<int>(d.curves_.size()));
    for (const auto& c : loop.curves) d.curves_.push_back(c);
  }

  // provisional scale from sample boxes
  BBox box = d.curves_.front().sample_bbox();
  for (const auto& c : d.curves_) {
    BBox b = c.sample_bbox();
    box.expand({b.xmin, b.ymin});
    box.expand({b.xmax, b.ymax});
  }
  d.bbox_ = box;
  d.diam_ = box.diag();
  if (!(d.diam_ > 0)) throw Error("degenerate domain");
  d.delta_geom_ = opts.delta_geom_rel * d.diam_;

  double tau_join = opts.tau_join * d.diam_;
  double tau_flat = opts.tau_flat * d.diam_;

  // flatten and validate orientation
  double area = 0.0;
  for (const auto& loop : d.loops_) {
    std::vector<Point2> poly;
    for (const auto& c : loop.curves) {
      std::vector<std::pair<double, Point2>> pts;
      flatten(c, tau_flat, pts);
      for (std::size_t i = poly.empty() ? 0 : 1; i < pts.size(); ++i)
        poly.push_back(pts[i].second);
    }
    if (poly.empty() || dist(poly.front(), poly.back()) > tau_join)
      throw Error("flattened loop failed to close");
    poly.push_back(poly.front());
    double sa = polyline_signed_area(poly);
    bool ccw = sa > 0.0;
    if (ccw != (loop.orientation == Orientation::Outer))
      throw Error("loop orientation inconsistent with signed area");
    area += sa;
    d.polylines_.push_back(std::move(poly));
  }
  if (!(area > 0)) throw Error("domain area must be positive");
  d.area_ = area;

  // corners
  auto junctions = find_junctions(d.loops_, loop_offset, tau_join);
  for (const auto& jn : junctions) {
    double turn = ccw_angle(jn.t_minus, jn.t_plus);
    double dev = std::min(turn, 2.0 * M_PI - turn);
    if (dev <= opts.tol_angle) {
      // smooth closure; the C2 requirement is checked and only warned about
      if ((jn.d2_minus - jn.d2_plus).norm() > 1e-6 * d.diam_)
        d.warnings_.push_back(
            "second-derivative mismatch at a smooth junction near (" +
            std::to_string(jn.v.x) + "," + std::to_string(jn.v.y) + ")");
      continue;
    }
    CornerData c;
    c.v = jn.v;
    c.t_minus = jn.t_minus;
    c.t_plus = jn.t_plus;
    c.alpha = ccw_angle(jn.t_plus, -jn.t_minus);
    c.loop = jn.loop;
    c.prev_curve = jn.prev;
    c.next_curve = jn.next;
    const auto& prev = d.curves_[jn.prev];
    const auto& next = d.curves_[jn.next];
    double eps = opts.arm_eps.value_or(
        std::min({prev.total_arclength() / 3.0, next.total_arclength() / 3.0,
                  d.delta_geom_}));
    auto [am, ap] = make_arms(prev, next, c.v, eps, d.diam_);
    c.arm_minus = am;
    c.arm_plus = ap;
    c.arm_length = eps;
    if (!(c.alpha > 0.0 && c.alpha < M_PI)) d.all_angles_convex_ = false;
    if (!(c.alpha > 0.0 && c.alpha < 2.0 * M_PI))
      throw Error("corner angle outside (0, 2*pi)");
    d.corners_.push_back(std::move(c));
  }
  return d;
}

Membership Domain::contains(Point2 x) const {
  double tau_bdry = opts_.tau_bdry * diam_;
  double tau_flat = opts_.tau_flat * diam_;
  if (!bbox_.padded(tau_bdry + tau_flat).contains(x)) return Membership::Outside;

  // distance to the flattened boundary, refined near it
  double dmin = std::numeric_limits<double>::infinity();
  for (const auto& poly : polylines_)
    for (std::size_t i = 0; i + 1 < poly.size(); ++i)
      dmin = std::min(dmin, point_segment_distance(x, poly[i], poly[i + 1]));
  if (dmin <= 4.0 * tau_flat + tau_bdry) {
    double exact = distance_to_boundary(x).distance;
    if (exact <= tau_bdry) return Membership::Boundary;
  }

  // even-odd crossing test against the flattened boundary
  int crossings = 0;
  for (const auto& poly : polylines_) {
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
      Point2 a = poly[i], b = poly[i + 1];
      if ((a.y > x.y) == (b.y > x.y)) continue;
      double xi = a.x + (x.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (xi > x.x) ++crossings;
    }
  }
  return (crossings % 2 == 1) ? Membership::Inside : Membership::Outside;
}

Domain::BoundaryHit Domain::distance_to_boundary(Point2 x) const {
  BoundaryHit best{std::numeric_limits<double>::infinity(), -1, {}};
  for (std::size_t i = 0; i < curves_.size(); ++i) {
    NearestPoint np = nearest_point(curves_[i], x);
    if (np.distance < best.distance)
      best = {np.distance, static_cast<int>(i), np};
  }
  return best;
}

Domain Domain::homothety(Point2 x, double mu) const {
  if (!(mu > 0.0)) throw Error("homothety ratio must be positive");
  return transformed(AffineMap::homothety(x, mu));
}

Domain Domain::transformed(const AffineMap& m) const {
  std::vector<BoundaryLoop> loops;
  bool flip = m.det() < 0.0;
  for (const auto& loop : loops_) {
    BoundaryLoop nl;
    nl.orientation = loop.orientation;
    if (!flip) {
      for (const auto& c : loop.curves) nl.curves.push_back(c.transformed(m));
    } else {
      // orientation-reversing map: reverse the chain to keep D on the left
      for (auto it = loop.curves.rbegin(); it != loop.curves.rend(); ++it)
        nl.curves.push_back(it->reversed().transformed(m));
    }
    loops.push_back(std::move(nl));
  }
  return Domain::build(std::move(loops), opts_);
}

std::vector<CornerData> detect_corners(const Domain& domain,
                                       double tol_angle) {
  DomainOptions opts = domain.options();
  opts.tol_angle = tol_angle;
  std::vector<BoundaryLoop> loops = domain.loops();
  return Domain::build(std::move(loops), opts).corners();
}

std::pair<ParametricCurve, ParametricCurve> corner_arms(
    const Domain& domain, const CornerData& corner, double eps) {
  const auto& prev = domain.curves()[corner.prev_curve];
  const auto& next = domain.curves()[corner.next_curve];
  return make_arms(prev, next, corner.v, eps, domain.diameter());
}

TangentDiscs tangent_discs(double r, Point2 y, const ParametricCurve& curve,
                           double tol) {
  if (!(r > 0.0)) throw Error("tangent disc radius must be positive");
  NearestPoint np = nearest_point(curve, y);
  BBox box = curve.sample_bbox();
  double scale = std::max(box.diag(), 1.0);
  if (np.distance > tol * scale)
    throw Error("point is not on the curve (distance " +
                std::to_string(np.distance) + ")");
  Vec2 t = curve.eval(np.s).d1.normalized();
  Vec2 u = t.right_normal();
  return {np.p + r * u, np.p - r * u, r, np.s};
}

double rolling_radius_estimate(const ParametricCurve& curve,
                               int grid_resolution) {
  std::vector<Point2> pts(grid_resolution);
  std::vector<Vec2> normals(grid_resolution);
  for (int i = 0; i < grid_resolution; ++i) {
    double s = static_cast<double>(i) / grid_resolution;
    auto j = curve.eval(s);
    pts[i] = j.p;
    normals[i] = j.d1.normalized().right_normal();
  }
  auto ok = [&](double r) {
    for (int i = 0; i < grid_resolution; ++i) {
      for (int side = 0; side < 2; ++side) {
        Point2 c = pts[i] + (side == 0 ? r : -r) * normals[i];
        if (nearest_point(curve, c).distance < r * (1.0 - 1e-6)) return false;
      }
    }
    return true;
  };
  double hi = 0.5 * curve.sample_bbox().diag();
  double lo = 0.0;
  if (ok(hi)) return hi;
  for (int it = 0; it < 14; ++it) {
    double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

ParametricCurve local_linear_extension(const ParametricCurve& curve,
                                       double len_before, double len_after) {
  if (!(len_before > 0.0) || !(len_after > 0.0))
    throw Error("extension lengths must be positive");
  auto j0 = curve.eval(0.0);
  auto j1 = curve.eval(1.0);
  Vec2 t0 = j0.d1.normalized();
  Vec2 t1 = j1.d1.normalized();
  ParametricCurve pre = ParametricCurve::segment(j0.p - len_before * t0, j0.p);
  ParametricCurve post = ParametricCurve::segment(j1.p, j1.p + len_after * t1);
  ParametricCurve ext = ParametricCurve::composite({pre, curve, post});
  // injectivity at sample resolution: no two non-adjacent chords may cross
  const int M = 512;
  std::vector<Point2> samples(M + 1);
  for (int i = 0; i <= M; ++i)
    samples[i] = ext.point(static_cast<double>(i) / M);
  auto crosses = [](Point2 a, Point2 b, Point2 c, Point2 d) {
    double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return d1 * d2 < 0 && d3 * d4 < 0;
  };
  for (int i = 0; i < M; ++i) {
    for (int k = i + 2; k < M; ++k) {
      if (crosses(samples[i], samples[i + 1], samples[k], samples[k + 1]))
        throw Error("local linear extension self-intersects");
    }
  }
  return ext;
}

}  // namespace chf
