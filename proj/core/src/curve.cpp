#include "chf/curve.hpp"

#include <algorithm>
#include <cmath>

#include "chf/gauss.hpp"

namespace chf {

struct ParametricCurve::Base {
  Kind kind = Kind::Segment;
  // segment
  Point2 p0, p1;
  // circular arc
  Point2 center;
  double radius = 0, th0 = 0, th1 = 0;
  // cubic
  std::array<double, 4> cx{}, cy{};
  // polar graph (theta span reuses th0/th1, center reuses center)
  std::vector<double> pa, pb;
  // composite
  std::vector<ParametricCurve> children;
  std::vector<double> cum;  // cumulative arclength fractions, size children+1
};

namespace {
double polar_r(const std::vector<double>& a, const std::vector<double>& b,
               double th, int deriv) {
  double r = (deriv == 0 && !a.empty()) ? a[0] : 0.0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    double kk = static_cast<double>(k);
    switch (deriv) {
      case 0: r += a[k] * std::cos(kk * th); break;
      case 1: r += -a[k] * kk * std::sin(kk * th); break;
      default: r += -a[k] * kk * kk * std::cos(kk * th); break;
    }
  }
  for (std::size_t k = 1; k <= b.size(); ++k) {
    double kk = static_cast<double>(k);
    double c = b[k - 1];
    switch (deriv) {
      case 0: r += c * std::sin(kk * th); break;
      case 1: r += c * kk * std::cos(kk * th); break;
      default: r += -c * kk * kk * std::sin(kk * th); break;
    }
  }
  return r;
}
}  // namespace

ParametricCurve ParametricCurve::segment(Point2 a, Point2 b) {
  if (dist(a, b) == 0.0) throw Error("degenerate segment");
  auto base = std::make_shared<Base>();
  base->kind = Kind::Segment;
  base->p0 = a;
  base->p1 = b;
  ParametricCurve c;
  c.base_ = std::move(base);
  return c;
}

ParametricCurve ParametricCurve::circular_arc(Point2 center, double radius,
                                              double theta0, double theta1) {
  if (radius <= 0.0) throw Error("arc radius must be positive");
  if (theta0 == theta1) throw Error("empty arc");
  if (std::abs(theta1 - theta0) > 2.0 * M_PI + 1e-12)
    throw Error("arc spans more than a full turn");
  auto base = std::make_shared<Base>();
  base->kind = Kind::CircularArc;
  base->center = center;
  base->radius = radius;
  base->th0 = theta0;
  base->th1 = theta1;
  ParametricCurve c;
  c.base_ = std::move(base);
  return c;
}

ParametricCurve ParametricCurve::cubic(const std::array<double, 4>& cx,
                                       const std::array<double, 4>& cy) {
  auto base = std::make_shared<Base>();
  base->kind = Kind::Cubic;
  base->cx = cx;
  base->cy = cy;
  ParametricCurve c;
  c.base_ = std::move(base);
  // regularity probe
  for (int i = 0; i <= 64; ++i) {
    if (c.eval(i / 64.0).d1.norm() < 1e-14)
      throw Error("cubic curve has vanishing derivative");
  }
  return c;
}

ParametricCurve ParametricCurve::polar_graph(Point2 center,
                                             std::vector<double> cos_coeffs,
                                             std::vector<double> sin_coeffs,
                                             double theta0, double theta1) {
  if (cos_coeffs.empty()) throw Error("polar graph needs a constant term");
  auto base = std::make_shared<Base>();
  base->kind = Kind::PolarGraph;
  base->center = center;
  base->pa = std::move(cos_coeffs);
  base->pb = std::move(sin_coeffs);
  base->th0 = theta0;
  base->th1 = theta1;
  ParametricCurve c;
  c.base_ = std::move(base);
  for (int i = 0; i <= 128; ++i) {
    double th = theta0 + (theta1 - theta0) * i / 128.0;
    if (polar_r(c.base_->pa, c.base_->pb, th, 0) <= 0.0)
      throw Error("polar graph radius must stay positive");
  }
  return c;
}

ParametricCurve ParametricCurve::composite(std::vector<ParametricCurve> pieces) {
  if (pieces.empty()) throw Error("empty composite curve");
  auto base = std::make_shared<Base>();
  base->kind = Kind::Composite;
  base->cum.push_back(0.0);
  double total = 0.0;
  std::vector<double> lens;
  for (auto& p : pieces) {
    lens.push_back(p.total_arclength());
    total += lens.back();
  }
  double acc = 0.0;
  for (double l : lens) {
    acc += l;
    base->cum.push_back(acc / total);
  }
  base->cum.back() = 1.0;
  base->children = std::move(pieces);
  ParametricCurve c;
  c.base_ = std::move(base);
  return c;
}

ParametricCurve::Kind ParametricCurve::kind() const { return base_->kind; }

const std::vector<ParametricCurve>& ParametricCurve::composite_children() const {
  if (base_->kind != Kind::Composite) throw Error("not a composite curve");
  return base_->children;
}

ParametricCurve::Jet ParametricCurve::base_eval(double u) const {
  const Base& b = *base_;
  Jet j;
  switch (b.kind) {
    case Kind::Segment: {
      Vec2 d = b.p1 - b.p0;
      j.p = b.p0 + u * d;
      j.d1 = d;
      j.d2 = {0, 0};
      break;
    }
    case Kind::CircularArc: {
      double span = b.th1 - b.th0;
      double th = b.th0 + span * u;
      Vec2 e{std::cos(th), std::sin(th)};
      Vec2 ep{-std::sin(th), std::cos(th)};
      j.p = b.center + b.radius * e;
      j.d1 = b.radius * span * ep;
      j.d2 = -b.radius * span * span * e;
      break;
    }
    case Kind::Cubic: {
      double x = 0, y = 0, dx = 0, dy = 0, ddx = 0, ddy = 0;
      for (int i = 3; i >= 0; --i) {
        x = x * u + b.cx[i];
        y = y * u + b.cy[i];
      }
      for (int i = 3; i >= 1; --i) {
        dx = dx * u + i * b.cx[i];
        dy = dy * u + i * b.cy[i];
      }
      for (int i = 3; i >= 2; --i) {
        ddx = ddx * u + i * (i - 1) * b.cx[i];
        ddy = ddy * u + i * (i - 1) * b.cy[i];
      }
      j.p = {x, y};
      j.d1 = {dx, dy};
      j.d2 = {ddx, ddy};
      break;
    }
    case Kind::PolarGraph: {
      double span = b.th1 - b.th0;
      double th = b.th0 + span * u;
      double r = polar_r(b.pa, b.pb, th, 0);
      double rp = polar_r(b.pa, b.pb, th, 1);
      double rpp = polar_r(b.pa, b.pb, th, 2);
      Vec2 e{std::cos(th), std::sin(th)};
      Vec2 ep{-std::sin(th), std::cos(th)};
      j.p = b.center + r * e;
      // derivatives w.r.t. theta, then chain rule with dtheta/du = span
      Vec2 dth = rp * e + r * ep;
      Vec2 ddth = (rpp - r) * e + 2.0 * rp * ep;
      j.d1 = span * dth;
      j.d2 = span * span * ddth;
      break;
    }
    case Kind::Composite: {
      const auto& cum = b.cum;
      auto it = std::upper_bound(cum.begin(), cum.end(), u);
      std::size_t i = std::min<std::size_t>(
          b.children.size() - 1,
          static_cast<std::size_t>(std::max<std::ptrdiff_t>(
              0, it - cum.begin() - 1)));
      double w = cum[i + 1] - cum[i];
      double local = (u - cum[i]) / w;
      local = std::clamp(local, 0.0, 1.0);
      Jet cj = b.children[i].eval(local);
      j.p = cj.p;
      j.d1 = cj.d1 / w;
      j.d2 = cj.d2 / (w * w);
      break;
    }
  }
  return j;
}

ParametricCurve::Jet ParametricCurve::eval(double s) const {
  if (s < -1e-12 || s > 1.0 + 1e-12)
    throw Error("curve parameter out of [0,1]: " + std::to_string(s));
  s = std::clamp(s, 0.0, 1.0);
  double w = u1_ - u0_;
  Jet j = base_eval(u0_ + w * s);
  j.d1 = j.d1 * w;
  j.d2 = j.d2 * (w * w);
  j.p = map_.apply(j.p);
  j.d1 = map_.apply_linear(j.d1);
  j.d2 = map_.apply_linear(j.d2);
  return j;
}

ParametricCurve ParametricCurve::subcurve(double s0, double s1) const {
  if (s0 == s1) throw Error("empty subcurve");
  ParametricCurve c(*this);
  double w = u1_ - u0_;
  c.u0_ = u0_ + w * s0;
  c.u1_ = u0_ + w * s1;
  return c;
}

ParametricCurve ParametricCurve::transformed(const AffineMap& m) const {
  ParametricCurve c(*this);
  c.map_ = m.compose(map_);
  return c;
}

double ParametricCurve::arclength(double s0, double s1) const {
  if (s1 < s0) return -arclength(s1, s0);
  const auto& [nodes, weights] = gauss_legendre(16);
  // panelized to keep accuracy on long or curvy pieces
  int panels = 8;
  if (base_->kind == Kind::Composite)
    panels = std::max<int>(8, 4 * static_cast<int>(base_->children.size()));
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = s0 + (s1 - s0) * p / panels;
    double b = s0 + (s1 - s0) * (p + 1) / panels;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int q = 0; q < nodes.size(); ++q)
      acc += weights[q] * eval(mid + half * nodes[q]).d1.norm();
    total += acc * half;
  }
  return total;
}

double ParametricCurve::param_at_arclength(double s0, double target) const {
  if (target <= 0.0) return s0;
  double lo = s0, hi = 1.0;
  if (arclength(s0, 1.0) <= target) return 1.0;
  for (int it = 0; it < 60 && (hi - lo) > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    (arclength(s0, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BBox ParametricCurve::sample_bbox() const {
  Point2 p0 = point(0.0);
  BBox box{p0.x, p0.x, p0.y, p0.y};
  for (int i = 1; i <= 256; ++i) box.expand(point(i / 256.0));
  return box;
}

NearestPoint nearest_point(const ParametricCurve& curve, Point2 x, int seeds) {
  if (curve.kind() == ParametricCurve::Kind::Composite) {
    // recurse per piece so junction kinks cannot trap the refinement
    NearestPoint best;
    best.distance = std::numeric_limits<double>::infinity();
    const auto& children = curve.composite_children();
    std::vector<double> cum{0.0};
    double total = 0.0;
    std::vector<double> lens;
    for (const auto& ch : children) {
      lens.push_back(ch.total_arclength());
      total += lens.back();
    }
    for (double l : lens) cum.push_back(cum.back() + l / total);
    for (std::size_t i = 0; i < children.size(); ++i) {
      NearestPoint np = nearest_point(children[i], x, seeds);
      if (np.distance < best.distance) {
        best = np;
        best.s = cum[i] + (cum[i + 1] - cum[i]) * np.s;
      }
    }
    return best;
  }

  auto g = [&](double s) {
    auto j = curve.eval(s);
    return dot(j.d1, j.p - x);
  };
  auto d = [&](double s) { return dist(curve.point(s), x); };

  double best_s = 0.0, best_d = d(0.0);
  auto consider = [&](double s) {
    s = std::clamp(s, 0.0, 1.0);
    double ds = d(s);
    if (ds < best_d) {
      best_d = ds;
      best_s = s;
    }
  };
  consider(1.0);

  std::vector<double> svals(seeds + 1), gvals(seeds + 1);
  for (int i = 0; i <= seeds; ++i) {
    svals[i] = static_cast<double>(i) / seeds;
    gvals[i] = g(svals[i]);
    consider(svals[i]);
  }
  for (int i = 0; i < seeds; ++i) {
    if (gvals[i] == 0.0) {
      consider(svals[i]);
      continue;
    }
    if (gvals[i] * gvals[i + 1] > 0.0) continue;
    // bracketed root of the orthogonality equation: Newton with bisection fallback
    double lo = svals[i], hi = svals[i + 1];
    double glo = gvals[i];
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 30; ++it) {
      auto j = curve.eval(s);
      double gs = dot(j.d1, j.p - x);
      double gps = dot(j.d2, j.p - x) + j.d1.norm2();
      double snew = (gps != 0.0) ? s - gs / gps : -1.0;
      if (!(snew > lo && snew < hi)) {
        // bisection step
        if (gs * glo <= 0.0) hi = s; else { lo = s; glo = gs; }
        snew = 0.5 * (lo + hi);
      } else {
        if (gs * glo <= 0.0) hi = s; else { lo = s; glo = gs; }
      }
      if (std::abs(snew - s) < 1e-15) { s = snew; break; }
      s = snew;
    }
    consider(s);
  }
  return {best_s, best_d, curve.point(best_s)};
}

namespace {
void flatten_rec(const ParametricCurve& c, double s0, double s1, Point2 p0,
                 Point2 p1, double tol, int depth,
                 std::vector<std::pair<double, Point2>>& out) {
  double sm = 0.5 * (s0 + s1);
  Point2 pm = c.point(sm);
  Vec2 chord = p1 - p0;
  double clen = chord.norm();
  double dev;
  if (clen < 1e-300) {
    dev = dist(pm, p0);
  } else {
    dev = std::abs(cross(chord, pm - p0)) / clen;
    // also guard against symmetric excursions (closed sub-arcs)
    dev = std::max(dev, dist(pm, p0 + 0.5 * chord) - 0.5 * clen);
  }
  if ((dev <= tol && depth >= 3) || depth >= 40) {
    out.emplace_back(s1, p1);
    return;
  }
  flatten_rec(c, s0, sm, p0, pm, tol, depth + 1, out);
  flatten_rec(c, sm, s1, pm, p1, tol, depth + 1, out);
}
}  // namespace

void flatten(const ParametricCurve& curve, double tol,
             std::vector<std::pair<double, Point2>>& out) {
  Point2 p0 = curve.point(0.0), p1 = curve.point(1.0);
  out.emplace_back(0.0, p0);
  flatten_rec(curve, 0.0, 1.0, p0, p1, tol, 0, out);
}

}  // namespace chf
