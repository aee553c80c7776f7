#include "chf/needles.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "chf/gauss.hpp"
#include "chf/rho.hpp"

namespace chf {

namespace {

// Cap on the fitted decay-envelope constant; a construction whose sampled
// profile needs more than this is rejected.
constexpr double kEnvelopeCap = 25.0;
constexpr int kEnvelopeSamples = 10000;
constexpr double kZetaFloor = 0.02;
constexpr int kGrainQuantum = 64;  // grid for the half-distance ratio cache

double clenshaw(const Eigen::VectorXd& c, double s) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    double b0 = 2.0 * s * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return s * b1 - b2 + c[0];
}

// Chebyshev reproducing-kernel slice k(s) = 1/2 + sum_{k=1}^m T_k(a) T_k(s).
Eigen::VectorXd kernel_slice(int m, double a) {
  Eigen::VectorXd c(m + 1);
  c[0] = 0.5;
  double tk1 = 1.0, tk = a;  // T_0, T_1 at the anchor
  for (int k = 1; k <= m; ++k) {
    c[k] = tk;
    double tnext = 2.0 * a * tk - tk1;
    tk1 = tk;
    tk = tnext;
  }
  return c;
}

}  // namespace

UnivariatePoly::UnivariatePoly(Eigen::VectorXd cheb_coeffs, double anchor,
                               bool squared)
    : coeffs_(std::move(cheb_coeffs)), anchor_(anchor), squared_(squared) {
  if (coeffs_.size() == 0) throw Error("empty coefficient vector");
  norm_ = clenshaw(coeffs_, anchor_);
  if (norm_ == 0.0) throw Error("kernel slice vanishes at the anchor");
}

double UnivariatePoly::operator()(double s) const {
  // dividing at evaluation time makes the anchor value exactly 1
  double v = clenshaw(coeffs_, s) / norm_;
  return squared_ ? v * v : v;
}

int UnivariatePoly::degree() const {
  int d = static_cast<int>(coeffs_.size()) - 1;
  return squared_ ? 2 * d : d;
}

UnivariatePoly univariate_needle(int n, double t, NeedleReport* report) {
  if (n < 1) throw Error("univariate_needle: degree must be >= 1");
  if (t < 0.0 || t > 1.0) throw Error("univariate_needle: t must be in [0,1]");
  const double a = 1.0 - t;
  const int m = n / 4;  // kernel degree; the square has degree 2m <= n/2

  // Chebyshev reproducing-kernel slice, normalized at the anchor and
  // squared. The square keeps the profile's denominator structure while
  // flattening the sign oscillation enough for a degree-uniform envelope
  // constant.
  UnivariatePoly q(kernel_slice(m, a), a, true);

  double rho = rho_star(n, t);
  double c_fit = 0.0;
  for (int i = 0; i < kEnvelopeSamples; ++i) {
    double s = -1.0 + 2.0 * (i + 0.5) / kEnvelopeSamples;
    double envelope = rho / (rho + std::abs(a - s));
    c_fit = std::max(c_fit, std::abs(q(s)) / envelope);
  }
  if (m >= 1 && c_fit > kEnvelopeCap)
    throw Error("univariate_needle: decay validation failed (c_fit = " +
                std::to_string(c_fit) + ")");
  if (report) {
    report->construction = NeedleReport::Construction::Univariate;
    report->n = n;
    report->t = t;
    report->anchor = {a, 0.0};
    report->c_fit = c_fit;
    report->max_violation = 0.0;
  }
  return q;
}

namespace {

/// P(y) = Q((r2^2 - |y-center|^2) / (r2^2 - r1^2)); r1 = 0 collapses the
/// annulus to a disc (used by the interior witness).
BivariatePoly radial_from(int n, double r1, double r2, double lam,
                          Point2 center, NeedleReport* report) {
  if (r1 < 0.0 || r1 >= r2) throw Error("radial needle: need 0 <= r1 < r2");
  if (lam < r1 || lam > r2)
    throw Error("radial needle: lam must be in [r1, r2]");
  const double denom = r2 * r2 - r1 * r1;
  double t = (lam * lam - r1 * r1) / denom;
  t = std::min(1.0, std::max(0.0, t));

  NeedleReport uni;
  UnivariatePoly q = univariate_needle(n, t, &uni);
  const double R2 = r2 * r2;
  BivariatePoly p(
      [q, center, R2, denom](Point2 y) {
        return q((R2 - (y - center).norm2()) / denom);
      },
      2 * q.degree());

  if (report) {
    *report = uni;
    report->construction = NeedleReport::Construction::Radial;
    report->r1 = r1;
    report->r2 = r2;
    report->lam = lam;
    report->anchor = center + Vec2{lam, 0.0};
    // L2 norm over the annulus: 2*pi * int_{r1}^{r2} P(r)^2 r dr, exact rule
    const auto& [u, w] = gauss_legendre(n + 2);
    double mid = 0.5 * (r1 + r2), half = 0.5 * (r2 - r1), s = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      double r = mid + half * u[i];
      double v = q((R2 - r * r) / denom);
      s += w[i] * v * v * r;
    }
    report->l2_norm_on_domain = std::sqrt(2.0 * M_PI * half * s);
  }
  return p;
}

}  // namespace

BivariatePoly radial_needle(int n, double r1, double r2, double lam,
                            NeedleReport* report) {
  if (r1 <= 0.0) throw Error("radial_needle: need r1 > 0");
  return radial_from(n, r1, r2, lam, {0.0, 0.0}, report);
}

BivariatePoly narrowed_annulus_needle(int n, double r1, double r2, double lam,
                                      NeedleReport* report) {
  if (n < 4) throw Error("narrowed_annulus_needle: degree must be >= 4");
  if (!(r1 > 0.0 && r1 < r2))
    throw Error("narrowed_annulus_needle: need 0 < r1 < r2");
  if (lam < r1 || lam > r2)
    throw Error("narrowed_annulus_needle: lam must be in [r1, r2]");

  // Radial localization: an unsquared kernel slice in the annulus variable
  // s = (r2^2 - |y|^2) / (r2^2 - r1^2), kept at a quarter of the degree
  // budget so it sharpens with n rather than staying a fixed-width bump.
  const int m_r = std::max(1, n / 4);
  const double denom = r2 * r2 - r1 * r1;
  const double a_r = (r2 * r2 - lam * lam) / denom;
  UnivariatePoly rad(kernel_slice(m_r, a_r), a_r, false);

  // Angular localization at theta = 0, plus a degree-one factor that breaks
  // the y -> -y symmetry of the angular needle: without it the mirror bump
  // at (-lam, 0) carries comparable L2 mass.
  NeedleReport ang;
  const int bud = n - 2 * m_r - 1;
  UnivariatePoly q = univariate_needle(std::max(1, 2 * bud), 1.0, &ang);
  const double ap = lam / r2;
  const double side_norm = 0.5 + ap * ap;
  const double R2 = r2 * r2;
  BivariatePoly out(
      [rad, q, ap, side_norm, R2, denom, r2](Point2 y) {
        double s = (R2 - (y.x * y.x + y.y * y.y)) / denom;
        return rad(s) * q(y.y / r2) * ((0.5 + ap * (y.x / r2)) / side_norm);
      },
      2 * m_r + q.degree() + 1);

  if (report) {
    report->construction = NeedleReport::Construction::Narrowed;
    report->n = n;
    report->t = ang.t;
    report->r1 = r1;
    report->r2 = r2;
    report->lam = lam;
    report->anchor = {lam, 0.0};
    report->c_fit = ang.c_fit;
    report->max_violation = 0.0;
    // L2 over the annulus in polar form; the integrand is a trig polynomial
    // of degree <= 2n in the angle, so a uniform angular grid is exact.
    const auto& [u, w] = gauss_legendre(n + 4);
    const int kth = 4 * n + 8;
    double mid = 0.5 * (r1 + r2), half = 0.5 * (r2 - r1), s = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      double r = mid + half * u[i];
      for (int j = 0; j < kth; ++j) {
        double th = 2.0 * M_PI * j / kth;
        double v = out(Point2{r * std::cos(th), r * std::sin(th)});
        s += w[i] * (2.0 * M_PI / kth) * v * v * r;
      }
    }
    report->l2_norm_on_domain = std::sqrt(half * s);
  }
  return out;
}

BivariatePoly two_annuli_needle(int n, double r1, double r2, double h,
                                Point2 x, double zeta, NeedleReport* report) {
  if (!(zeta > 0.0 && zeta < 0.5))
    throw Error("two_annuli_needle: zeta must be in (0, 1/2)");
  if (!(zeta <= h && h <= 1.0 - zeta))
    throw Error("two_annuli_needle: hypothesis zeta <= h <= 1-zeta failed");
  if (!(r1 > 0.0 && r1 < r2))
    throw Error("two_annuli_needle: need 0 < r1 < r2");
  const Point2 c1{0.0, -r1 * h}, c2{0.0, r1 * h};
  const double lam1 = dist(x, c1), lam2 = dist(x, c2);
  const double reach = (1.0 + 0.5 * zeta) * r1;
  if (lam1 < r1 || lam1 > reach || lam2 < r1 || lam2 > reach)
    throw Error("two_annuli_needle: hypothesis r1 <= |x-c_i| <= (1+zeta/2)r1 "
                "failed");

  BivariatePoly p1 = radial_from(n / 2, r1, r2, lam1, c1, nullptr);
  BivariatePoly p2 = radial_from(n / 2, r1, r2, lam2, c2, nullptr);
  BivariatePoly out = p1 * p2;
  if (report) {
    report->construction = NeedleReport::Construction::TwoAnnuli;
    report->n = n;
    report->r1 = r1;
    report->r2 = r2;
    report->h = h;
    report->anchor = x;
    report->c_fit = 0.0;
  }
  return out;
}

Domain make_grain(double h) {
  if (!(h > 0.0 && h < 2.0)) throw Error("make_grain: need 0 < h < 2");
  double w = std::sqrt(1.0 - 0.25 * h * h);
  double phi = std::atan2(0.5 * h, w);  // corner angle seen from each center
  BoundaryLoop loop;
  loop.curves.push_back(
      ParametricCurve::circular_arc({0.0, 0.0}, 1.0, phi, M_PI - phi));
  loop.curves.push_back(
      ParametricCurve::circular_arc({0.0, h}, 1.0, -M_PI + phi, -phi));
  return Domain::build({loop});
}

std::shared_ptr<const ChristoffelEvaluator> BoundCache::disc(
    int n, const QuadratureSpec& spec) {
  auto it = disc_.find(n);
  if (it != disc_.end()) return it->second;
  BoundaryLoop loop;
  loop.curves.push_back(
      ParametricCurve::circular_arc({0.0, 0.0}, 1.0, 0.0, 2.0 * M_PI));
  Domain unit = Domain::build({loop});
  auto ev = std::make_shared<const ChristoffelEvaluator>(
      ChristoffelEvaluator::build(unit, n, spec));
  disc_[n] = ev;
  return ev;
}

std::shared_ptr<const ChristoffelEvaluator> BoundCache::grain(
    int n, double h, const QuadratureSpec& spec) {
  auto key = std::make_pair(n, std::bit_cast<long long>(h));
  auto it = grain_.find(key);
  if (it != grain_.end()) return it->second;
  auto ev = std::make_shared<const ChristoffelEvaluator>(
      ChristoffelEvaluator::build(make_grain(h), n, spec));
  grain_[key] = ev;
  return ev;
}

namespace {

struct CornerFrame {
  Point2 y_minus, y_plus;      // feet on the linearly extended arms
  Vec2 u_minus, u_plus;        // outward unit normals there
  double d_minus, d_plus;      // distances from x to the extended arms
  bool ok = false;
};

CornerFrame corner_frame(const Domain& domain, const CornerData& corner,
                         Point2 x) {
  CornerFrame f;
  double delta = domain.delta_geom();
  try {
    ParametricCurve em =
        local_linear_extension(corner.arm_minus, delta, delta);
    ParametricCurve ep = local_linear_extension(corner.arm_plus, delta, delta);
    NearestPoint nm = nearest_point(em, x);
    NearestPoint np = nearest_point(ep, x);
    Vec2 tm = em.eval(nm.s).d1, tp = ep.eval(np.s).d1;
    f.y_minus = nm.p;
    f.y_plus = np.p;
    f.u_minus = tm.normalized().right_normal();
    f.u_plus = tp.normalized().right_normal();
    f.d_minus = nm.distance;
    f.d_plus = np.distance;
    f.ok = true;
  } catch (const Error&) {
    f.ok = false;
  }
  return f;
}

const CornerData* nearest_corner(const Domain& domain, Point2 x,
                                 double within) {
  const CornerData* best = nullptr;
  double bd = within;
  for (const auto& c : domain.corners()) {
    double d = dist(x, c.v);
    if (d < bd) {
      bd = d;
      best = &c;
    }
  }
  return best;
}

}  // namespace

UpperBound certified_upper_bound(const Domain& domain, Point2 x, int n,
                                 const QuadratureSpec& spec) {
  if (domain.contains(x) == Membership::Outside)
    throw Error("certified_upper_bound: x must lie in the domain");
  const double delta = domain.delta_geom();
  const double diam = domain.diameter();
  const double zeta = 0.1;

  auto finish = [&](BivariatePoly witness, const char* regime) {
    UpperBound ub{0.0, std::move(witness), regime};
    ub.bound = area_integral(
        domain, [&ub](Point2 y) { double v = ub.witness(y); return v * v; },
        2 * n, spec);
    return ub;
  };

  if (n >= 4) {
    // Corner regime: both linearized arms close; two tangent discs outside
    // the arms carve the enclosing two-annuli region.
    if (const CornerData* corner = nearest_corner(domain, x, delta)) {
      CornerFrame f = corner_frame(domain, *corner, x);
      if (f.ok) {
        double r1 = delta;
        Point2 cm = f.y_minus + r1 * f.u_minus;
        Point2 cp = f.y_plus + r1 * f.u_plus;
        double sep = dist(cm, cp);
        double h = sep / (2.0 * r1);
        double zeta_eff = std::min({zeta, h, 1.0 - h});
        bool feasible = zeta_eff >= kZetaFloor &&
                        dist(x, cm) >= r1 && dist(x, cp) >= r1 &&
                        dist(x, cm) <= (1.0 + 0.5 * zeta_eff) * r1 &&
                        dist(x, cp) <= (1.0 + 0.5 * zeta_eff) * r1;
        if (feasible) {
          Point2 mid = 0.5 * (cm + cp);
          Vec2 axis = (cp - cm).normalized();  // maps to +e2
          AffineMap to_local{axis.y, -axis.x, axis.x, axis.y, 0.0, 0.0};
          Vec2 sh = to_local.apply_linear(mid);
          to_local.bx = -sh.x;
          to_local.by = -sh.y;
          double r2 = diam + 2.0 * r1;
          BivariatePoly needle = two_annuli_needle(
              n, r1, r2, h, to_local.apply(x), zeta_eff);
          BivariatePoly witness(
              [needle, to_local](Point2 y) { return needle(to_local.apply(y)); },
              needle.degree());
          return finish(std::move(witness), "corner");
        }
      }
    }

    // Edge regime: one boundary piece close; the witness lives on the
    // annulus around the outward tangent disc, narrowed along the boundary
    // direction.
    Domain::BoundaryHit hit = domain.distance_to_boundary(x);
    if (hit.distance < 0.25 * delta) {
      double r1 = 0.25 * delta;
      TangentDiscs td =
          tangent_discs(r1, hit.nearest.p, domain.curves()[hit.curve]);
      Point2 c = td.center_plus;
      double lam = dist(x, c);
      if (lam >= r1) {
        Vec2 dir = ((x - c) / lam);  // maps to +e1
        AffineMap to_local{dir.x, dir.y, -dir.y, dir.x, 0.0, 0.0};
        Vec2 sh = to_local.apply_linear(c);
        to_local.bx = -sh.x;
        to_local.by = -sh.y;
        BivariatePoly needle =
            narrowed_annulus_needle(n, r1, lam + diam, lam);
        BivariatePoly witness(
            [needle, to_local](Point2 y) { return needle(to_local.apply(y)); },
            needle.degree());
        return finish(std::move(witness), "edge");
      }
    }
  }

  // Interior (and universal fallback): disc of radius diam about x encloses
  // the whole domain.
  BivariatePoly witness =
      n == 0 ? BivariatePoly([](Point2) { return 1.0; }, 0)
             : radial_from(n, 0.0, diam, 0.0, x, nullptr);
  return finish(std::move(witness), "interior");
}

namespace {

std::shared_ptr<const Domain> disc_domain(Point2 c, double r) {
  BoundaryLoop loop;
  loop.curves.push_back(
      ParametricCurve::circular_arc(c, r, 0.0, 2.0 * M_PI));
  return std::make_shared<const Domain>(Domain::build({loop}));
}

bool subset_sampled(const Domain& reference, const Domain& domain) {
  for (const auto& poly : reference.polylines())
    for (const auto& p : poly)
      if (domain.contains(p) == Membership::Outside) return false;
  return true;
}

LowerBound lower_from_disc(const Domain& domain, Point2 x, int n,
                           Point2 c, double r, const char* regime,
                           BoundCache& cache, const QuadratureSpec& spec) {
  // shrink about x until the sampled disc boundary stays inside
  double mu = 1.0;
  for (int tries = 0; tries < 40; ++tries) {
    Point2 cc = x + mu * (c - x);
    double rr = mu * r;
    // x may sit exactly on the reference boundary (tangency point)
    bool ok = rr > 0.0 && dist(x, cc) <= rr * (1.0 + 1e-12);
    if (ok) {
      for (int i = 0; i < 128 && ok; ++i) {
        double th = 2.0 * M_PI * i / 128;
        Point2 p = cc + rr * Vec2{std::cos(th), std::sin(th)};
        ok = domain.contains(p) != Membership::Outside;
      }
    }
    if (ok) {
      auto ev = cache.disc(n, spec);
      LowerBound lb;
      lb.bound = rr * rr * ev->lambda((x - cc) / rr);
      lb.reference = disc_domain(cc, rr);
      lb.regime = regime;
      return lb;
    }
    mu *= 0.85;
  }
  throw Error("certified_lower_bound: failed to inscribe a disc");
}

}  // namespace

LowerBound certified_lower_bound(const Domain& domain, Point2 x, int n,
                                 BoundCache& cache,
                                 const QuadratureSpec& spec) {
  if (domain.contains(x) == Membership::Outside)
    throw Error("certified_lower_bound: x must lie in the domain");
  const double delta = domain.delta_geom();
  Domain::BoundaryHit hit = domain.distance_to_boundary(x);

  if (const CornerData* corner = nearest_corner(domain, x, delta)) {
    if (dist(x, corner->v) <= 1e-12 * delta) {
      // x sits on the vertex itself: no disc through x can stay inside, but
      // a small grain with its corner at x and half the opening angle does.
      double beta = 0.5 * corner->alpha;
      double h_used = std::min(2.0 - 1.0 / kGrainQuantum,
                               std::ceil(2.0 * std::cos(0.5 * beta) *
                                         kGrainQuantum) / kGrainQuantum);
      double w = std::sqrt(1.0 - 0.25 * h_used * h_used);
      Point2 corner_local{w, 0.5 * h_used};
      double phi = std::atan2(corner->t_plus.y, corner->t_plus.x) +
                   0.5 * corner->alpha;
      Vec2 bis{std::cos(phi), std::sin(phi)};  // interior bisector at x
      double s = delta;
      for (int tries = 0; tries < 60; ++tries, s *= 0.8) {
        // rotation taking the grain-corner bisector -e1 to bis, scaled by s
        AffineMap T{-s * bis.x, s * bis.y, -s * bis.y, -s * bis.x, 0.0, 0.0};
        Vec2 sh = T.apply_linear(corner_local);
        T.bx = x.x - sh.x;
        T.by = x.y - sh.y;
        Domain ref = make_grain(h_used).transformed(T);
        if (!subset_sampled(ref, domain)) continue;
        auto ev = cache.grain(n, h_used, spec);
        LowerBound lb;
        lb.bound = s * s * ev->lambda(corner_local);
        lb.reference = std::make_shared<const Domain>(std::move(ref));
        lb.regime = "corner";
        return lb;
      }
      throw Error("certified_lower_bound: failed to fit a corner grain");
    }
    CornerFrame f = corner_frame(domain, *corner, x);
    if (f.ok) {
      double r = delta;
      Point2 cm = f.y_minus - r * f.u_minus;  // inward tangent discs
      Point2 cp = f.y_plus - r * f.u_plus;
      double sep = dist(cm, cp);
      if (sep > 1e-9 * r && sep < 2.0 * r * (1.0 - 1e-9) &&
          dist(x, cm) < r && dist(x, cp) < r) {
        double h = sep / r;
        // Prefer a cache-friendly ratio from a fixed grid: rounding h up and
        // shrinking the disc radius to match keeps the reference inside both
        // tangent discs.
        double h_q = std::ceil(h * kGrainQuantum) / kGrainQuantum;
        double r_used = r, h_used = h;
        if (h_q < 2.0 && dist(x, cm) < sep / h_q && dist(x, cp) < sep / h_q) {
          h_used = h_q;
          r_used = sep / h_q;
        }
        Vec2 axis = (cp - cm) / sep;  // grain +e2 direction in world coords
        AffineMap T{r_used * axis.y, r_used * axis.x,
                    -r_used * axis.x, r_used * axis.y, cm.x, cm.y};
        Point2 x_local = T.inverse().apply(x);
        if (x_local.norm() < 1.0 - 1e-12 &&
            (x_local - Vec2{0.0, h_used}).norm() < 1.0 - 1e-12) {
          double mu = 1.0;
          for (int tries = 0; tries < 40; ++tries) {
            try {
              Domain ref = make_grain(h_used).transformed(T);
              if (mu < 1.0) ref = ref.homothety(x, mu);
              if (subset_sampled(ref, domain)) {
                auto ev = cache.grain(n, h_used, spec);
                LowerBound lb;
                lb.bound =
                    mu * mu * r_used * r_used * ev->lambda(x_local);
                lb.reference = std::make_shared<const Domain>(std::move(ref));
                lb.regime = "corner";
                return lb;
              }
            } catch (const Error&) {
              break;  // degenerate transform; use the disc fallback
            }
            mu *= 0.85;
            // shrinking about x moves the grain: fold the homothety into
            // lambda's scaling, but membership of x_local is unchanged
          }
        }
      }
    }
    // corner machinery failed: fall through to the disc references
  }

  if (hit.distance < 0.25 * delta) {
    double r = 0.25 * delta;
    try {
      TangentDiscs td =
          tangent_discs(r, hit.nearest.p, domain.curves()[hit.curve]);
      if (dist(x, td.center_minus) <= r * (1.0 + 1e-12))
        return lower_from_disc(domain, x, n, td.center_minus, r, "edge",
                               cache, spec);
    } catch (const Error&) {
    }
    // last resort near the boundary: a small disc on the interior side of x
    if (hit.distance > 0.0)
      return lower_from_disc(domain, x, n, x, 0.5 * hit.distance, "fallback",
                             cache, spec);
    double probe = 0.05 * delta;
    for (int k = 0; k < 16; ++k) {
      Vec2 dir{std::cos(2.0 * M_PI * k / 16), std::sin(2.0 * M_PI * k / 16)};
      if (domain.contains(x + probe * dir) == Membership::Inside)
        return lower_from_disc(domain, x, n, x + probe * dir, probe,
                               "fallback", cache, spec);
    }
    throw Error("certified_lower_bound: no interior direction at x");
  }

  return lower_from_disc(domain, x, n, x, hit.distance * (1.0 - 1e-9),
                         "interior", cache, spec);
}

}  // namespace chf
