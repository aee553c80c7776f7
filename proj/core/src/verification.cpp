#include "chf/verification.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

namespace chf {

namespace {

Domain unit_disc() {
  BoundaryLoop loop;
  loop.curves.push_back(
      ParametricCurve::circular_arc({0.0, 0.0}, 1.0, 0.0, 2.0 * M_PI));
  return Domain::build({loop});
}

Domain make_square() {
  BoundaryLoop loop;
  loop.curves.push_back(ParametricCurve::segment({-1, -1}, {1, -1}));
  loop.curves.push_back(ParametricCurve::segment({1, -1}, {1, 1}));
  loop.curves.push_back(ParametricCurve::segment({1, 1}, {-1, 1}));
  loop.curves.push_back(ParametricCurve::segment({-1, 1}, {-1, -1}));
  return Domain::build({loop});
}

Domain make_triangle() {
  BoundaryLoop loop;
  loop.curves.push_back(ParametricCurve::segment({0, 0}, {1, 0}));
  loop.curves.push_back(
      ParametricCurve::segment({1, 0}, {0.5, std::sqrt(3.0) / 2}));
  loop.curves.push_back(
      ParametricCurve::segment({0.5, std::sqrt(3.0) / 2}, {0, 0}));
  return Domain::build({loop});
}

Domain make_blob() {
  BoundaryLoop loop;
  loop.curves.push_back(
      ParametricCurve::polar_graph({0, 0}, {1.0, 0.0, 0.0, 0.3}, {}));
  return Domain::build({loop});
}

Domain make_drop() {
  // unit circle plus the two tangent lines meeting at an apex angle of pi/4
  double apex = 1.0 / std::sin(M_PI / 8.0);
  Point2 a{-apex, 0.0};
  double th_hi = 5.0 * M_PI / 8.0, th_lo = 11.0 * M_PI / 8.0;
  Point2 t_hi{std::cos(th_hi), std::sin(th_hi)};
  Point2 t_lo{std::cos(th_lo), std::sin(th_lo)};
  BoundaryLoop loop;
  loop.curves.push_back(ParametricCurve::segment(a, t_lo));
  loop.curves.push_back(
      ParametricCurve::circular_arc({0, 0}, 1.0, th_lo, th_hi + 2.0 * M_PI));
  loop.curves.push_back(ParametricCurve::segment(t_hi, a));
  return Domain::build({loop});
}

Vec2 rotate(Vec2 v, double a) {
  double c = std::cos(a), s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

}  // namespace

Domain gallery(const std::string& name) {
  if (name == "disc") return unit_disc();
  if (name == "square") return make_square();
  if (name == "triangle") return make_triangle();
  if (name == "blob") return make_blob();
  if (name == "drop") return make_drop();
  if (name == "lens") return make_grain(1.0);
  if (name.rfind("lens:", 0) == 0) {
    double h = std::stod(name.substr(5));
    return make_grain(h);
  }
  throw Error("gallery: unknown domain name '" + name + "'");
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  if (kind == Kind::Cartesian)
    os << "cart:" << nx << "," << ny;
  else
    os << "corner:" << corner << "," << levels;
  return os.str();
}

std::vector<Point2> grid_points(const Domain& domain, const GridSpec& spec,
                                int n_max) {
  std::vector<Point2> out;
  if (spec.kind == GridSpec::Kind::Cartesian) {
    const BBox& box = domain.bounding_box();
    for (int i = 0; i < spec.nx; ++i) {
      for (int j = 0; j < spec.ny; ++j) {
        Point2 p{spec.nx > 1 ? box.xmin + box.width() * i / (spec.nx - 1)
                             : box.center().x,
                 spec.ny > 1 ? box.ymin + box.height() * j / (spec.ny - 1)
                             : box.center().y};
        if (domain.contains(p) != Membership::Outside) out.push_back(p);
      }
    }
    return out;
  }
  if (spec.corner < 0 ||
      spec.corner >= static_cast<int>(domain.corners().size()))
    throw Error("grid_points: corner index out of range");
  const CornerData& c = domain.corners()[spec.corner];
  // interior wedge spans from t_plus, counterclockwise, to -t_minus
  std::vector<Vec2> dirs = {
      rotate(c.t_plus, 0.5 * c.alpha),                  // bisector
      Vec2{-c.t_plus.y, c.t_plus.x},                    // inward normal, arm+
      Vec2{-c.t_minus.y, c.t_minus.x},                  // inward normal, arm-
  };
  double d_min = n_max >= 1 ? 0.25 / (static_cast<double>(n_max) * n_max)
                            : 0.25;
  int k_max = std::max(
      spec.levels, static_cast<int>(std::ceil(-std::log2(d_min))));
  for (const Vec2& dir : dirs) {
    for (int k = 1; k <= k_max; ++k) {
      double d = std::ldexp(1.0, -k);
      if (d < d_min) break;
      Point2 p = c.v + d * dir;
      if (domain.contains(p) != Membership::Outside) out.push_back(p);
    }
  }
  return out;
}

namespace {

std::vector<RatioSummary> summarize(const std::vector<RatioPoint>& pts,
                                    const std::vector<int>& n_list,
                                    double* overall) {
  std::vector<RatioSummary> out;
  double omin = std::numeric_limits<double>::infinity(), omax = 0.0;
  for (int n : n_list) {
    RatioSummary s;
    s.n = n;
    s.r_min = std::numeric_limits<double>::infinity();
    s.r_max = 0.0;
    for (const auto& p : pts) {
      if (p.n != n) continue;
      s.r_min = std::min(s.r_min, p.ratio);
      s.r_max = std::max(s.r_max, p.ratio);
    }
    s.spread = s.r_min > 0.0 ? s.r_max / s.r_min : 0.0;
    omin = std::min(omin, s.r_min);
    omax = std::max(omax, s.r_max);
    out.push_back(s);
  }
  if (overall) *overall = omin > 0.0 ? omax / omin : 0.0;
  return out;
}

}  // namespace

RatioReport ratio_study(const Domain& domain, const std::vector<int>& n_list,
                        const std::vector<GridSpec>& grids,
                        const QuadratureSpec& spec) {
  RatioReport rep;
  rep.n_list = n_list;
  int n_max = *std::max_element(n_list.begin(), n_list.end());
  std::vector<Point2> pts;
  for (const auto& g : grids) {
    auto p = grid_points(domain, g, n_max);
    pts.insert(pts.end(), p.begin(), p.end());
    if (!rep.grid_desc.empty()) rep.grid_desc += ";";
    rep.grid_desc += g.describe();
  }
  for (int n : n_list) {
    ChristoffelEvaluator ev = ChristoffelEvaluator::build(domain, n, spec);
    for (const auto& x : pts) {
      FormulaBreakdown fb = theorem_rhs(domain, x, n);
      RatioPoint rp;
      rp.x = x;
      rp.n = n;
      rp.lambda = ev.lambda(x);
      rp.formula = fb.lambda_formula;
      rp.ratio = rp.lambda / rp.formula;
      rp.argmin_tag = fb.argmin_tag;
      rep.points.push_back(rp);
    }
  }
  rep.per_n = summarize(rep.points, n_list, &rep.overall_spread);
  return rep;
}

void RatioReport::write_csv(std::ostream& os) const {
  os << "x,y,n,lambda,formula,ratio,argmin\n";
  os.precision(17);
  for (const auto& p : points)
    os << p.x.x << "," << p.x.y << "," << p.n << "," << p.lambda << ","
       << p.formula << "," << p.ratio << "," << p.argmin_tag << "\n";
}

std::string RatioReport::summary_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"domain\":\"" << domain_id << "\",\"grid\":\"" << grid_desc
     << "\",\"per_n\":[";
  for (std::size_t i = 0; i < per_n.size(); ++i) {
    const auto& s = per_n[i];
    os << (i ? "," : "") << "{\"n\":" << s.n << ",\"r_min\":" << s.r_min
       << ",\"r_max\":" << s.r_max << ",\"spread\":" << s.spread << "}";
  }
  os << "],\"overall_spread\":" << overall_spread << "}";
  return os.str();
}

BallReport ball_behavior_check(const std::vector<int>& n_list,
                               int radial_samples,
                               const QuadratureSpec& spec) {
  Domain disc = unit_disc();
  BallReport rep;
  std::vector<double> log_n, log_lambda_boundary;
  for (int n : n_list) {
    ChristoffelEvaluator ev = ChristoffelEvaluator::build(disc, n, spec);
    std::vector<double> svals = {0.0, 1.0 / (static_cast<double>(n) * n),
                                 1.0 / n, 0.5, 1.0};
    for (int j = 0; j < radial_samples; ++j)
      svals.push_back((j + 0.5) / radial_samples);
    for (double s : svals) {
      double lam = ev.lambda({1.0 - s, 0.0});
      rep.rows.push_back({n, s, lam * n / rho_star(n, s)});
      if (s == 0.0) {
        log_n.push_back(std::log(static_cast<double>(n)));
        log_lambda_boundary.push_back(std::log(lam));
      }
    }
  }
  std::vector<RatioPoint> as_pts;
  for (const auto& r : rep.rows) {
    RatioPoint p;
    p.n = r.n;
    p.ratio = r.ratio;
    as_pts.push_back(p);
  }
  rep.per_n = summarize(as_pts, n_list, &rep.overall_spread);
  if (log_n.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
      mx += log_n[i];
      my += log_lambda_boundary[i];
    }
    mx /= log_n.size();
    my /= log_n.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
      num += (log_n[i] - mx) * (log_lambda_boundary[i] - my);
      den += (log_n[i] - mx) * (log_n[i] - mx);
    }
    rep.boundary_slope = num / den;
  }
  return rep;
}

void BallReport::write_csv(std::ostream& os) const {
  os << "n,s,ratio\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.n << "," << r.s << "," << r.ratio << "\n";
}

GrainReport grain_lower_check(double h, const std::vector<int>& n_list,
                              const std::vector<GridSpec>& grids,
                              const QuadratureSpec& spec) {
  Domain grain = make_grain(h);
  GrainReport rep;
  rep.h = h;
  int n_max = *std::max_element(n_list.begin(), n_list.end());
  std::vector<Point2> pts;
  for (const auto& g : grids) {
    auto p = grid_points(grain, g, n_max);
    pts.insert(pts.end(), p.begin(), p.end());
  }
  for (int n : n_list) {
    ChristoffelEvaluator ev = ChristoffelEvaluator::build(grain, n, spec);
    GrainReport::Row row{n, std::numeric_limits<double>::infinity(), 0.0};
    for (const auto& x : pts) {
      double d1 = 1.0 - x.norm();
      double d2 = 1.0 - (x - Vec2{0.0, h}).norm();
      if (d1 < 0.0 || d2 < 0.0) continue;  // roundoff at the boundary
      double ratio = ev.lambda(x) / (rho_star(n, d1) * rho_star(n, d2));
      row.min_ratio = std::min(row.min_ratio, ratio);
      row.max_ratio = std::max(row.max_ratio, ratio);
    }
    rep.per_n.push_back(row);
  }
  return rep;
}

double TrigPoly::value(double theta) const {
  double v = 0.0;
  for (int k = 0; k < cos_coeffs.size(); ++k)
    v += cos_coeffs[k] * std::cos(k * theta);
  for (int k = 1; k <= sin_coeffs.size(); ++k)
    v += sin_coeffs[k - 1] * std::sin(k * theta);
  return v;
}

double TrigPoly::derivative(double theta) const {
  double v = 0.0;
  for (int k = 1; k < cos_coeffs.size(); ++k)
    v -= cos_coeffs[k] * k * std::sin(k * theta);
  for (int k = 1; k <= sin_coeffs.size(); ++k)
    v += sin_coeffs[k - 1] * k * std::cos(k * theta);
  return v;
}

VidenskiiReport videnskii_check(const std::vector<int>& n_list, double beta,
                                int trials, unsigned long long seed) {
  if (!(beta > 0.0 && beta < M_PI))
    throw Error("videnskii_check: beta must be in (0, pi)");
  VidenskiiReport rep;
  rep.beta = beta;
  rep.trials = trials;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int n : n_list) {
    std::vector<TrigPoly> cases;
    for (int tr = 0; tr < trials; ++tr) {
      TrigPoly t;
      t.cos_coeffs.resize(n + 1);
      t.sin_coeffs.resize(n);
      for (int k = 0; k <= n; ++k) t.cos_coeffs[k] = gauss(rng);
      for (int k = 0; k < n; ++k) t.sin_coeffs[k] = gauss(rng);
      cases.push_back(std::move(t));
    }
    TrigPoly extremal;  // cos(n theta)
    extremal.cos_coeffs = Eigen::VectorXd::Zero(n + 1);
    extremal.cos_coeffs[n] = 1.0;
    extremal.sin_coeffs = Eigen::VectorXd::Zero(n);
    cases.push_back(std::move(extremal));

    const int grid = 512 + 64 * n;
    double c_tilde = 0.0, c_random = 0.0;
    for (std::size_t idx = 0; idx < cases.size(); ++idx) {
      const auto& t = cases[idx];
      double sup = 0.0, weighted = 0.0;
      for (int i = 0; i <= grid; ++i) {
        double th = -beta + 2.0 * beta * i / grid;
        sup = std::max(sup, std::abs(t.value(th)));
        double w = rho_star(n, beta - std::abs(th));
        weighted = std::max(weighted, std::abs(t.derivative(th)) * w);
      }
      if (sup > 0.0) {
        c_tilde = std::max(c_tilde, weighted / sup);
        if (idx < static_cast<std::size_t>(trials))
          c_random = std::max(c_random, weighted / sup);
      }
    }
    rep.per_n.push_back({n, c_tilde, c_random});
  }
  return rep;
}

NormControlReport norm_control_check(const Domain& domain,
                                     const std::vector<Point2>& x_list,
                                     const std::vector<double>& mu_list,
                                     int n, const QuadratureSpec& spec) {
  NormControlReport rep;
  rep.n = n;
  ChristoffelEvaluator ev = ChristoffelEvaluator::build(domain, n, spec);
  for (const auto& x : x_list) {
    BivariatePoly p = ev.kernel_polynomial(x);
    for (double mu : mu_list) {
      NormControlReport::Row row;
      row.x = x;
      row.mu = mu;
      row.bound = 1.0 / mu;
      if (mu >= 1.0 - 1e-12) {
        row.sup = std::abs(p(x));  // the homothetic region degenerates to {x}
      } else {
        Domain region = domain.homothety(x, 1.0 - mu);
        row.sup = sup_on_region(p, region).value;
      }
      rep.rows.push_back(row);
    }
  }
  return rep;
}

bool NormControlReport::all_within(double tol) const {
  for (const auto& r : rows)
    if (r.sup > r.bound + tol) return false;
  return true;
}

AffineReport affine_invariance_check(const Domain& domain, int n, int trials,
                                     unsigned long long seed,
                                     const QuadratureSpec& spec) {
  AffineReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);

  // a few interior base points
  std::vector<Point2> pts;
  const BBox& box = domain.bounding_box();
  for (int i = 0; i < 7 && pts.size() < 5; ++i) {
    for (int j = 0; j < 7 && pts.size() < 5; ++j) {
      Point2 p{box.xmin + box.width() * (i + 0.5) / 7,
               box.ymin + box.height() * (j + 0.5) / 7};
      if (domain.contains(p) == Membership::Inside) pts.push_back(p);
    }
  }
  if (pts.empty()) throw Error("affine_invariance_check: no interior points");

  ChristoffelEvaluator base = ChristoffelEvaluator::build(domain, n, spec);
  std::vector<double> lam0;
  for (const auto& p : pts) lam0.push_back(base.lambda(p));

  for (int tr = 0; tr < trials; ++tr) {
    AffineMap m;
    do {
      m.a00 = uni(rng);
      m.a01 = uni(rng);
      m.a10 = uni(rng);
      m.a11 = uni(rng);
    } while (std::abs(m.det()) < 0.2 || std::abs(m.det()) > 5.0);
    m.bx = 0.5 * uni(rng);
    m.by = 0.5 * uni(rng);
    Domain mapped = domain.transformed(m);
    ChristoffelEvaluator ev = ChristoffelEvaluator::build(mapped, n, spec);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double got = ev.lambda(m.apply(pts[i]));
      double want = std::abs(m.det()) * lam0[i];
      rep.max_rel_error =
          std::max(rep.max_rel_error, std::abs(got - want) / want);
    }
  }
  return rep;
}

SandwichReport sandwich_check(const Domain& domain,
                              const std::vector<int>& n_list,
                              const std::vector<GridSpec>& grids,
                              const QuadratureSpec& spec) {
  SandwichReport rep;
  int n_max = *std::max_element(n_list.begin(), n_list.end());
  std::vector<Point2> pts;
  for (const auto& g : grids) {
    auto p = grid_points(domain, g, n_max);
    pts.insert(pts.end(), p.begin(), p.end());
  }
  BoundCache cache;
  for (int n : n_list) {
    ChristoffelEvaluator ev = ChristoffelEvaluator::build(domain, n, spec);
    for (const auto& x : pts) {
      SandwichReport::Row row;
      row.x = x;
      row.n = n;
      row.lambda = ev.lambda(x);
      LowerBound lb = certified_lower_bound(domain, x, n, cache, spec);
      UpperBound ub = certified_upper_bound(domain, x, n, spec);
      row.lower = lb.bound;
      row.upper = ub.bound;
      row.witness_at_x = ub.witness(x);
      row.lower_regime = lb.regime;
      row.upper_regime = ub.regime;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

bool SandwichReport::ordered(double rel_slack) const {
  for (const auto& r : rows) {
    if (r.lower > r.lambda * (1.0 + rel_slack)) return false;
    if (r.lambda > r.upper * (1.0 + rel_slack)) return false;
  }
  return true;
}

double SandwichReport::worst_witness_deviation() const {
  double w = 0.0;
  for (const auto& r : rows)
    w = std::max(w, std::abs(r.witness_at_x - 1.0));
  return w;
}

void SandwichReport::write_csv(std::ostream& os) const {
  os << "x,y,n,lower,lambda,upper,witness_at_x,lower_regime,upper_regime\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.x.x << "," << r.x.y << "," << r.n << "," << r.lower << ","
       << r.lambda << "," << r.upper << "," << r.witness_at_x << ","
       << r.lower_regime << "," << r.upper_regime << "\n";
}

}  // namespace chf
