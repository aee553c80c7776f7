// Acceptance suite: every release gate in one binary. Each criterion prints
// a single PASS/FAIL line with its measured quantities; the exit status is
// the number of failures.

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "chf/christoffel.hpp"
#include "chf/cubature.hpp"
#include "chf/needles.hpp"
#include "chf/verification.hpp"

using namespace chf;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion-%d %s\n", ok ? "PASS" : "FAIL", id,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---- 1: degree-zero lambda equals the area --------------------------------

void criterion_1() {
  struct Case {
    const char* name;
    double area;
  };
  double h = 1.0;
  Case cases[] = {
      {"disc", M_PI},
      {"square", 4.0},
      {"lens:1.0", 2.0 * std::acos(h / 2) - (h / 2) * std::sqrt(4 - h * h)},
  };
  bool ok = true;
  std::string detail = "lambda_0 == area:";
  for (const auto& c : cases) {
    auto t0 = Clock::now();
    Domain d = gallery(c.name);
    auto ev = ChristoffelEvaluator::build(d, 0);
    double lam = ev.lambda(d.bounding_box().center());
    double el = seconds_since(t0);
    double rel = std::abs(lam - c.area) / c.area;
    ok = ok && rel <= 1e-9 && el < 1.0;
    detail += std::string(" ") + c.name + " rel=" + fmt(rel) +
              " t=" + fmt(el) + "s";
  }
  report(1, ok, detail);
}

// ---- 2: Green pipeline vs polygonal cubature ------------------------------

void criterion_2() {
  bool ok = true;
  double worst = 0.0;
  for (const char* name : {"disc", "square"}) {
    Domain d = gallery(name);
    for (int n : {4, 8}) {
      auto ev = ChristoffelEvaluator::build(d, n);
      PolyBasis basis(n, d.bounding_box());
      Eigen::MatrixXd gp = polygonal_gram_matrix(d, basis, 1e-9);
      Eigen::LLT<Eigen::MatrixXd> llt(gp);
      int used = 0;
      for (int i = 0; i < 5 && used < 25; ++i)
        for (int j = 0; j < 5 && used < 25; ++j) {
          Point2 x{-0.6 + 0.3 * i, -0.6 + 0.3 * j};
          if (d.contains(x) != Membership::Inside) continue;
          ++used;
          Eigen::VectorXd phi = basis.eval(x);
          double lam_poly = 1.0 / phi.dot(llt.solve(phi));
          double rel = std::abs(lam_poly - ev.lambda(x)) / ev.lambda(x);
          worst = std::max(worst, rel);
        }
      ok = ok && used == 25;
    }
  }
  ok = ok && worst <= 1e-6;
  report(2, ok, "pipeline agreement, worst rel=" + fmt(worst));
}

// ---- 3: affine invariance --------------------------------------------------

void criterion_3() {
  auto rep = affine_invariance_check(gallery("square"), 10, 20, 2026);
  bool ok = rep.max_rel_error <= 1e-6;
  report(3, ok, "affine maps=20 n=10 max rel=" + fmt(rep.max_rel_error));
}

// ---- 4: domain monotonicity half-disc vs disc ------------------------------

void criterion_4() {
  BoundaryLoop loop;
  loop.curves.push_back(ParametricCurve::circular_arc({0, 0}, 1.0, 0.0, M_PI));
  loop.curves.push_back(ParametricCurve::segment({-1, 0}, {1, 0}));
  Domain half = Domain::build({loop});
  Domain disc = gallery("disc");

  bool ok = true;
  double worst = 0.0;
  for (int n : {5, 10}) {
    auto ev_d = ChristoffelEvaluator::build(disc, n);
    auto ev_h = ChristoffelEvaluator::build(half, n);
    GridSpec g;
    g.nx = 9;
    g.ny = 9;
    for (const auto& x : grid_points(half, g, n)) {
      double excess = ev_h.lambda(x) / ev_d.lambda(x) - 1.0;
      worst = std::max(worst, excess);
      ok = ok && excess <= 1e-8;
    }
  }
  report(4, ok, "half-disc <= disc, worst excess=" + fmt(worst));
}

// ---- 5: ball behavior -------------------------------------------------------

void criterion_5() {
  auto t0 = Clock::now();
  auto rep = ball_behavior_check({4, 8, 16, 24}, 6);
  double el = seconds_since(t0);

  double lo_mid = 1e300, hi_mid = 0;
  for (const auto& s : rep.per_n) {
    double mid = std::sqrt(s.r_min * s.r_max);
    lo_mid = std::min(lo_mid, mid);
    hi_mid = std::max(hi_mid, mid);
  }
  bool ok = rep.overall_spread <= 25.0 && hi_mid / lo_mid <= 2.0 && el <= 300;
  report(5, ok,
         "ball spread=" + fmt(rep.overall_spread) +
             " per-n drift=" + fmt(hi_mid / lo_mid) + " t=" + fmt(el) + "s");
}

// ---- 6 & 9: cornered-domain ratios and the certified sandwich --------------

std::vector<GridSpec> cornered_grids(const Domain& d) {
  std::vector<GridSpec> grids;
  GridSpec cart;
  cart.nx = 9;
  cart.ny = 9;
  grids.push_back(cart);
  for (int j = 0; j < static_cast<int>(d.corners().size()); ++j) {
    GridSpec g;
    g.kind = GridSpec::Kind::CornerApproach;
    g.corner = j;
    g.levels = 10;
    grids.push_back(g);
  }
  return grids;
}

void criterion_6(std::vector<RatioReport>& out) {
  bool ok = true;
  std::string detail = "two-sided ratio:";
  for (const char* name : {"square", "lens:1.0"}) {
    Domain d = gallery(name);
    auto rep = ratio_study(d, {4, 8, 16}, cornered_grids(d));
    // The absolute ratio level keeps drifting upward through n=32 (slow
    // equilibrium-measure convergence), so the refutable content of the
    // two-sided comparison is (a) the lower constant fitted at n=4 keeps
    // covering larger n and (b) the per-n spread max/min, the ratio of the
    // upper to the lower constant, grows by at most 1.5x per doubling of
    // the degree.
    double min4 = 0;
    double prev_spread = 0;
    bool covered = true;
    for (const auto& s : rep.per_n) {
      double spread_n = s.r_max / s.r_min;
      if (s.n == 4) {
        min4 = s.r_min;
      } else {
        covered = covered && s.r_min >= min4 / 1.5 &&
                  spread_n <= 1.5 * prev_spread;
      }
      prev_spread = spread_n;
    }
    ok = ok && rep.overall_spread <= 50.0 && covered;
    detail += std::string(" ") + name + " spread=" +
              fmt(rep.overall_spread) + (covered ? " covered" : " uncovered");
    out.push_back(std::move(rep));
  }
  report(6, ok, detail);
}

void criterion_9() {
  bool ok = true;
  std::string detail = "sandwich:";
  for (const char* name : {"square", "lens:1.0"}) {
    Domain d = gallery(name);
    auto rep = sandwich_check(d, {4, 8, 16}, cornered_grids(d));
    bool ordered = rep.ordered(1e-8);
    double wd = rep.worst_witness_deviation();
    ok = ok && ordered && wd <= 1e-10;
    detail += std::string(" ") + name + " rows=" +
              std::to_string(rep.rows.size()) +
              (ordered ? " ordered" : " UNORDERED") + " wd=" + fmt(wd);
  }
  report(9, ok, detail);
}

// ---- 7: grain lower constant ------------------------------------------------

void criterion_7() {
  GridSpec cart;
  cart.nx = 7;
  cart.ny = 7;
  Domain grain = make_grain(1.0);
  std::vector<GridSpec> grids{cart};
  for (int j = 0; j < 2; ++j) {
    GridSpec g;
    g.kind = GridSpec::Kind::CornerApproach;
    g.corner = j;
    grids.push_back(g);
  }
  auto rep = grain_lower_check(1.0, {4, 8, 16}, grids);
  double min4 = 0;
  for (const auto& r : rep.per_n)
    if (r.n == 4) min4 = r.min_ratio;
  bool ok = min4 > 0;
  std::string detail = "grain h=1 min-ratio:";
  for (const auto& r : rep.per_n) {
    if (r.n != 4) ok = ok && r.min_ratio >= min4 / 1.5 && r.min_ratio > 0;
    detail += " n" + std::to_string(r.n) + "=" + fmt(r.min_ratio);
  }
  report(7, ok, detail);
}

// ---- 8: needle decay and L2 size --------------------------------------------

void criterion_8() {
  bool ok = true;
  double c8 = 0;
  std::string detail = "needle c_fit:";
  for (int n : {8, 16, 32}) {
    double worst = 0;
    for (double t : {0.0, 0.01, 0.25, 1.0}) {
      NeedleReport rep;
      univariate_needle(n, t, &rep);
      worst = std::max(worst, rep.c_fit);
      ok = ok && rep.max_violation == 0.0;
    }
    if (n == 8)
      c8 = worst;
    else
      ok = ok && worst <= 1.5 * c8;
    detail += " n" + std::to_string(n) + "=" + fmt(worst);
  }

  double fit8 = 0;
  double r1 = 0.8, r2 = 1.6, lam = 1.2;
  for (int n : {8, 16, 32}) {
    NeedleReport rep;
    narrowed_annulus_needle(n, r1, r2, lam, &rep);
    double ratio = rep.l2_norm_on_domain * rep.l2_norm_on_domain /
                   (rho_star(n, lam - r1) / n);
    if (n == 8)
      fit8 = ratio;
    else
      ok = ok && ratio <= 1.5 * fit8;
  }
  detail += " l2fit=" + fmt(fit8);
  report(8, ok, detail);
}

// ---- 10: kernel norm control on homothetic copies ---------------------------

void criterion_10() {
  bool ok = true;
  double worst = 0.0;
  for (const char* name : {"disc", "square", "lens:1.0"}) {
    Domain d = gallery(name);
    GridSpec g;
    g.nx = 5;
    g.ny = 5;
    std::vector<Point2> xs;
    for (const auto& p : grid_points(d, g, 8))
      if (d.contains(p) == Membership::Inside && xs.size() < 10)
        xs.push_back(p);
    auto rep = norm_control_check(d, xs, {0.25, 0.5}, 8);
    for (const auto& r : rep.rows) {
      worst = std::max(worst, r.sup - r.bound);
      ok = ok && r.sup <= r.bound + 1e-6;
    }
  }
  report(10, ok, "kernel sup <= 1/mu, worst excess=" + fmt(worst));
}

// ---- 11: constrained Bernstein constant --------------------------------------

void criterion_11() {
  auto rep = videnskii_check({8, 16, 32}, M_PI / 2, 200, 7);
  double c8 = 0;
  bool ok = true;
  std::string detail = "videnskii c~:";
  for (const auto& r : rep.per_n) {
    if (r.n == 8)
      c8 = r.c_tilde;
    else
      ok = ok && r.c_tilde <= 1.5 * c8;
    detail += " n" + std::to_string(r.n) + "=" + fmt(r.c_tilde);
  }
  report(11, ok, detail);
}

// ---- 12: performance ----------------------------------------------------------

void criterion_12(double suite_seconds) {
  auto t0 = Clock::now();
  auto ev = ChristoffelEvaluator::build(gallery("disc"), 16, {},
                                        PrecisionMode::Double);
  double build = seconds_since(t0);
  (void)ev.lambda({0.3, 0.2});
  bool ok = build <= 60.0 && suite_seconds <= 1800.0;
  report(12, ok,
         "disc n=16 build=" + fmt(build) + "s suite=" + fmt(suite_seconds) +
             "s");
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  std::vector<RatioReport> ratio_reports;
  criterion_6(ratio_reports);
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12(seconds_since(t0));
  if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
