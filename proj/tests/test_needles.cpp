#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chf/needles.hpp"
#include "chf/quadrature.hpp"
#include "chf/rho.hpp"
#include "chf/verification.hpp"

using namespace chf;

TEST_CASE("univariate needle anchor and degree") {
  for (int n : {4, 8, 16, 32}) {
    for (double t : {0.0, 0.1, 0.5, 1.0}) {
      NeedleReport rep;
      auto q = univariate_needle(n, t, &rep);
      CHECK(q(1.0 - t) == 1.0);  // exact by construction
      CHECK(q.degree() <= n / 2);
      CHECK(rep.max_violation == 0.0);
      CHECK(rep.c_fit > 0.0);
      CHECK(q(1.0 - t) >= 0.0);  // squared slice, nonnegative everywhere
      for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0}) CHECK(q(s) >= 0.0);
    }
  }
}

TEST_CASE("univariate needle decay envelope is stable in n") {
  for (double t : {0.25, 1.0}) {
    NeedleReport r8, r16, r32;
    univariate_needle(8, t, &r8);
    univariate_needle(16, t, &r16);
    univariate_needle(32, t, &r32);
    CHECK(r16.c_fit <= 1.5 * r8.c_fit);
    CHECK(r32.c_fit <= 1.5 * r8.c_fit);
  }
}

TEST_CASE("radial needle") {
  int n = 12;
  double r1 = 0.5, r2 = 2.0, lam = 1.2;
  NeedleReport rep;
  auto P = radial_needle(n, r1, r2, lam, &rep);
  // equal to 1 on the whole circle |y| = lam
  for (double th : {0.0, 0.7, 2.1, 4.0}) {
    Point2 y{lam * std::cos(th), lam * std::sin(th)};
    CHECK(P(y) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(P.degree() <= n);
  CHECK(rep.l2_norm_on_domain > 0.0);

  // rotation invariance of the construction
  Point2 a{0.8, 0.0}, b{0.8 * std::cos(2.0), 0.8 * std::sin(2.0)};
  CHECK(P(a) == doctest::Approx(P(b)).epsilon(1e-12).scale(1.0));

  // anchored at the outer rim
  auto Pr = radial_needle(n, r1, r2, r2);
  CHECK(Pr({r2, 0}) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("narrowed needle value and L2 scaling") {
  double r1 = 0.8, r2 = 1.6, lam = 1.2;
  double fitted = 0.0;
  for (int n : {8, 16, 32}) {
    NeedleReport rep;
    auto P = narrowed_annulus_needle(n, r1, r2, lam, &rep);
    CHECK(P({lam, 0}) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(P.degree() <= n);
    double bound = rho_star(n, lam - r1) / n;
    double ratio = rep.l2_norm_on_domain * rep.l2_norm_on_domain / bound;
    if (n == 8)
      fitted = ratio;
    else
      CHECK(ratio <= 1.5 * fitted);

    // decays along the anchor circle away from (lam, 0)
    double at_anchor = std::abs(P({lam, 0}));
    double far = std::abs(P({lam * std::cos(2.5), lam * std::sin(2.5)}));
    CHECK(far < 0.5 * at_anchor);
  }
}

TEST_CASE("two annuli needle") {
  int n = 16;
  double r1 = 1.0, h = 0.5, r2 = 6.0;
  Point2 c1{0, -r1 * h}, c2{0, r1 * h};
  Point2 x{std::sqrt(r1 * r1 - r1 * h * r1 * h), 0.0};
  REQUIRE(std::abs(dist(x, c1) - r1) < 1e-12);

  NeedleReport rep;
  auto P = two_annuli_needle(n, r1, r2, h, x, 0.1, &rep);
  CHECK(P(x) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(P.degree() <= n);

  // mirror symmetry in the x-axis (both centers sit symmetric about it)
  for (Point2 y : {Point2{1.4, 0.3}, Point2{0.9, 0.8}})
    CHECK(P(y) == doctest::Approx(P({y.x, -y.y})).epsilon(1e-12).scale(1.0));

  // hypothesis violations are rejected (h outside [zeta, 1-zeta]; x too far)
  CHECK_THROWS_AS(two_annuli_needle(n, r1, r2, 0.99, {0.0, 0.0}), Error);
  Point2 far{3.0, 0.0};
  CHECK_THROWS_AS(two_annuli_needle(n, r1, r2, h, far), Error);
}

TEST_CASE("grain domain") {
  for (double h : {0.5, 1.0, 1.5}) {
    Domain g = make_grain(h);
    double exact = 2.0 * std::acos(h / 2) - (h / 2) * std::sqrt(4 - h * h);
    CHECK(g.area() == doctest::Approx(exact).epsilon(1e-5));
    REQUIRE(g.corners().size() == 2);
    double alpha = M_PI - std::acos(1.0 - h * h / 2.0);
    CHECK(g.corners()[0].alpha == doctest::Approx(alpha).epsilon(1e-8));
    // corners at (+-sqrt(1-h^2/4), h/2)
    double w = std::sqrt(1.0 - h * h / 4.0);
    for (const auto& c : g.corners()) {
      CHECK(std::abs(c.v.x) == doctest::Approx(w).epsilon(1e-10));
      CHECK(c.v.y == doctest::Approx(h / 2).epsilon(1e-10));
    }
  }
}

TEST_CASE("upper bound on the disc") {
  Domain disc = gallery("disc");
  BoundCache cache;
  for (int n : {0, 4, 8}) {
    auto ev = ChristoffelEvaluator::build(disc, n);
    for (Point2 x : {Point2{0, 0}, Point2{0.5, 0.2}, Point2{0.0, 0.97}}) {
      auto ub = certified_upper_bound(disc, x, n);
      double lam = ev.lambda(x);
      CHECK(ub.bound >= lam * (1 - 1e-10));
      CHECK(ub.witness(x) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(ub.witness.degree() <= n);
    }
  }
}

TEST_CASE("upper bound near a corner stays finite") {
  Domain len = gallery("lens:1.0");
  int n = 16;
  const auto& c = len.corners()[0];
  Vec2 bis = {std::cos(std::atan2(c.t_plus.y, c.t_plus.x) + c.alpha / 2),
              std::sin(std::atan2(c.t_plus.y, c.t_plus.x) + c.alpha / 2)};
  Point2 x = c.v + 0.01 * bis;
  REQUIRE(len.is_inside(x));
  auto ub = certified_upper_bound(len, x, n);
  CHECK(ub.regime == "corner");
  CHECK(std::isfinite(ub.bound));
  CHECK(ub.bound > 0.0);
  CHECK(ub.witness(x) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("lower bound on the disc") {
  Domain disc = gallery("disc");
  BoundCache cache;
  int n = 6;
  auto ev = ChristoffelEvaluator::build(disc, n);
  // at the center the inscribed disc is the domain itself
  auto lb = certified_lower_bound(disc, {0, 0}, n, cache);
  double lam = ev.lambda({0, 0});
  CHECK(lb.bound <= lam * (1 + 1e-9));
  CHECK(lb.bound >= lam * (1 - 1e-6));

  for (Point2 x : {Point2{0.5, 0.0}, Point2{0.0, 0.9}, Point2{1.0, 0.0}}) {
    auto l = certified_lower_bound(disc, x, n, cache);
    CHECK(l.bound > 0.0);
    CHECK(l.bound <= ev.lambda(x) * (1 + 1e-8));
  }
}

TEST_CASE("lower bound respects monotonicity on cornered domains") {
  BoundCache cache;
  for (const char* name : {"square", "lens:1.0"}) {
    Domain d = gallery(name);
    int n = 8;
    auto ev = ChristoffelEvaluator::build(d, n);
    const auto& c = d.corners()[0];
    Vec2 bis = {std::cos(std::atan2(c.t_plus.y, c.t_plus.x) + c.alpha / 2),
                std::sin(std::atan2(c.t_plus.y, c.t_plus.x) + c.alpha / 2)};
    for (double dd : {0.3, 0.05, 0.01, 1.0 / (n * n)}) {
      Point2 x = c.v + dd * bis;
      if (!d.is_inside(x)) continue;
      auto lb = certified_lower_bound(d, x, n, cache);
      auto ub = certified_upper_bound(d, x, n);
      double lam = ev.lambda(x);
      CHECK(lb.bound <= lam * (1 + 1e-8));
      CHECK(lam <= ub.bound * (1 + 1e-8));
      CHECK(lb.bound > 0.0);
    }
  }
}

TEST_CASE("bound cache reuse") {
  BoundCache cache;
  QuadratureSpec spec;
  auto d1 = cache.disc(6, spec);
  auto d2 = cache.disc(6, spec);
  CHECK(d1.get() == d2.get());
  auto g1 = cache.grain(4, 1.0, spec);
  auto g2 = cache.grain(4, 1.0, spec);
  CHECK(g1.get() == g2.get());
  CHECK(cache.grain(4, 1.25, spec).get() != g1.get());
}
