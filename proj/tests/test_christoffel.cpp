#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chf/christoffel.hpp"
#include "chf/cubature.hpp"
#include "chf/verification.hpp"

using namespace chf;

namespace {

Domain half_disc() {
  BoundaryLoop loop;
  loop.curves.push_back(ParametricCurve::circular_arc({0, 0}, 1.0, 0.0, M_PI));
  loop.curves.push_back(ParametricCurve::segment({-1, 0}, {1, 0}));
  return Domain::build({loop});
}

}  // namespace

TEST_CASE("degree zero is the area") {
  double lens_area = 2.0 * std::acos(0.5) - 0.5 * std::sqrt(3.0);
  std::pair<const char*, double> cases[] = {
      {"disc", M_PI},
      {"square", 4.0},
      {"lens:1.0", lens_area},
      {"triangle", std::sqrt(3.0) / 4.0},
  };
  for (const auto& [name, area] : cases) {
    Domain d = gallery(name);
    auto ev = ChristoffelEvaluator::build(d, 0);
    CHECK(ev.lambda({d.bounding_box().center()}) ==
          doctest::Approx(area).epsilon(1e-9));
  }
}

TEST_CASE("disc degree one at the center") {
  Domain disc = gallery("disc");
  auto ev = ChristoffelEvaluator::build(disc, 1);
  // the degree-one orthonormal polynomials are odd and vanish at 0, so only
  // the constant 1/sqrt(pi) contributes: lambda_1(B, 0) = pi
  CHECK(ev.lambda({0, 0}) == doctest::Approx(M_PI).epsilon(1e-9));
}

TEST_CASE("disc radial profile oracle") {
  // 50-digit reference values from the closed-form disc moments
  // (2 B((a+1)/2, (b+1)/2) / (a+b+2) for even exponents)
  Domain disc = gallery("disc");
  auto ev = ChristoffelEvaluator::build(disc, 4);
  std::pair<double, double> oracle[] = {
      {0.0, 0.34906585039886592},
      {0.4, 0.40325136337553515},
      {0.8, 0.27118753880934382},
      {1.0, 0.057119866428905332},
  };
  for (const auto& [r, lam] : oracle)
    CHECK(ev.lambda({r, 0}) == doctest::Approx(lam).epsilon(1e-9));

  // rotational symmetry
  double a = ev.lambda({0.6, 0});
  double b = ev.lambda({0.6 * std::cos(1.0), 0.6 * std::sin(1.0)});
  CHECK(b == doctest::Approx(a).epsilon(1e-9));
}

TEST_CASE("degree monotonicity") {
  Domain sq = gallery("square");
  Point2 x{0.3, -0.4};
  double prev = 1e300;
  for (int n : {0, 1, 2, 4, 6}) {
    auto ev = ChristoffelEvaluator::build(sq, n);
    double v = ev.lambda(x);
    CHECK(v <= prev * (1 + 1e-12));
    prev = v;
  }
}

TEST_CASE("kernel polynomial properties") {
  Domain disc = gallery("disc");
  auto ev = ChristoffelEvaluator::build(disc, 6);
  Point2 x{0.9, 0.0};
  auto p = ev.kernel_polynomial(x);
  CHECK(p(x) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p.degree() == 6);

  // self-reproduction: int P^2 = lambda(x)
  double lam = ev.lambda(x);
  double l2 = area_integral(disc, p * p);
  CHECK(l2 / lam == doctest::Approx(1.0).epsilon(1e-8));

  auto ev0 = ChristoffelEvaluator::build(disc, 0);
  auto p0 = ev0.kernel_polynomial({0.2, 0.1});
  CHECK(p0({-0.7, 0.3}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kernel polynomial is L2-optimal") {
  // adding any polynomial vanishing at x cannot decrease the L2 norm
  Domain sq = gallery("square");
  int n = 4;
  auto ev = ChristoffelEvaluator::build(sq, n);
  Point2 x{0.25, -0.6};
  auto p = ev.kernel_polynomial(x);
  double base = area_integral(sq, p * p);

  PolyBasis basis(n, sq.bounding_box());
  std::mt19937 rng(17);
  std::normal_distribution<double> gauss;
  auto sb = std::make_shared<PolyBasis>(basis);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd c(basis.size());
    for (int i = 0; i < c.size(); ++i) c[i] = gauss(rng);
    BivariatePoly q(sb, c);
    double qx = q(x);
    // competitor p + (q - q(x)) still equals 1 at x
    BivariatePoly comp(
        [p, q, qx](Point2 y) { return p(y) + q(y) - qx; }, n);
    double val = area_integral(sq, comp * comp);
    CHECK(val >= base * (1 - 1e-10));
  }
}

TEST_CASE("two pipelines agree") {
  for (const char* name : {"disc", "square"}) {
    Domain d = gallery(name);
    for (int n : {2, 5}) {
      PolyBasis basis(n, d.bounding_box());
      auto g1 = gram_matrix(d, basis);
      auto g2 = polygonal_gram_matrix(d, basis, 1e-9);
      double rel = (g1 - g2).cwiseAbs().maxCoeff() / g1.cwiseAbs().maxCoeff();
      CHECK(rel < 1e-6);
    }
  }
}

TEST_CASE("domain monotonicity half-disc vs disc") {
  Domain disc = gallery("disc");
  Domain half = half_disc();
  for (int n : {2, 5, 8}) {
    auto ev_d = ChristoffelEvaluator::build(disc, n);
    auto ev_h = ChristoffelEvaluator::build(half, n);
    for (Point2 x : {Point2{0.0, 0.3}, Point2{0.5, 0.2}, Point2{-0.4, 0.6},
                     Point2{0.0, 0.9}}) {
      REQUIRE(half.is_inside(x));
      CHECK(ev_h.lambda(x) <= ev_d.lambda(x) * (1 + 1e-8));
    }
  }
}

TEST_CASE("affine covariance") {
  Domain sq = gallery("square");
  int n = 4;
  auto ev = ChristoffelEvaluator::build(sq, n);
  Point2 x{0.1, 0.7};
  double lam = ev.lambda(x);

  AffineMap maps[] = {
      AffineMap::identity(),
      AffineMap::rotation(0.9),
      {2.0, 0.0, 0.0, 0.5, 0.3, -0.1},  // anisotropic scale + shift
      {1.0, 0.7, 0.0, 1.0, 0.0, 0.0},   // shear
  };
  for (const auto& m : maps) {
    Domain td = sq.transformed(m);
    auto ev_t = ChristoffelEvaluator::build(td, n);
    double lam_t = ev_t.lambda(m.apply(x));
    CHECK(lam_t == doctest::Approx(std::abs(m.det()) * lam).epsilon(1e-8));
  }
}

TEST_CASE("precision escalation") {
  Domain disc = gallery("disc");
  auto lo = ChristoffelEvaluator::build(disc, 8, {}, PrecisionMode::Double);
  auto hi = ChristoffelEvaluator::build(disc, 8, {}, PrecisionMode::Extended);
  CHECK(lo.precision_mode() == PrecisionMode::Double);
  CHECK(hi.precision_mode() == PrecisionMode::Extended);
  for (Point2 x : {Point2{0, 0}, Point2{0.5, 0.5}, Point2{0.9, 0}})
    CHECK(lo.lambda(x) == doctest::Approx(hi.lambda(x)).epsilon(1e-8));
  CHECK(lo.cond_estimate() > 1.0);
  CHECK(std::isfinite(lo.cond_estimate()));

  auto deep = ChristoffelEvaluator::build(disc, 16);
  CHECK(deep.precision_mode() == PrecisionMode::Extended);
  CHECK_THROWS_AS(ChristoffelEvaluator::build(disc, 40), Error);
}

TEST_CASE("sup on region") {
  Domain sq = gallery("square");
  BivariatePoly lin([](Point2 p) { return p.x; }, 1);
  auto r = sup_on_region(lin, sq, 100);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.samples > 1000);

  Domain disc = gallery("disc");
  BivariatePoly quad([](Point2 p) { return p.x * p.x + p.y * p.y; }, 2);
  auto r2 = sup_on_region(quad, disc, 150);
  CHECK(r2.value == doctest::Approx(1.0).epsilon(1e-4));
}
