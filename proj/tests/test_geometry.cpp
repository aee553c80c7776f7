#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chf/domain.hpp"

using namespace chf;

namespace {

Domain unit_disc() {
  BoundaryLoop loop;
  loop.curves.push_back(
      ParametricCurve::circular_arc({0, 0}, 1.0, 0.0, 2.0 * M_PI));
  return Domain::build({loop});
}

Domain square(double a = 1.0) {
  BoundaryLoop loop;
  loop.curves.push_back(ParametricCurve::segment({-a, -a}, {a, -a}));
  loop.curves.push_back(ParametricCurve::segment({a, -a}, {a, a}));
  loop.curves.push_back(ParametricCurve::segment({a, a}, {-a, a}));
  loop.curves.push_back(ParametricCurve::segment({-a, a}, {-a, -a}));
  return Domain::build({loop});
}

Domain lens(double h) {
  double w = std::sqrt(1.0 - h * h / 4.0);
  double phi = std::atan2(h / 2.0, w);
  BoundaryLoop loop;
  loop.curves.push_back(
      ParametricCurve::circular_arc({0, 0}, 1.0, phi, M_PI - phi));
  loop.curves.push_back(
      ParametricCurve::circular_arc({0, h}, 1.0, -M_PI + phi, -phi));
  return Domain::build({loop});
}

Domain blob() {
  BoundaryLoop loop;
  loop.curves.push_back(
      ParametricCurve::polar_graph({0, 0}, {1.0, 0, 0, 0.3}, {}));
  return Domain::build({loop});
}

}  // namespace

TEST_CASE("curve evaluation") {
  auto arc = ParametricCurve::circular_arc({0, 0}, 1.0, 0.0, 2.0 * M_PI);
  auto j = arc.eval(0.0);
  CHECK(j.p.x == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(j.p.y == doctest::Approx(0.0).epsilon(1e-14));
  Vec2 t = j.d1.normalized();
  CHECK(t.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.y == doctest::Approx(1.0).epsilon(1e-12));

  auto seg = ParametricCurve::segment({0, 0}, {2, 4});
  auto m = seg.eval(0.5);
  CHECK(m.p.x == doctest::Approx(1.0));
  CHECK(m.p.y == doctest::Approx(2.0));

  auto pb = ParametricCurve::polar_graph({0, 0}, {1.0, 0, 0, 0.3}, {});
  auto p0 = pb.point(0.0);
  CHECK(p0.x == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(p0.y == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(arc.eval(1.5), Error);
}

TEST_CASE("arclength and subcurve") {
  auto arc = ParametricCurve::circular_arc({0, 0}, 2.0, 0.0, M_PI);
  CHECK(arc.total_arclength() == doctest::Approx(2.0 * M_PI).epsilon(1e-10));
  auto half = arc.subcurve(0.0, 0.5);
  CHECK(half.total_arclength() == doctest::Approx(M_PI).epsilon(1e-10));
  auto rev = arc.reversed();
  CHECK(rev.start().y == doctest::Approx(arc.end().y));
  double s = arc.param_at_arclength(0.0, M_PI);
  CHECK(s == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("nearest point") {
  auto circle = ParametricCurve::circular_arc({0, 0}, 1.0, 0.0, 2.0 * M_PI);
  auto np = nearest_point(circle, {0, 0});
  CHECK(np.distance == doctest::Approx(1.0).epsilon(1e-10));
  np = nearest_point(circle, {2, 0});
  CHECK(np.distance == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(np.p.x == doctest::Approx(1.0).epsilon(1e-8));

  auto seg = ParametricCurve::segment({1, -1}, {1, 1});
  np = nearest_point(seg, {0.5, 0});
  CHECK(np.distance == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(np.p.y) < 1e-9);
}

TEST_CASE("corner detection") {
  Domain sq = square();
  REQUIRE(sq.corners().size() == 4);
  for (const auto& c : sq.corners())
    CHECK(c.alpha == doctest::Approx(M_PI / 2).epsilon(1e-10));

  Domain disc = unit_disc();
  CHECK(disc.corners().empty());
  CHECK(disc.all_angles_convex());

  Domain len = lens(std::sqrt(2.0));
  REQUIRE(len.corners().size() == 2);
  for (const auto& c : len.corners())
    CHECK(c.alpha == doctest::Approx(M_PI / 2).epsilon(1e-8));

  Domain len1 = lens(1.0);
  REQUIRE(len1.corners().size() == 2);
  for (const auto& c : len1.corners())
    CHECK(c.alpha == doctest::Approx(2.0 * M_PI / 3).epsilon(1e-8));
}

TEST_CASE("corner arms") {
  Domain sq = square();
  const CornerData* c11 = nullptr;
  for (const auto& c : sq.corners())
    if (c.v.x > 0.5 && c.v.y > 0.5) c11 = &c;
  REQUIRE(c11 != nullptr);

  auto [am, ap] = corner_arms(sq, *c11, 0.5);
  CHECK(am.total_arclength() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(ap.total_arclength() == doctest::Approx(0.5).epsilon(1e-9));
  // arm_minus ends at v, arm_plus starts at v
  CHECK(dist(am.end(), c11->v) < 1e-10);
  CHECK(dist(ap.start(), c11->v) < 1e-10);
  CHECK_THROWS_AS(corner_arms(sq, *c11, 100.0), Error);
}

TEST_CASE("membership") {
  Domain disc = unit_disc();
  CHECK(disc.contains({0, 0}) == Membership::Inside);
  CHECK(disc.contains({0.99, 0}) == Membership::Inside);
  CHECK(disc.contains({1.5, 0}) == Membership::Outside);
  CHECK(disc.contains({1.0, 0.0}) == Membership::Boundary);

  Domain sq = square();
  CHECK(sq.contains({0, 0}) == Membership::Inside);
  CHECK(sq.contains({1.2, 0}) == Membership::Outside);
}

TEST_CASE("distance to boundary") {
  Domain disc = unit_disc();
  auto hit = disc.distance_to_boundary({0.25, 0});
  CHECK(hit.distance == doctest::Approx(0.75).epsilon(1e-9));

  Domain sq = square();
  hit = sq.distance_to_boundary({0.5, 0.25});
  CHECK(hit.distance == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("area and diameter") {
  // area() comes from the flattened boundary polyline
  CHECK(unit_disc().area() == doctest::Approx(M_PI).epsilon(1e-5));
  CHECK(square().area() == doctest::Approx(4.0).epsilon(1e-10));
  double h = 1.0;
  double lens_area = 2.0 * std::acos(h / 2) - (h / 2) * std::sqrt(4 - h * h);
  CHECK(lens(h).area() == doctest::Approx(lens_area).epsilon(1e-5));
  CHECK(square().diameter() == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("homothety") {
  Domain disc = unit_disc();
  Domain same = disc.homothety({0.3, -0.2}, 1.0);
  CHECK(same.area() == doctest::Approx(disc.area()).epsilon(1e-10));

  Domain half = disc.homothety({0, 0}, 0.5);
  CHECK(half.area() == doctest::Approx(M_PI / 4).epsilon(1e-5));
  CHECK(half.contains({0.49, 0}) == Membership::Inside);
  CHECK(half.contains({0.51, 0}) == Membership::Outside);

  // square [-1,1]^2 about (1,1) with ratio 1/2 -> [0,1]^2
  Domain sq = square().homothety({1, 1}, 0.5);
  auto box = sq.bounding_box();
  CHECK(std::abs(box.xmin) < 1e-12);
  CHECK(std::abs(box.xmax - 1.0) < 1e-12);
  CHECK(std::abs(box.ymin) < 1e-12);
  CHECK(std::abs(box.ymax - 1.0) < 1e-12);
}

TEST_CASE("tangent discs") {
  auto circle = ParametricCurve::circular_arc({0, 0}, 1.0, 0.0, 2.0 * M_PI);
  auto td = tangent_discs(0.5, {1, 0}, circle);
  CHECK(td.radius == doctest::Approx(0.5));
  CHECK(td.center_plus.x == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(std::abs(td.center_plus.y) < 1e-8);
  CHECK(td.center_minus.x == doctest::Approx(0.5).epsilon(1e-8));

  auto seg = ParametricCurve::segment({1, 0}, {-1, 0});
  auto ts = tangent_discs(1.0, {0, 0}, seg);
  CHECK(ts.center_plus.y == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ts.center_minus.y == doctest::Approx(-1.0).epsilon(1e-10));

  CHECK_THROWS_AS(tangent_discs(0.0, {1, 0}, circle), Error);
}

TEST_CASE("rolling radius") {
  auto circle = ParametricCurve::circular_arc({0, 0}, 1.0, 0.0, 2.0 * M_PI);
  double r = rolling_radius_estimate(circle);
  CHECK(r > 0.2);
  CHECK(r <= 1.0 + 1e-9);

  auto big = ParametricCurve::circular_arc({0, 0}, 3.0, 0.0, 2.0 * M_PI);
  double r3 = rolling_radius_estimate(big);
  CHECK(r3 > 0.6);
  CHECK(r3 <= 3.0 + 1e-9);
  CHECK(r3 > r);  // scales with the shape

  // sampled curvature oracle: r(t) = 1 + 0.3 cos 3t
  auto pb = ParametricCurve::polar_graph({0, 0}, {1.0, 0, 0, 0.3}, {});
  double min_curv_radius = 1e300;
  for (int i = 0; i < 2000; ++i) {
    double t = 2.0 * M_PI * i / 2000;
    double rr = 1 + 0.3 * std::cos(3 * t);
    double rp = -0.9 * std::sin(3 * t);
    double rpp = -2.7 * std::cos(3 * t);
    double kappa = std::abs(rr * rr + 2 * rp * rp - rr * rpp) /
                   std::pow(rr * rr + rp * rp, 1.5);
    min_curv_radius = std::min(min_curv_radius, 1.0 / kappa);
  }
  double rb = rolling_radius_estimate(pb);
  CHECK(rb > 0.0);
  CHECK(rb <= min_curv_radius * 1.05);
}

TEST_CASE("local linear extension") {
  auto quarter = ParametricCurve::circular_arc({0, 0}, 1.0, 0.0, M_PI / 2);
  auto ext = local_linear_extension(quarter, 0.5, 0.5);
  CHECK(ext.start().x == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ext.start().y == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(ext.end().x == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(ext.end().y == doctest::Approx(1.0).epsilon(1e-10));

  auto seg = ParametricCurve::segment({0, 0}, {1, 0});
  auto e2 = local_linear_extension(seg, 1.0, 2.0);
  CHECK(e2.start().x == doctest::Approx(-1.0));
  CHECK(e2.end().x == doctest::Approx(3.0));
  CHECK(std::abs(e2.point(0.37).y) < 1e-12);

  // extending a nearly closed arc far enough to cross itself must fail
  auto almost = ParametricCurve::circular_arc({0, 0}, 1.0, 0.0, 1.9 * M_PI);
  CHECK_THROWS_AS(local_linear_extension(almost, 1.0, 1.0), Error);
}

TEST_CASE("rigid motion invariance") {
  Domain len = lens(1.0);
  AffineMap m = AffineMap::rotation(0.7).compose(
      AffineMap::translation({0.3, -1.2}));
  Domain moved = len.transformed(m);

  CHECK(moved.area() == doctest::Approx(len.area()).epsilon(1e-9));
  REQUIRE(moved.corners().size() == len.corners().size());
  CHECK(moved.corners()[0].alpha ==
        doctest::Approx(len.corners()[0].alpha).epsilon(1e-8));

  Point2 x{0.1, 0.55};
  double d0 = len.distance_to_boundary(x).distance;
  double d1 = moved.distance_to_boundary(m.apply(x)).distance;
  CHECK(d1 == doctest::Approx(d0).epsilon(1e-9));
}

TEST_CASE("flattening converges") {
  auto arc = ParametricCurve::circular_arc({0, 0}, 1.0, 0.0, 2.0 * M_PI);
  std::vector<std::pair<double, Point2>> fine, coarse;
  flatten(arc, 1e-3, coarse);
  flatten(arc, 1e-5, fine);
  CHECK(fine.size() > coarse.size());

  auto area_of = [](const std::vector<std::pair<double, Point2>>& f) {
    std::vector<Point2> poly;
    for (const auto& [s, p] : f) poly.push_back(p);
    return polyline_signed_area(poly);
  };
  double e_coarse = std::abs(area_of(coarse) - M_PI);
  double e_fine = std::abs(area_of(fine) - M_PI);
  CHECK(e_fine < e_coarse / 4.0);
}

TEST_CASE("blob is smooth and positive area") {
  Domain b = blob();
  CHECK(b.corners().empty());
  CHECK(b.area() > 0.0);
  CHECK(b.is_inside({0, 0}));
}
