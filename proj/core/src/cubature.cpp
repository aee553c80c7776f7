#include "chf/cubature.hpp"

#include <cmath>

#include "chf/gauss.hpp"

namespace chf {

namespace {

std::vector<Point2> fine_polygon(const Domain& domain, double rel_flat_tol) {
  if (domain.loops().size() != 1)
    throw Error("polygonal cubature supports single-loop domains only");
  // chord deviation h chosen so that perimeter * (2/3) h ~ rel * area
  double perim = 0.0;
  for (const auto& c : domain.curves()) perim += c.total_arclength();
  double h = 1.5 * rel_flat_tol * domain.area() / perim;
  std::vector<Point2> poly;
  for (const auto& c : domain.curves()) {
    std::vector<std::pair<double, Point2>> pts;
    flatten(c, h, pts);
    for (std::size_t i = poly.empty() ? 0 : 1; i < pts.size(); ++i)
      poly.push_back(pts[i].second);
  }
  if (dist(poly.front(), poly.back()) < 1e-12 * domain.diameter())
    poly.pop_back();
  return poly;
}

// Accumulates sum_nodes w * f-contribution over the centroid fan.
template <class Visit>
void fan_cubature(const std::vector<Point2>& poly, int nodes_per_axis,
                  const Visit& visit) {
  Point2 c{0, 0};
  for (const auto& p : poly) c += p;
  c = c / static_cast<double>(poly.size());
  const auto& [x, w] = gauss_legendre(nodes_per_axis);
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    Point2 a = poly[i], b = poly[(i + 1) % m];
    double twoA = cross(a - c, b - a);
    if (twoA <= 0.0)
      throw Error("polygon is not star-shaped about its centroid");
    for (int p = 0; p < nodes_per_axis; ++p) {
      double xi = 0.5 * (1.0 + x[p]);
      for (int q = 0; q < nodes_per_axis; ++q) {
        double eta = 0.5 * (1.0 + x[q]);
        Point2 pt = c + xi * ((a - c) + eta * (b - a));
        double weight = 0.25 * w[p] * w[q] * xi * twoA;
        visit(pt, weight);
      }
    }
  }
}

}  // namespace

double polygonal_area_integral(const Domain& domain,
                               const std::function<double(Point2)>& integrand,
                               int degree, double rel_flat_tol) {
  auto poly = fine_polygon(domain, rel_flat_tol);
  int nodes = degree / 2 + 2;
  double acc = 0.0;
  fan_cubature(poly, nodes,
               [&](Point2 p, double w) { acc += w * integrand(p); });
  return acc;
}

Eigen::MatrixXd polygonal_gram_matrix(const Domain& domain,
                                      const PolyBasis& basis,
                                      double rel_flat_tol) {
  auto poly = fine_polygon(domain, rel_flat_tol);
  const int N = basis.size();
  int nodes = basis.degree() + 2;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd b(N);
  fan_cubature(poly, nodes, [&](Point2 p, double w) {
    basis.eval_into(p, b);
    G.selfadjointView<Eigen::Lower>().rankUpdate(b, w);
  });
  G.triangularView<Eigen::StrictlyUpper>() =
      G.triangularView<Eigen::StrictlyLower>().transpose();
  return G;
}

}  // namespace chf
