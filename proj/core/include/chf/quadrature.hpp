#pragma once

#include <Eigen/Dense>
#include <functional>

#include "chf/basis.hpp"
#include "chf/domain.hpp"
#include "chf/poly.hpp"

namespace chf {

struct QuadratureSpec {
  double outer_tol = 1e-10;  // relative tolerance of the boundary integral
  int max_depth = 18;        // dyadic subdivision limit per curve
};

/// Integral of a polynomial integrand over the domain via the Green's
/// theorem reduction: the area integral becomes the oriented boundary
/// integral of -int_{y0}^{y} g(x,s) ds dx, with an inner rule exact for the
/// integrand's y-degree and an adaptive outer rule per boundary curve.
double area_integral(const Domain& domain,
                     const std::function<double(Point2)>& integrand,
                     int degree_y, const QuadratureSpec& spec = {});

inline double area_integral(const Domain& domain, const BivariatePoly& g,
                            const QuadratureSpec& spec = {}) {
  return area_integral(domain, [&g](Point2 p) { return g(p); }, g.degree(),
                       spec);
}

/// Gram matrix G_kl = int_D phi_k phi_l of the basis over the domain,
/// assembled with one shared inner rule per boundary node.
Eigen::MatrixXd gram_matrix(const Domain& domain, const PolyBasis& basis,
                            const QuadratureSpec& spec = {});

}  // namespace chf
