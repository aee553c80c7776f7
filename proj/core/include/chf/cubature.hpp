#pragma once

#include <Eigen/Dense>
#include <functional>

#include "chf/basis.hpp"
#include "chf/domain.hpp"

namespace chf {

/// Independent verification pipeline: the boundary is flattened to a fine
/// polygon, fanned into triangles about the polygon centroid, and each
/// triangle integrated with a tensor Gauss rule (exact for the polynomial
/// on the polygon; the only error is the flattening of curved pieces).
///
/// Supports single-loop star-shaped domains, which covers the reference
/// shapes this pipeline is used to cross-check.
double polygonal_area_integral(const Domain& domain,
                               const std::function<double(Point2)>& integrand,
                               int degree, double rel_flat_tol = 1e-7);

Eigen::MatrixXd polygonal_gram_matrix(const Domain& domain,
                                      const PolyBasis& basis,
                                      double rel_flat_tol = 1e-7);

}  // namespace chf
