#pragma once

#include <Eigen/Dense>
#include <vector>

#include "chf/geom.hpp"

namespace chf {

/// Total-degree-n bivariate basis: tensor products of orthonormal Legendre
/// polynomials scaled to a bounding box, truncated to a + b <= n and listed
/// in graded lexicographic order. Dimension N = (n+1)(n+2)/2.
class PolyBasis {
 public:
  PolyBasis(int n, BBox box);

  int degree() const { return n_; }
  int size() const { return static_cast<int>(index_.size()); }
  const BBox& box() const { return box_; }
  /// Exponent pair (a, b) of basis function k (degree of each factor).
  std::pair<int, int> index(int k) const { return index_[k]; }

  Eigen::VectorXd eval(Point2 p) const;
  void eval_into(Point2 p, Eigen::VectorXd& out) const;

 private:
  int n_;
  BBox box_;
  std::vector<std::pair<int, int>> index_;
};

}  // namespace chf
