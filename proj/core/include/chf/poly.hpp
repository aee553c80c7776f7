#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "chf/basis.hpp"
#include "chf/geom.hpp"

namespace chf {

/// A bivariate polynomial of known total degree. Either an explicit
/// coefficient vector in a PolyBasis, or an opaque evaluator (products and
/// compositions built by the needle constructions) carrying its degree.
class BivariatePoly {
 public:
  /// The zero polynomial.
  BivariatePoly() : eval_([](Point2) { return 0.0; }) {}

  BivariatePoly(std::shared_ptr<const PolyBasis> basis, Eigen::VectorXd coeffs)
      : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (!basis_ || coeffs_.size() != basis_->size())
      throw Error("coefficient vector does not match basis dimension");
    degree_ = basis_->degree();
  }

  BivariatePoly(std::function<double(Point2)> eval, int degree)
      : eval_(std::move(eval)), degree_(degree) {
    if (degree < 0) throw Error("polynomial degree must be nonnegative");
  }

  double operator()(Point2 p) const {
    if (basis_) return basis_->eval(p).dot(coeffs_);
    return eval_(p);
  }

  int degree() const { return degree_; }
  /// Null for opaque polynomials.
  const std::shared_ptr<const PolyBasis>& basis() const { return basis_; }
  const Eigen::VectorXd& coeffs() const {
    if (!basis_) throw Error("polynomial has no coefficient representation");
    return coeffs_;
  }

  friend BivariatePoly operator*(const BivariatePoly& a,
                                 const BivariatePoly& b) {
    return BivariatePoly(
        [a, b](Point2 p) { return a(p) * b(p); }, a.degree() + b.degree());
  }

 private:
  std::shared_ptr<const PolyBasis> basis_;
  Eigen::VectorXd coeffs_;
  std::function<double(Point2)> eval_;
  int degree_ = 0;
};

}  // namespace chf
