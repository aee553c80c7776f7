#pragma once

#include <Eigen/Cholesky>
#include <memory>
#include <optional>

#include "chf/poly.hpp"
#include "chf/quadrature.hpp"

namespace chf {

enum class PrecisionMode { Double, Extended };

/// Factorized Gram matrix of the total-degree-n basis over a domain.
/// Answers lambda_n(D, x) = 1 / (phi(x)^T G^-1 phi(x)) through triangular
/// solves and produces the extremal kernel polynomial.
///
/// In extended mode the factorization and solves run in quadruple
/// precision (the Gram entries themselves come from double quadrature).
///
/// Internally the domain is moved to a normalized affine frame (zero mean,
/// unit second moments) before the basis is built, so the conditioning of
/// the Gram matrix depends on the shape of the domain only, not on how it
/// is rotated, sheared, or scaled. Results are mapped back, so this is
/// invisible to callers.
class ChristoffelEvaluator {
 public:
  /// Builds the Gram matrix and its Cholesky factor. Without an explicit
  /// mode, escalates to extended precision when the estimated condition
  /// number times machine epsilon exceeds 1e-6. Degrees above 32 are
  /// rejected (the honest numeric wall of the double pipeline).
  static ChristoffelEvaluator build(const Domain& domain, int n,
                                    const QuadratureSpec& spec = {},
                                    std::optional<PrecisionMode> mode = {});

  double lambda(Point2 x) const;
  BivariatePoly kernel_polynomial(Point2 x) const;

  int degree() const { return basis_->degree(); }
  const PolyBasis& basis() const { return *basis_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Domain& domain() const { return *domain_; }
  double cond_estimate() const { return cond_; }
  PrecisionMode precision_mode() const { return mode_; }

 private:
  std::shared_ptr<const Domain> domain_;
  std::shared_ptr<const PolyBasis> basis_;
  Eigen::MatrixXd gram_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  std::shared_ptr<const void> extended_;  // quad-precision factor, if any
  AffineMap norm_;        // world -> normalized frame
  double inv_det_ = 1.0;  // 1 / |det norm_|
  double cond_ = 0.0;
  PrecisionMode mode_ = PrecisionMode::Double;

  ChristoffelEvaluator() = default;
  double kernel_diag(Point2 x, Eigen::VectorXd* coeffs) const;
};

struct SupResult {
  double value = 0.0;
  int samples = 0;       // membership-filtered points actually used
  int grid_density = 0;  // requested points per axis
};

/// Max |p| over a dense membership-filtered grid plus boundary samples.
SupResult sup_on_region(const BivariatePoly& p, const Domain& region,
                        int grid_density = 200);

}  // namespace chf
