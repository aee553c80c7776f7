#pragma once

#include <map>
#include <memory>
#include <string>

#include "chf/christoffel.hpp"
#include "chf/poly.hpp"

namespace chf {

/// Univariate needle polynomial on [-1,1] in a Chebyshev representation.
/// Evaluated as the square of a normalized kernel slice, so the anchor
/// value is exactly 1.
class UnivariatePoly {
 public:
  UnivariatePoly(Eigen::VectorXd cheb_coeffs, double anchor, bool squared);

  double operator()(double s) const;
  int degree() const;
  double anchor() const { return anchor_; }
  const Eigen::VectorXd& cheb_coeffs() const { return coeffs_; }

 private:
  Eigen::VectorXd coeffs_;  // Chebyshev coefficients of the kernel slice
  double anchor_;
  bool squared_;
  double norm_;  // slice value at the anchor, divided out at evaluation
};

struct NeedleReport {
  enum class Construction { Univariate, Radial, Narrowed, TwoAnnuli };
  Construction construction = Construction::Univariate;
  int n = 0;
  double t = 0, r1 = 0, r2 = 0, lam = 0, h = 0;
  Point2 anchor;
  double c_fit = 0.0;          // fitted decay-envelope constant
  double max_violation = 0.0;  // excess over the c_fit envelope (0 = holds)
  double l2_norm_on_domain = 0.0;
};

/// Degree <= n/2 polynomial with Q(1-t) = 1 obeying the decay profile
/// |Q(s)| <= c rho_n*(t) / (rho_n*(t) + |1-t-s|) on [-1,1] (validated on a
/// 10^4-point sample; construction rejected if the fitted constant exceeds
/// the module cap).
UnivariatePoly univariate_needle(int n, double t,
                                 NeedleReport* report = nullptr);

/// Radial needle on the annulus r1 <= |y| <= r2, equal to 1 on |y| = lam.
BivariatePoly radial_needle(int n, double r1, double r2, double lam,
                            NeedleReport* report = nullptr);

/// Radial needle narrowed by a univariate needle in the second coordinate;
/// value 1 at (lam, 0).
BivariatePoly narrowed_annulus_needle(int n, double r1, double r2, double lam,
                                      NeedleReport* report = nullptr);

/// Product of two radial needles on annuli centered at (0, -r1 h) and
/// (0, r1 h); value 1 at x. Requires zeta <= h <= 1-zeta and
/// |x - c_i| in [r1, (1 + zeta/2) r1].
BivariatePoly two_annuli_needle(int n, double r1, double r2, double h,
                                Point2 x, double zeta = 0.1,
                                NeedleReport* report = nullptr);

/// Reusable reference evaluators for certified bounds (unit disc per degree,
/// grain domains per (degree, half-distance ratio)).
class BoundCache {
 public:
  std::shared_ptr<const ChristoffelEvaluator> disc(int n,
                                                   const QuadratureSpec& spec);
  std::shared_ptr<const ChristoffelEvaluator> grain(int n, double h,
                                                    const QuadratureSpec& spec);

 private:
  std::map<int, std::shared_ptr<const ChristoffelEvaluator>> disc_;
  std::map<std::pair<int, long long>,
           std::shared_ptr<const ChristoffelEvaluator>>
      grain_;
};

/// The grain reference shape: intersection of the unit disc with its copy
/// shifted by (0, h), 0 < h < 2.
Domain make_grain(double h);

struct UpperBound {
  double bound = 0.0;
  BivariatePoly witness;
  std::string regime;  // "interior" | "edge" | "corner"
};

struct LowerBound {
  double bound = 0.0;
  std::shared_ptr<const Domain> reference;
  std::string regime;  // "interior" | "edge" | "corner" | "fallback"
};

/// Upper bound on lambda_n(D, x): builds an admissible witness polynomial
/// (witness(x) = 1) on an enclosing reference region chosen by the point's
/// regime and integrates its square over D.
UpperBound certified_upper_bound(const Domain& domain, Point2 x, int n,
                                 const QuadratureSpec& spec = {});

/// Lower bound on lambda_n(D, x): inscribes a reference domain containing x
/// (inclusion verified by sampled membership, shrunk about x on failure)
/// and evaluates its Christoffel function exactly.
LowerBound certified_lower_bound(const Domain& domain, Point2 x, int n,
                                 BoundCache& cache,
                                 const QuadratureSpec& spec = {});

}  // namespace chf
