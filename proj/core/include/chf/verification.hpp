#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chf/needles.hpp"
#include "chf/rho.hpp"

namespace chf {

/// Named reference shapes. Accepts "disc", "square", "triangle", "blob",
/// "drop", "lens" (separation 1) and "lens:<h>".
Domain gallery(const std::string& name);

struct GridSpec {
  enum class Kind { Cartesian, CornerApproach };
  Kind kind = Kind::Cartesian;
  int nx = 9, ny = 9;  // cartesian resolution over the bounding box
  int corner = 0;      // corner index for the approach sequence
  int levels = 10;     // dyadic levels 2^-1 .. 2^-levels
  std::string describe() const;
};

/// Membership-filtered evaluation points. Corner-approach grids walk dyadic
/// distances down to n_max^-2 / 4 along the interior bisector and along each
/// arm's inward normal.
std::vector<Point2> grid_points(const Domain& domain, const GridSpec& spec,
                                int n_max);

struct RatioPoint {
  Point2 x;
  int n = 0;
  double lambda = 0.0;
  double formula = 0.0;  // two-sided estimate without the domain constant
  double ratio = 0.0;    // lambda / formula
  std::string argmin_tag;
};

struct RatioSummary {
  int n = 0;
  double r_min = 0.0, r_max = 0.0;
  double spread = 0.0;  // r_max / r_min
};

struct RatioReport {
  std::string domain_id;
  std::vector<int> n_list;
  std::string grid_desc;
  std::vector<RatioPoint> points;
  std::vector<RatioSummary> per_n;
  double overall_spread = 0.0;

  void write_csv(std::ostream& os) const;
  std::string summary_json() const;
};

/// Measured interval of the domain constant implied by the two-sided
/// estimate over the given grids.
RatioReport ratio_study(const Domain& domain, const std::vector<int>& n_list,
                        const std::vector<GridSpec>& grids,
                        const QuadratureSpec& spec = {});

struct BallReport {
  struct Row {
    int n;
    double s;      // 1 - |x|
    double ratio;  // lambda * n / rho*(s)
  };
  std::vector<Row> rows;
  std::vector<RatioSummary> per_n;
  double overall_spread = 0.0;
  double boundary_slope = 0.0;  // slope of log lambda vs log n at |x| = 1
  void write_csv(std::ostream& os) const;
};

/// Disc behavior of lambda against n^-1 rho*(1 - |x|); the mandatory sample
/// set {0, n^-2, n^-1, 0.5, 1} of 1-|x| is always included.
BallReport ball_behavior_check(const std::vector<int>& n_list,
                               int radial_samples = 0,
                               const QuadratureSpec& spec = {});

struct GrainReport {
  double h = 0.0;
  struct Row {
    int n;
    double min_ratio;  // min over grid of lambda / (rho*(d1*) rho*(d2*))
    double max_ratio;
  };
  std::vector<Row> per_n;
};

/// Lower-constant measurement on the grain: lambda against
/// rho*(d1*) rho*(d2*) with d_i* = 1 - |x - (i-1)(0,h)|.
GrainReport grain_lower_check(double h, const std::vector<int>& n_list,
                              const std::vector<GridSpec>& grids,
                              const QuadratureSpec& spec = {});

struct TrigPoly {
  Eigen::VectorXd cos_coeffs;  // a_0 .. a_n
  Eigen::VectorXd sin_coeffs;  // b_1 .. b_n
  double value(double theta) const;
  double derivative(double theta) const;
  int degree() const { return static_cast<int>(cos_coeffs.size()) - 1; }
};

struct VidenskiiReport {
  double beta = 0.0;
  int trials = 0;
  unsigned long long seed = 0;
  struct Row {
    int n;
    double c_tilde;    // max |T'| rho*(beta-|theta|) / sup |T|
    double c_random;   // same max over the random trials only
  };
  std::vector<Row> per_n;
};

/// Empirical constant of the constrained Bernstein inequality on [-beta,
/// beta] over random trig polynomials plus the deterministic cos(n theta).
VidenskiiReport videnskii_check(const std::vector<int>& n_list, double beta,
                                int trials, unsigned long long seed);

struct NormControlReport {
  struct Row {
    Point2 x;
    double mu;
    double sup;    // max |P| over the homothetic region
    double bound;  // 1 / mu
  };
  int n = 0;
  std::vector<Row> rows;
  bool all_within(double tol) const;
};

/// Kernel-polynomial norm control on homothetic copies of a convex domain.
NormControlReport norm_control_check(const Domain& domain,
                                     const std::vector<Point2>& x_list,
                                     const std::vector<double>& mu_list,
                                     int n, const QuadratureSpec& spec = {});

struct AffineReport {
  int n = 0;
  int trials = 0;
  unsigned long long seed = 0;
  double max_rel_error = 0.0;
};

/// lambda_n(TD, Tx) = |det T| lambda_n(D, x) over random affine maps with
/// |det| in [0.2, 5].
AffineReport affine_invariance_check(const Domain& domain, int n, int trials,
                                     unsigned long long seed,
                                     const QuadratureSpec& spec = {});

struct SandwichReport {
  struct Row {
    Point2 x;
    int n;
    double lower, lambda, upper;
    double witness_at_x;
    std::string lower_regime, upper_regime;
  };
  std::vector<Row> rows;
  bool ordered(double rel_slack) const;
  double worst_witness_deviation() const;  // max |witness(x) - 1|
  void write_csv(std::ostream& os) const;
};

/// Certified lower / exact / certified upper at every grid point.
SandwichReport sandwich_check(const Domain& domain,
                              const std::vector<int>& n_list,
                              const std::vector<GridSpec>& grids,
                              const QuadratureSpec& spec = {});

}  // namespace chf
