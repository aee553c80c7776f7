#pragma once

#include <string>
#include <vector>

#include "chf/domain.hpp"

namespace chf {

/// rho_n*(t) = n^-2 + n^-1 sqrt(t). Throws on t < 0 or n < 1.
double rho_star(int n, double t);

enum class FormulaMode { Full, AwayFromCorners };

/// Breakdown of the two-sided formula value: every boundary-curve term
/// n^-1 rho*(d(x, Gamma_i)) and every corner term rho*(d-) rho*(d+), plus
/// the overall minimum and which term attained it.
struct FormulaBreakdown {
  int n = 0;
  Point2 x;

  struct CurveTerm {
    int curve;        // global curve index
    double distance;  // d(x, Gamma_i)
    double value;     // n^-1 rho*(d)
  };
  struct CornerTerm {
    int corner;
    double dist_minus;  // d(x, Gamma_j^-)
    double dist_plus;   // d(x, Gamma_j^+)
    double value;       // rho*(d-) rho*(d+)
    double arm_length;  // the eps the arms were built with
  };
  std::vector<CurveTerm> per_curve_terms;
  std::vector<CornerTerm> per_corner_terms;

  double lambda_formula = 0.0;  // min over all terms
  std::string argmin_tag;       // "curve:<i>" or "corner:<j>"

  FormulaMode mode = FormulaMode::Full;
  double dist_to_corners = 0.0;  // d(x, {v_j}), +inf when no corners

  std::string to_json() const;
};

/// Right-hand side of the two-sided estimate (without the domain constant).
/// Full mode requires x in D and all interior angles in (0, pi); the
/// away-from-corners mode omits corner terms and reports d(x, {v_j}).
FormulaBreakdown theorem_rhs(const Domain& domain, Point2 x, int n,
                             FormulaMode mode = FormulaMode::Full);

}  // namespace chf
