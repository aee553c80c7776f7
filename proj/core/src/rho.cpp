#include "chf/rho.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace chf {

double rho_star(int n, double t) {
  if (n < 1) throw Error("rho_star: degree must be >= 1");
  if (t < 0.0) throw Error("rho_star: t must be nonnegative");
  double inv = 1.0 / n;
  return inv * inv + inv * std::sqrt(t);
}

FormulaBreakdown theorem_rhs(const Domain& domain, Point2 x, int n,
                             FormulaMode mode) {
  if (domain.contains(x) == Membership::Outside)
    throw Error("theorem_rhs: point lies outside the domain");
  if (mode == FormulaMode::Full && !domain.all_angles_convex())
    throw Error("theorem_rhs: full mode requires all interior angles in "
                "(0, pi)");
  FormulaBreakdown out;
  out.n = n;
  out.x = x;
  out.mode = mode;

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < domain.curves().size(); ++i) {
    double d = nearest_point(domain.curves()[i], x).distance;
    double v = rho_star(n, d) / n;
    out.per_curve_terms.push_back({static_cast<int>(i), d, v});
    if (v < best) {
      best = v;
      out.argmin_tag = "curve:" + std::to_string(i);
    }
  }

  out.dist_to_corners = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < domain.corners().size(); ++j) {
    const CornerData& c = domain.corners()[j];
    out.dist_to_corners = std::min(out.dist_to_corners, dist(x, c.v));
    if (mode == FormulaMode::AwayFromCorners) continue;
    double dm = nearest_point(c.arm_minus, x).distance;
    double dp = nearest_point(c.arm_plus, x).distance;
    double v = rho_star(n, dm) * rho_star(n, dp);
    out.per_corner_terms.push_back(
        {static_cast<int>(j), dm, dp, v, c.arm_length});
    if (v < best) {
      best = v;
      out.argmin_tag = "corner:" + std::to_string(j);
    }
  }
  // corner minimum over an empty set is vacuous (d(x, empty) = inf)
  out.lambda_formula = best;
  return out;
}

std::string FormulaBreakdown::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"n\":" << n << ",\"x\":[" << x.x << "," << x.y << "]"
     << ",\"mode\":\""
     << (mode == FormulaMode::Full ? "full" : "away-from-corners") << "\""
     << ",\"curve_terms\":[";
  for (std::size_t i = 0; i < per_curve_terms.size(); ++i) {
    const auto& t = per_curve_terms[i];
    os << (i ? "," : "") << "{\"curve\":" << t.curve << ",\"d\":" << t.distance
       << ",\"value\":" << t.value << "}";
  }
  os << "],\"corner_terms\":[";
  for (std::size_t i = 0; i < per_corner_terms.size(); ++i) {
    const auto& t = per_corner_terms[i];
    os << (i ? "," : "") << "{\"corner\":" << t.corner
       << ",\"d_minus\":" << t.dist_minus << ",\"d_plus\":" << t.dist_plus
       << ",\"value\":" << t.value << ",\"arm_length\":" << t.arm_length
       << "}";
  }
  os << "],\"lambda_formula\":" << lambda_formula << ",\"argmin\":\""
     << argmin_tag << "\"";
  if (mode == FormulaMode::AwayFromCorners)
    os << ",\"dist_to_corners\":" << dist_to_corners;
  os << "}";
  return os.str();
}

}  // namespace chf
