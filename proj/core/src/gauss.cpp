#include "chf/gauss.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace chf {

namespace {
// Legendre P_m(u) and derivative by recurrence.
std::pair<double, double> legendre_pd(int m, double u) {
  double p0 = 1.0, p1 = u;
  if (m == 0) return {1.0, 0.0};
  for (int k = 2; k <= m; ++k) {
    double p2 = ((2.0 * k - 1.0) * u * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  double d = m * (u * p1 - p0) / (u * u - 1.0);
  return {p1, d};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> compute_gl(int m) {
  Eigen::VectorXd x(m), w(m);
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, Newton refinement
    double u = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre_pd(m, u);
      double du = p / d;
      u -= du;
      if (std::abs(du) < 1e-16) break;
    }
    auto [p, d] = legendre_pd(m, u);
    (void)p;
    x[i] = u;
    w[i] = 2.0 / ((1.0 - u * u) * d * d);
  }
  return {x, w};
}
}  // namespace

const std::pair<Eigen::VectorXd, Eigen::VectorXd>& gauss_legendre(int m) {
  static std::map<int, std::pair<Eigen::VectorXd, Eigen::VectorXd>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, compute_gl(m)).first;
  return it->second;
}

void legendre_orthonormal(double u, int nmax, double* out) {
  double p0 = 1.0, p1 = u;
  out[0] = std::sqrt(0.5);
  if (nmax >= 1) out[1] = std::sqrt(1.5) * u;
  for (int k = 2; k <= nmax; ++k) {
    double p2 = ((2.0 * k - 1.0) * u * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
    out[k] = std::sqrt(k + 0.5) * p2;
  }
}

}  // namespace chf
