#pragma once

#include <Eigen/Dense>
#include <utility>

namespace chf {

/// Gauss-Legendre nodes and weights on [-1,1], exact for degree <= 2m-1.
/// Cached per order; thread-safe after first use of a given order.
const std::pair<Eigen::VectorXd, Eigen::VectorXd>& gauss_legendre(int m);

/// Values of the orthonormal Legendre polynomials p~_0..p~_nmax at u,
/// with int_{-1}^{1} p~_k^2 = 1 (three-term recurrence).
void legendre_orthonormal(double u, int nmax, double* out);

}  // namespace chf
