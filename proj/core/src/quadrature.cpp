#include "chf/quadrature.hpp"

#include <cmath>

#include "chf/gauss.hpp"

namespace chf {

namespace {

using Fn = std::function<void(double, Eigen::VectorXd&)>;  // t -> value

Eigen::VectorXd gl15(const ParametricCurve& curve, const Fn& g, double a,
                     double b, int dim, double* l1 = nullptr) {
  const auto& [nodes, weights] = gauss_legendre(15);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd val(dim);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int q = 0; q < 15; ++q) {
    g(mid + half * nodes[q], val);
    acc += (weights[q] * half) * val;
    if (l1) *l1 += weights[q] * half * val.cwiseAbs().maxCoeff();
  }
  return acc;
}

struct AdaptState {
  double tol_abs;     // per unit parameter length
  int max_depth;
  double worst_panel_err = 0.0;
  bool failed = false;
};

Eigen::VectorXd adapt(const ParametricCurve& curve, const Fn& g, double a,
                      double b, const Eigen::VectorXd& whole, int depth,
                      AdaptState& st) {
  double m = 0.5 * (a + b);
  Eigen::VectorXd left = gl15(curve, g, a, m, whole.size());
  Eigen::VectorXd right = gl15(curve, g, m, b, whole.size());
  double err = (whole - left - right).cwiseAbs().maxCoeff();
  if (err <= st.tol_abs * (b - a) || depth >= st.max_depth) {
    if (err > st.tol_abs * (b - a)) {
      st.failed = true;
      st.worst_panel_err = std::max(st.worst_panel_err, err);
    }
    return left + right;
  }
  return adapt(curve, g, a, m, left, depth + 1, st) +
         adapt(curve, g, m, b, right, depth + 1, st);
}

Eigen::VectorXd boundary_integral(const Domain& domain,
                                  const std::function<Fn(const ParametricCurve&)>& make_g,
                                  int dim, const QuadratureSpec& spec) {
  // coarse pass fixes the absolute tolerance scale; use the L1 size of the
  // integrand, not the integral itself, which may cancel to zero
  double scale = 0.0;
  std::vector<Eigen::VectorXd> coarse;
  for (const auto& c : domain.curves()) {
    Fn g = make_g(c);
    double l1 = 0.0;
    Eigen::VectorXd I0 = gl15(c, g, 0.0, 1.0, dim, &l1);
    scale = std::max(scale, l1);
    coarse.push_back(std::move(I0));
  }
  scale = std::max(scale, 1e-30);

  AdaptState st{spec.outer_tol * scale, spec.max_depth};
  Eigen::VectorXd total = Eigen::VectorXd::Zero(dim);
  for (std::size_t i = 0; i < domain.curves().size(); ++i) {
    Fn g = make_g(domain.curves()[i]);
    total += adapt(domain.curves()[i], g, 0.0, 1.0, coarse[i], 0, st);
  }
  if (st.failed)
    throw Error("boundary quadrature did not converge at max_depth (panel "
                "error estimate " + std::to_string(st.worst_panel_err) + ")");
  return total;
}

}  // namespace

double area_integral(const Domain& domain,
                     const std::function<double(Point2)>& integrand,
                     int degree_y, const QuadratureSpec& spec) {
  double y0 = domain.bounding_box().ymin;
  int m = degree_y / 2 + 1;  // exact for polynomials of degree <= 2m-1
  const auto& [nodes, weights] = gauss_legendre(m);
  auto make_g = [&](const ParametricCurve& curve) -> Fn {
    return [&, y0](double t, Eigen::VectorXd& out) {
      auto j = curve.eval(t);
      double mid = 0.5 * (y0 + j.p.y), half = 0.5 * (j.p.y - y0);
      double F = 0.0;
      for (int q = 0; q < m; ++q)
        F += weights[q] * integrand({j.p.x, mid + half * nodes[q]});
      out.resize(1);
      out[0] = -F * half * j.d1.x;
    };
  };
  return boundary_integral(domain, make_g, 1, spec)[0];
}

Eigen::MatrixXd gram_matrix(const Domain& domain, const PolyBasis& basis,
                            const QuadratureSpec& spec) {
  const int N = basis.size();
  const int m = basis.degree() + 1;  // y-degree of phi_k phi_l is <= 2n
  const auto& [nodes, weights] = gauss_legendre(m);
  double y0 = domain.bounding_box().ymin;
  const int dim = N * (N + 1) / 2;

  auto make_g = [&](const ParametricCurve& curve) -> Fn {
    return [&, y0](double t, Eigen::VectorXd& out) {
      auto j = curve.eval(t);
      double mid = 0.5 * (y0 + j.p.y), half = 0.5 * (j.p.y - y0);
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
      Eigen::VectorXd b(N);
      for (int q = 0; q < m; ++q) {
        basis.eval_into({j.p.x, mid + half * nodes[q]}, b);
        M.selfadjointView<Eigen::Lower>().rankUpdate(b, weights[q]);
      }
      double factor = -half * j.d1.x;
      out.resize(dim);
      int idx = 0;
      for (int col = 0; col < N; ++col)
        for (int row = col; row < N; ++row) out[idx++] = factor * M(row, col);
    };
  };

  Eigen::VectorXd flat = boundary_integral(domain, make_g, dim, spec);
  Eigen::MatrixXd G(N, N);
  int idx = 0;
  for (int col = 0; col < N; ++col)
    for (int row = col; row < N; ++row) {
      G(row, col) = flat[idx];
      G(col, row) = flat[idx];
      ++idx;
    }
  return G;
}

}  // namespace chf
