#include "chf/christoffel.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <algorithm>
#include <cmath>
#include <vector>

namespace chf {

namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;

/// Column-major lower Cholesky factor in quadruple precision.
struct QuadFactor {
  int N = 0;
  std::vector<Quad> L;  // N*N, lower triangle used

  Quad& at(int r, int c) { return L[static_cast<std::size_t>(c) * N + r]; }
  const Quad& at(int r, int c) const {
    return L[static_cast<std::size_t>(c) * N + r];
  }

  static QuadFactor factorize(const Eigen::MatrixXd& G) {
    QuadFactor f;
    f.N = static_cast<int>(G.rows());
    f.L.assign(static_cast<std::size_t>(f.N) * f.N, Quad(0));
    for (int c = 0; c < f.N; ++c)
      for (int r = c; r < f.N; ++r) f.at(r, c) = Quad(G(r, c));
    f.run();
    return f;
  }

  static QuadFactor factorize_raw(int N, std::vector<Quad> G) {
    QuadFactor f;
    f.N = N;
    f.L = std::move(G);
    f.run();
    return f;
  }

  void run() {
    for (int c = 0; c < N; ++c) {
      Quad d = at(c, c);
      for (int k = 0; k < c; ++k) d -= at(c, k) * at(c, k);
      if (d <= 0) throw Error("indefinite Gram matrix in extended precision");
      Quad s = sqrt(d);
      at(c, c) = s;
      for (int r = c + 1; r < N; ++r) {
        Quad v = at(r, c);
        for (int k = 0; k < c; ++k) v -= at(r, k) * at(c, k);
        at(r, c) = v / s;
      }
    }
  }

  std::vector<Quad> forward(const Eigen::VectorXd& b) const {
    std::vector<Quad> z(N);
    for (int r = 0; r < N; ++r) {
      Quad v(b[r]);
      for (int k = 0; k < r; ++k) v -= at(r, k) * z[k];
      z[r] = v / at(r, r);
    }
    return z;
  }

  std::vector<Quad> backward(const std::vector<Quad>& z) const {
    std::vector<Quad> w(N);
    for (int r = N - 1; r >= 0; --r) {
      Quad v = z[r];
      for (int k = r + 1; k < N; ++k) v -= at(k, r) * w[k];
      w[r] = v / at(r, r);
    }
    return w;
  }
};

double estimate_cond(const Eigen::MatrixXd& G,
                     const Eigen::LLT<Eigen::MatrixXd>& llt) {
  // power iteration on G and on G^-1 via the factorization
  const int N = static_cast<int>(G.rows());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(N).normalized();
  double hi = 0.0;
  for (int it = 0; it < 30; ++it) {
    v = (G * v).normalized();
    hi = v.dot(G * v);
  }
  Eigen::VectorXd w = Eigen::VectorXd::Ones(N).normalized();
  double lo_inv = 0.0;
  for (int it = 0; it < 30; ++it) {
    w = llt.solve(w).normalized();
    lo_inv = w.dot(llt.solve(w));
  }
  double lo = lo_inv > 0.0 ? 1.0 / lo_inv : 0.0;
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

// Gauss-Legendre on [-1,1] with nodes and weights in quadruple precision.
void gauss_quad(int m, std::vector<Quad>& x, std::vector<Quad>& w) {
  x.assign(m, Quad(0));
  w.assign(m, Quad(0));
  auto pd = [m](const Quad& u) {
    Quad p0(1), p1 = u;
    for (int k = 2; k <= m; ++k) {
      Quad p2 = ((2 * k - 1) * u * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    Quad d = m * (u * p1 - p0) / (u * u - 1);
    return std::pair<Quad, Quad>{p1, d};
  };
  for (int i = 0; i < m; ++i) {
    Quad u(std::cos(M_PI * (i + 0.75) / (m + 0.5)));
    for (int it = 0; it < 80; ++it) {
      auto [p, d] = pd(u);
      Quad du = p / d;
      u -= du;
      if (abs(du) < Quad(1e-40)) break;
    }
    Quad d = pd(u).second;
    x[i] = u;
    w[i] = 2 / ((1 - u * u) * d * d);
  }
}

void legendre_orthonormal_quad(const Quad& u, int nmax, Quad* out) {
  Quad p0(1), p1 = u;
  out[0] = sqrt(Quad(1) / 2);
  if (nmax >= 1) out[1] = sqrt(Quad(3) / 2) * u;
  for (int k = 2; k <= nmax; ++k) {
    Quad p2 = ((2 * k - 1) * u * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
    out[k] = sqrt(Quad(2 * k + 1) / 2) * p2;
  }
}

/// Gram matrix assembled in quadruple precision from a positive cubature
/// built on rays from the centroid of the (normalized) domain. Every weight
/// is nonnegative, so the result is positive semidefinite by construction,
/// and the quad accumulation keeps entries accurate well below the smallest
/// eigenvalue, which the double Green assembly cannot do once the condition
/// number approaches 1/eps. Requires the domain to be star-shaped about the
/// bounding-box center (checked by sampling).
std::vector<Quad> gram_quad_star(const Domain& domain, const PolyBasis& basis) {
  const int n = basis.degree(), N = basis.size();
  const BBox& box = basis.box();
  const Point2 c = box.center();
  if (domain.contains(c) != Membership::Inside)
    throw Error("extended Gram assembly: frame center is not interior");
  const double rmax = domain.diameter() + 1.0;

  auto ray = [&](double th) {
    Vec2 dir{std::cos(th), std::sin(th)};
    double lo = 0.0, hi = rmax;
    for (int it = 0; it < 64; ++it) {
      double mid = 0.5 * (lo + hi);
      if (domain.contains(c + mid * dir) != Membership::Outside)
        lo = mid;
      else
        hi = mid;
    }
    for (int j = 1; j <= 8; ++j)
      if (domain.contains(c + (lo * j / 9.0) * dir) == Membership::Outside)
        throw Error("extended Gram assembly: domain is not star-shaped about "
                    "its center");
    return 0.5 * (lo + hi);
  };

  // angular rule: exact uniform grid when the boundary is a circle about c
  // (every ellipse normalizes to one), composite Gauss panels split at the
  // corner angles otherwise
  std::vector<std::pair<double, Quad>> angular;  // (theta, weight)
  {
    double rmin_s = rmax, rmax_s = 0.0;
    for (int i = 0; i < 32; ++i) {
      double r = ray(2.0 * M_PI * (i + 0.5) / 32);
      rmin_s = std::min(rmin_s, r);
      rmax_s = std::max(rmax_s, r);
    }
    if (rmax_s - rmin_s <= 1e-12 * rmax_s) {
      const int K = 4 * n + 16;
      for (int i = 0; i < K; ++i)
        angular.emplace_back(2.0 * M_PI * (i + 0.5) / K, Quad(2) * M_PI / K);
    } else {
      std::vector<double> cuts;
      for (const auto& corner : domain.corners()) {
        double a = std::atan2(corner.v.y - c.y, corner.v.x - c.x);
        cuts.push_back(a < 0 ? a + 2.0 * M_PI : a);
      }
      std::sort(cuts.begin(), cuts.end());
      if (cuts.empty()) cuts.push_back(0.0);
      std::vector<Quad> gx, gw;
      gauss_quad(15, gx, gw);
      const int panels_total = std::max(64, 8 * n);
      for (std::size_t s = 0; s < cuts.size(); ++s) {
        double a0 = cuts[s];
        double a1 = (s + 1 < cuts.size() ? cuts[s + 1] : cuts[0] + 2.0 * M_PI);
        double len = a1 - a0;
        int panels = std::max(
            1, static_cast<int>(std::ceil(panels_total * len / (2 * M_PI))));
        for (int pnl = 0; pnl < panels; ++pnl) {
          double b0 = a0 + len * pnl / panels;
          double half = 0.5 * len / panels;
          for (std::size_t q = 0; q < gx.size(); ++q)
            angular.emplace_back(
                b0 + half * (1.0 + static_cast<double>(gx[q])),
                gw[q] * Quad(half));
        }
      }
    }
  }

  std::vector<Quad> ru, rw;
  gauss_quad(n + 1, ru, rw);  // exact for r * (degree-2n polynomial)

  std::vector<Quad> bu(n + 1), bv(n + 1), b(N);
  const Quad scale = 2 / sqrt(Quad(box.width()) * Quad(box.height()));
  std::vector<Quad> G(static_cast<std::size_t>(N) * N, Quad(0));
  for (const auto& [theta, wth] : angular) {
    double R = ray(theta);
    Vec2 dir{std::cos(theta), std::sin(theta)};
    for (std::size_t j = 0; j < ru.size(); ++j) {
      double rj = R * 0.5 * (1.0 + static_cast<double>(ru[j]));
      Point2 p = c + rj * dir;
      Quad wt = wth * rw[j] * Quad(R) / 2 * Quad(rj);
      Quad uu = (2 * Quad(p.x) - (Quad(box.xmin) + Quad(box.xmax))) /
                Quad(box.width());
      Quad vv = (2 * Quad(p.y) - (Quad(box.ymin) + Quad(box.ymax))) /
                Quad(box.height());
      legendre_orthonormal_quad(uu, n, bu.data());
      legendre_orthonormal_quad(vv, n, bv.data());
      for (int k = 0; k < N; ++k) {
        auto [a, d] = basis.index(k);
        b[k] = scale * bu[a] * bv[d];
      }
      for (int col = 0; col < N; ++col) {
        Quad t = wt * b[col];
        Quad* Gc = G.data() + static_cast<std::size_t>(col) * N;
        for (int row = col; row < N; ++row) Gc[row] += t * b[row];
      }
    }
  }
  return G;
}

}  // namespace

ChristoffelEvaluator ChristoffelEvaluator::build(
    const Domain& domain, int n, const QuadratureSpec& spec,
    std::optional<PrecisionMode> mode) {
  if (n < 0) throw Error("degree must be nonnegative");
  if (n > 32) throw Error("degree capped at 32");
  ChristoffelEvaluator ev;

  AffineMap norm = AffineMap::identity();
  try {
    double A = area_integral(domain, [](Point2) { return 1.0; }, 0, spec);
    double mx =
        area_integral(domain, [](Point2 p) { return p.x; }, 1, spec) / A;
    double my =
        area_integral(domain, [](Point2 p) { return p.y; }, 1, spec) / A;
    auto c2 = [&](auto f) { return area_integral(domain, f, 2, spec) / A; };
    double cxx = c2([&](Point2 p) { return (p.x - mx) * (p.x - mx); });
    double cxy = c2([&](Point2 p) { return (p.x - mx) * (p.y - my); });
    double cyy = c2([&](Point2 p) { return (p.y - my) * (p.y - my); });
    double l11 = std::sqrt(cxx);
    double l21 = cxy / l11;
    double l22 = std::sqrt(cyy - l21 * l21);
    if (A > 0.0 && l11 > 0.0 && l22 > 0.0 &&
        std::isfinite(l11 + l21 + l22)) {
      AffineMap L{l11, 0.0, l21, l22, mx, my};  // frame -> world
      norm = L.inverse();
    }
  } catch (const Error&) {
    // moments unavailable: keep the identity frame
  }
  ev.norm_ = norm;
  ev.inv_det_ = 1.0 / std::abs(norm.det());

  ev.domain_ = std::make_shared<const Domain>(domain.transformed(norm));
  ev.basis_ =
      std::make_shared<const PolyBasis>(n, ev.domain_->bounding_box());
  ev.gram_ = gram_matrix(*ev.domain_, *ev.basis_, spec);

  ev.llt_.compute(ev.gram_);
  bool llt_ok = ev.llt_.info() == Eigen::Success;
  if (!llt_ok && mode && *mode == PrecisionMode::Double)
    throw Error("indefinite Gram matrix (quadrature too loose or degree too "
                "large for double precision)");
  ev.cond_ = llt_ok ? estimate_cond(ev.gram_, ev.llt_)
                    : std::numeric_limits<double>::infinity();

  bool extended =
      mode ? (*mode == PrecisionMode::Extended)
           : (!llt_ok ||
              ev.cond_ * std::numeric_limits<double>::epsilon() > 1e-6);
  if (extended) {
    // the double Green assembly leaves ~eps-size noise in the entries; once
    // the spectrum reaches down to that floor the matrix must be rebuilt
    // with the positive quad-precision cubature
    bool entries_ok =
        llt_ok && ev.cond_ * std::numeric_limits<double>::epsilon() <= 1e-4;
    ev.extended_ = std::make_shared<QuadFactor>(
        entries_ok
            ? QuadFactor::factorize(ev.gram_)
            : QuadFactor::factorize_raw(
                  ev.basis_->size(), gram_quad_star(*ev.domain_, *ev.basis_)));
    ev.mode_ = PrecisionMode::Extended;
  }
  return ev;
}

double ChristoffelEvaluator::kernel_diag(Point2 x,
                                         Eigen::VectorXd* coeffs) const {
  Eigen::VectorXd b = basis_->eval(norm_.apply(x));
  if (mode_ == PrecisionMode::Double) {
    Eigen::VectorXd z =
        llt_.matrixL().solve(b);  // K = |L^-1 b|^2 = b^T G^-1 b
    double K = z.squaredNorm();
    if (coeffs) *coeffs = llt_.matrixU().solve(z) / K;
    return K;
  }
  const auto& f = *static_cast<const QuadFactor*>(extended_.get());
  auto z = f.forward(b);
  Quad K(0);
  for (const auto& zi : z) K += zi * zi;
  if (coeffs) {
    auto w = f.backward(z);
    coeffs->resize(f.N);
    for (int i = 0; i < f.N; ++i)
      (*coeffs)[i] = static_cast<double>(w[i] / K);
  }
  return static_cast<double>(K);
}

double ChristoffelEvaluator::lambda(Point2 x) const {
  double K = kernel_diag(x, nullptr);
  if (!(K > 0.0)) throw Error("kernel diagonal not positive");
  return inv_det_ / K;
}

BivariatePoly ChristoffelEvaluator::kernel_polynomial(Point2 x) const {
  Eigen::VectorXd c;
  kernel_diag(x, &c);
  return BivariatePoly(
      [basis = basis_, c = std::move(c), nm = norm_](Point2 p) {
        return basis->eval(nm.apply(p)).dot(c);
      },
      basis_->degree());
}

SupResult sup_on_region(const BivariatePoly& p, const Domain& region,
                        int grid_density) {
  SupResult r;
  r.grid_density = grid_density;
  const BBox& box = region.bounding_box();
  for (int i = 0; i < grid_density; ++i) {
    for (int j = 0; j < grid_density; ++j) {
      Point2 pt{box.xmin + box.width() * (i + 0.5) / grid_density,
                box.ymin + box.height() * (j + 0.5) / grid_density};
      if (region.contains(pt) == Membership::Outside) continue;
      r.value = std::max(r.value, std::abs(p(pt)));
      ++r.samples;
    }
  }
  for (const auto& poly : region.polylines()) {
    for (const auto& pt : poly) {
      r.value = std::max(r.value, std::abs(p(pt)));
      ++r.samples;
    }
  }
  if (r.samples == 0) throw Error("sup_on_region: empty region");
  return r;
}

}  // namespace chf
