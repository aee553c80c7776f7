#include "chf/basis.hpp"

#include <cmath>

#include "chf/gauss.hpp"

namespace chf {

PolyBasis::PolyBasis(int n, BBox box) : n_(n), box_(box) {
  if (n < 0) throw Error("basis degree must be nonnegative");
  if (!(box.width() > 0) || !(box.height() > 0))
    throw Error("basis box must have positive width and height");
  for (int total = 0; total <= n; ++total)
    for (int a = total; a >= 0; --a) index_.emplace_back(a, total - a);
}

void PolyBasis::eval_into(Point2 p, Eigen::VectorXd& out) const {
  out.resize(size());
  double u = (2.0 * p.x - (box_.xmin + box_.xmax)) / box_.width();
  double v = (2.0 * p.y - (box_.ymin + box_.ymax)) / box_.height();
  std::vector<double> pu(n_ + 1), pv(n_ + 1);
  legendre_orthonormal(u, n_, pu.data());
  legendre_orthonormal(v, n_, pv.data());
  double scale = 2.0 / std::sqrt(box_.width() * box_.height());
  for (int k = 0; k < size(); ++k)
    out[k] = scale * pu[index_[k].first] * pv[index_[k].second];
}

Eigen::VectorXd PolyBasis::eval(Point2 p) const {
  Eigen::VectorXd out;
  eval_into(p, out);
  return out;
}

}  // namespace chf
