#include "fhp/diffop.hpp"

#include <cmath>
#include <stdexcept>

namespace fhp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Eigen::VectorXd apply_P(const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Index n = y.size();
  if (n < 3) throw std::invalid_argument("apply_P: series length must be >= 3");
  VectorXd out(n - 2);
  for (Index m = 0; m < n - 2; ++m) out[m] = y[m + 2] - 2.0 * y[m + 1] + y[m];
  return out;
}

Eigen::VectorXd apply_Pt(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Index k = v.size();
  if (k < 1) throw std::invalid_argument("apply_Pt: input must be non-empty");
  VectorXd out = VectorXd::Zero(k + 2);
  for (Index m = 0; m < k; ++m) {
    out[m] += v[m];
    out[m + 1] -= 2.0 * v[m];
    out[m + 2] += v[m];
  }
  return out;
}

Eigen::MatrixXd dense_P(Eigen::Index n) {
  if (n < 3) throw std::invalid_argument("dense_P: n must be >= 3");
  MatrixXd P = MatrixXd::Zero(n - 2, n);
  for (Index m = 0; m < n - 2; ++m) {
    P(m, m) = 1.0;
    P(m, m + 1) = -2.0;
    P(m, m + 2) = 1.0;
  }
  return P;
}

Eigen::MatrixXd kernel_Z(Eigen::Index n) {
  if (n < 3) throw std::invalid_argument("kernel_Z: n must be >= 3");
  MatrixXd Z(n, 2);
  Z.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  // ramp 1..n, orthogonalized against the constant column
  VectorXd t = VectorXd::LinSpaced(n, 1.0, static_cast<double>(n));
  t.array() -= t.mean();
  Z.col(1) = t / t.norm();
  return Z;
}

Eigen::MatrixXd BandedSpd::dense() const {
  const Index n = diag.size();
  MatrixXd a = MatrixXd::Zero(n, n);
  a.diagonal() = diag;
  for (Index i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = off1[i];
  for (Index i = 0; i + 2 < n; ++i) a(i, i + 2) = a(i + 2, i) = off2[i];
  return a;
}

BandedSpd gram_PtP(Eigen::Index n) {
  if (n < 3) throw std::invalid_argument("gram_PtP: n must be >= 3");
  BandedSpd a;
  a.diag = VectorXd::Zero(n);
  a.off1 = VectorXd::Zero(n - 1);
  a.off2 = VectorXd::Zero(n - 2);
  // accumulate the stencil contributions row by row of P
  for (Index m = 0; m < n - 2; ++m) {
    a.diag[m] += 1.0;
    a.diag[m + 1] += 4.0;
    a.diag[m + 2] += 1.0;
    a.off1[m] += -2.0;
    a.off1[m + 1] += -2.0;
    a.off2[m] += 1.0;
  }
  return a;
}

BandedSpd gram_PPt(Eigen::Index n) {
  if (n < 3) throw std::invalid_argument("gram_PPt: n must be >= 3");
  const Index k = n - 2;
  BandedSpd a;
  a.diag = VectorXd::Constant(k, 6.0);
  a.off1 = VectorXd::Constant(std::max<Index>(k - 1, 0), -4.0);
  a.off2 = VectorXd::Constant(std::max<Index>(k - 2, 0), 1.0);
  return a;
}

PentaCholesky::PentaCholesky(const BandedSpd& a) {
  const Index n = a.size();
  d_.resize(n);
  l1_.resize(std::max<Index>(n - 1, 0));
  l2_.resize(std::max<Index>(n - 2, 0));
  for (Index i = 0; i < n; ++i) {
    double di = a.diag[i];
    if (i >= 1) di -= l1_[i - 1] * l1_[i - 1] * d_[i - 1];
    if (i >= 2) di -= l2_[i - 2] * l2_[i - 2] * d_[i - 2];
    if (!(di > 0.0)) throw std::runtime_error("PentaCholesky: matrix is not positive definite");
    d_[i] = di;
    if (i + 1 < n) {
      double e = a.off1[i];
      if (i >= 1) e -= l1_[i - 1] * l2_[i - 1] * d_[i - 1];
      l1_[i] = e / di;
    }
    if (i + 2 < n) l2_[i] = a.off2[i] / di;
  }
}

void PentaCholesky::solve_in_place(Eigen::VectorXd& b) const {
  const Index n = d_.size();
  if (b.size() != n) throw std::invalid_argument("PentaCholesky::solve: size mismatch");
  // L z = b
  for (Index i = 1; i < n; ++i) {
    b[i] -= l1_[i - 1] * b[i - 1];
    if (i >= 2) b[i] -= l2_[i - 2] * b[i - 2];
  }
  // D w = z
  b.array() /= d_.array();
  // L' x = w
  for (Index i = n - 2; i >= 0; --i) {
    b[i] -= l1_[i] * b[i + 1];
    if (i + 2 < n) b[i] -= l2_[i] * b[i + 2];
  }
}

Eigen::VectorXd PentaCholesky::solve(const Eigen::Ref<const Eigen::VectorXd>& b) const {
  VectorXd x = b;
  solve_in_place(x);
  return x;
}

Eigen::VectorXd solve_smoother(const Eigen::Ref<const Eigen::VectorXd>& x, double alpha) {
  const Index n = x.size();
  if (n < 3) throw std::invalid_argument("solve_smoother: series length must be >= 3");
  if (!x.allFinite()) throw std::invalid_argument("solve_smoother: input contains non-finite values");
  if (alpha < 0.0 || !std::isfinite(alpha)) throw std::domain_error("solve_smoother: alpha must be >= 0");
  if (alpha == 0.0) return x;

  BandedSpd a = gram_PtP(n);
  a.diag = (alpha * a.diag.array() + 1.0).matrix();
  a.off1 *= alpha;
  a.off2 *= alpha;
  return PentaCholesky(a).solve(x);
}

Eigen::VectorXd min_norm_right_inverse_apply(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Index k = v.size();
  if (k < 1) throw std::invalid_argument("min_norm_right_inverse_apply: input must be non-empty");
  VectorXd z = PentaCholesky(gram_PPt(k + 2)).solve(v);
  return apply_Pt(z);
}

}  // namespace fhp
