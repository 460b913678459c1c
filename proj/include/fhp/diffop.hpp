// diffop.hpp - second-order differencing operator P and the banded
// linear algebra built on it (smoother solve, kernel basis, right inverse).
#pragma once

#include <Eigen/Dense>

namespace fhp {

// (Py)[m] = y[m+2] - 2 y[m+1] + y[m], mapping R^n -> R^{n-2}, n >= 3.
Eigen::VectorXd apply_P(const Eigen::Ref<const Eigen::VectorXd>& y);

// Adjoint P': R^{n-2} -> R^n.
Eigen::VectorXd apply_Pt(const Eigen::Ref<const Eigen::VectorXd>& v);

// Dense (n-2) x n matrix form of P. Verification scale only.
Eigen::MatrixXd dense_P(Eigen::Index n);

// n x 2 orthonormal basis of ker P: Gram-Schmidt on the constant and
// linear-ramp sequences, so Z is deterministic across platforms.
Eigen::MatrixXd kernel_Z(Eigen::Index n);

// Symmetric pentadiagonal matrix stored by diagonals.
struct BandedSpd {
  Eigen::VectorXd diag;  // A(i, i), size n
  Eigen::VectorXd off1;  // A(i, i+1), size n-1
  Eigen::VectorXd off2;  // A(i, i+2), size n-2

  Eigen::Index size() const { return diag.size(); }
  Eigen::MatrixXd dense() const;
};

// P'P as five diagonals (n x n, interior rows 1 -4 6 -4 1).
BandedSpd gram_PtP(Eigen::Index n);

// PP' as five diagonals ((n-2) x (n-2), constant bands 6 -4 1).
BandedSpd gram_PPt(Eigen::Index n);

// LDL' factorization of a pentadiagonal SPD matrix. Factor and solve are
// both O(n); no pivoting is needed since the matrix is SPD.
class PentaCholesky {
 public:
  explicit PentaCholesky(const BandedSpd& a);

  void solve_in_place(Eigen::VectorXd& b) const;
  Eigen::VectorXd solve(const Eigen::Ref<const Eigen::VectorXd>& b) const;

 private:
  Eigen::VectorXd d_;   // pivots
  Eigen::VectorXd l1_;  // L(i+1, i)
  Eigen::VectorXd l2_;  // L(i+2, i)
};

// y = (I + alpha P'P)^{-1} x. alpha = 0 short-circuits to a copy.
// For alpha >= ~1e12 the condition number grows like 1 + 16*alpha and
// accuracy degrades accordingly; the solve is still performed.
Eigen::VectorXd solve_smoother(const Eigen::Ref<const Eigen::VectorXd>& x, double alpha);

// w = P'(PP')^{-1} v: minimum-norm solution of Pw = v (w orthogonal to ker P).
Eigen::VectorXd min_norm_right_inverse_apply(const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace fhp
