// basis.hpp - orthonormal basis handling on [0,1]: evaluation, projection of
// sampled curves to coefficients, and reconstruction.
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fhp {

// n curves by J components; column j is the scalar series of coefficients
// on basis function j across the whole functional time series.
using CoefficientMatrix = Eigen::MatrixXd;

enum class BasisKind { sine, matrix };

// One functional observation sampled on a grid. All curves of a series
// share the identical grid.
struct SampledCurve {
  Eigen::VectorXd grid;
  Eigen::VectorXd values;
};

// A truncated orthonormal basis together with the quadrature used to
// project onto it. Construction validates J >= 1, m >= 2J, a strictly
// increasing grid inside [0,1], and discrete orthonormality of the basis
// under the trapezoidal quadrature (max |E'WE - I| <= 1e-6).
class BasisSpec {
 public:
  // e_j(t) = sqrt(2) sin(j pi t) on a uniform m-point grid over [0,1].
  static BasisSpec sine(int J, Eigen::Index m);

  // User-supplied m x J evaluation matrix on an explicit grid. Must pass
  // the same orthonormality check as the built-in basis.
  static BasisSpec from_matrix(Eigen::MatrixXd evaluations, Eigen::VectorXd grid);

  BasisKind kind() const { return kind_; }
  int J() const { return J_; }
  Eigen::Index grid_size() const { return grid_.size(); }
  const Eigen::VectorXd& grid() const { return grid_; }
  const Eigen::VectorXd& quad_weights() const { return weights_; }
  const Eigen::MatrixXd& evaluations() const { return eval_; }

  // e_j(t) for 1 <= j <= J. Closed form for the sine basis, linear
  // interpolation between grid rows for a user-supplied matrix.
  double eval_basis(int j, double t) const;

  // max-norm distance of the discrete Gram matrix from the identity
  double gram_error() const;

 private:
  BasisSpec() = default;
  void validate() const;

  BasisKind kind_ = BasisKind::sine;
  int J_ = 0;
  Eigen::VectorXd grid_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd eval_;  // m x J
};

constexpr double kGramTolerance = 1e-6;

// Coefficient j approximates the integral of curve * e_j by the trapezoidal
// rule on the shared grid.
Eigen::VectorXd project(const SampledCurve& curve, const BasisSpec& spec);

SampledCurve reconstruct(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const BasisSpec& spec);

CoefficientMatrix project_series(const std::vector<SampledCurve>& curves, const BasisSpec& spec);
// rows of `values` are curves sampled on spec.grid()
CoefficientMatrix project_series(const Eigen::Ref<const Eigen::MatrixXd>& values, const BasisSpec& spec);

// n x m matrix of reconstructed curve values, row per coefficient row
Eigen::MatrixXd reconstruct_series(const CoefficientMatrix& coeffs, const BasisSpec& spec);

// quadrature approximation of the squared L2 norm of a sampled curve
double quad_norm_sq(const Eigen::Ref<const Eigen::VectorXd>& values, const BasisSpec& spec);

// Smallest J <= spec.J() whose leading coefficients capture at least
// `fraction` of the total empirical quadrature energy of the series;
// returns spec.J() when no prefix reaches it.
int select_truncation(const std::vector<SampledCurve>& curves, const BasisSpec& spec,
                      double fraction = 0.995);

}  // namespace fhp
