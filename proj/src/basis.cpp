#include "fhp/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace fhp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// trapezoid weights for an arbitrary strictly increasing grid
VectorXd trapezoid_weights(const VectorXd& grid) {
  const Index m = grid.size();
  VectorXd w = VectorXd::Zero(m);
  for (Index k = 0; k + 1 < m; ++k) {
    const double h = grid[k + 1] - grid[k];
    w[k] += 0.5 * h;
    w[k + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

BasisSpec BasisSpec::sine(int J, Eigen::Index m) {
  BasisSpec spec;
  spec.kind_ = BasisKind::sine;
  spec.J_ = J;
  spec.grid_ = VectorXd::LinSpaced(m, 0.0, 1.0);
  spec.weights_ = trapezoid_weights(spec.grid_);
  spec.eval_.resize(m, J);
  const double sqrt2 = std::sqrt(2.0);
  for (int j = 0; j < J; ++j)
    spec.eval_.col(j) = (sqrt2 * ((j + 1) * M_PI * spec.grid_.array()).sin()).matrix();
  spec.validate();
  return spec;
}

BasisSpec BasisSpec::from_matrix(Eigen::MatrixXd evaluations, Eigen::VectorXd grid) {
  BasisSpec spec;
  spec.kind_ = BasisKind::matrix;
  spec.J_ = static_cast<int>(evaluations.cols());
  spec.grid_ = std::move(grid);
  spec.weights_ = trapezoid_weights(spec.grid_);
  spec.eval_ = std::move(evaluations);
  if (spec.eval_.rows() != spec.grid_.size())
    throw std::invalid_argument("BasisSpec: evaluation matrix rows must match grid size");
  spec.validate();
  return spec;
}

void BasisSpec::validate() const {
  if (J_ < 1) throw std::invalid_argument("BasisSpec: J must be >= 1");
  const Index m = grid_.size();
  if (m < 2 * static_cast<Index>(J_))
    throw std::invalid_argument("BasisSpec: grid must have at least 2J points");
  if (grid_[0] < 0.0 || grid_[m - 1] > 1.0)
    throw std::invalid_argument("BasisSpec: grid must lie in [0,1]");
  for (Index k = 0; k + 1 < m; ++k)
    if (!(grid_[k] < grid_[k + 1]))
      throw std::invalid_argument("BasisSpec: grid must be strictly increasing");
  if (!eval_.allFinite()) throw std::invalid_argument("BasisSpec: non-finite basis values");
  if (gram_error() > kGramTolerance)
    throw std::invalid_argument("BasisSpec: basis fails the discrete orthonormality check");
}

double BasisSpec::gram_error() const {
  MatrixXd gram = eval_.transpose() * weights_.asDiagonal() * eval_;
  gram.diagonal().array() -= 1.0;
  return gram.cwiseAbs().maxCoeff();
}

double BasisSpec::eval_basis(int j, double t) const {
  if (j < 1 || j > J_) throw std::out_of_range("eval_basis: index out of range");
  if (kind_ == BasisKind::sine) return std::sqrt(2.0) * std::sin(j * M_PI * t);
  // table lookup with linear interpolation
  const Index m = grid_.size();
  if (t <= grid_[0]) return eval_(0, j - 1);
  if (t >= grid_[m - 1]) return eval_(m - 1, j - 1);
  Index lo = 0, hi = m - 1;
  while (hi - lo > 1) {
    const Index mid = (lo + hi) / 2;
    (grid_[mid] <= t ? lo : hi) = mid;
  }
  const double w = (t - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return (1.0 - w) * eval_(lo, j - 1) + w * eval_(hi, j - 1);
}

Eigen::VectorXd project(const SampledCurve& curve, const BasisSpec& spec) {
  if (curve.grid.size() != spec.grid_size() ||
      (curve.grid.array() != spec.grid().array()).any())
    throw std::invalid_argument("project: curve grid does not match basis grid");
  if (curve.values.size() != spec.grid_size())
    throw std::invalid_argument("project: curve has wrong number of samples");
  if (!curve.values.allFinite()) throw std::invalid_argument("project: non-finite curve values");
  return spec.evaluations().transpose() * spec.quad_weights().cwiseProduct(curve.values);
}

SampledCurve reconstruct(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const BasisSpec& spec) {
  if (coeffs.size() != spec.J())
    throw std::invalid_argument("reconstruct: coefficient vector must have length J");
  return {spec.grid(), spec.evaluations() * coeffs};
}

CoefficientMatrix project_series(const std::vector<SampledCurve>& curves, const BasisSpec& spec) {
  if (curves.empty()) throw std::invalid_argument("project_series: empty series");
  CoefficientMatrix coeffs(static_cast<Index>(curves.size()), spec.J());
  for (Index i = 0; i < coeffs.rows(); ++i)
    coeffs.row(i) = project(curves[static_cast<size_t>(i)], spec).transpose();
  return coeffs;
}

CoefficientMatrix project_series(const Eigen::Ref<const Eigen::MatrixXd>& values,
                                 const BasisSpec& spec) {
  if (values.rows() == 0) throw std::invalid_argument("project_series: empty series");
  if (values.cols() != spec.grid_size())
    throw std::invalid_argument("project_series: curves have wrong number of samples");
  if (!values.allFinite()) throw std::invalid_argument("project_series: non-finite curve values");
  return values * spec.quad_weights().asDiagonal() * spec.evaluations();
}

Eigen::MatrixXd reconstruct_series(const CoefficientMatrix& coeffs, const BasisSpec& spec) {
  if (coeffs.cols() != spec.J())
    throw std::invalid_argument("reconstruct_series: coefficient matrix must have J columns");
  return coeffs * spec.evaluations().transpose();
}

double quad_norm_sq(const Eigen::Ref<const Eigen::VectorXd>& values, const BasisSpec& spec) {
  if (values.size() != spec.grid_size())
    throw std::invalid_argument("quad_norm_sq: wrong number of samples");
  return spec.quad_weights().dot(values.cwiseAbs2());
}

int select_truncation(const std::vector<SampledCurve>& curves, const BasisSpec& spec,
                      double fraction) {
  if (fraction <= 0.0 || fraction > 1.0)
    throw std::domain_error("select_truncation: fraction must be in (0,1]");
  const CoefficientMatrix coeffs = project_series(curves, spec);
  double total = 0.0;
  for (const auto& c : curves) total += quad_norm_sq(c.values, spec);
  if (total == 0.0) return 1;
  double captured = 0.0;
  for (int j = 0; j < spec.J(); ++j) {
    captured += coeffs.col(j).squaredNorm();
    if (captured >= fraction * total) return j + 1;
  }
  return spec.J();
}

}  // namespace fhp
