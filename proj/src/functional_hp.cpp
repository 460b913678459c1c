#include "fhp/functional_hp.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "fhp/diffop.hpp"
#include "fhp/util.hpp"

namespace fhp {

using Eigen::Index;
using Eigen::VectorXd;

std::string_view to_string(OperatorLabel label) {
  switch (label) {
    case OperatorLabel::sigma_u: return "Sigma_u";
    case OperatorLabel::sigma_v: return "Sigma_v";
    case OperatorLabel::smoothing: return "B";
    case OperatorLabel::generic: return "generic";
  }
  return "unknown";
}

Eigen::VectorXd apply_operator(const DiagonalOperator& op,
                               const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  if (coeffs.size() != op.J())
    throw std::invalid_argument("apply_operator: coefficient length must match J");
  return op.eigenvalues.cwiseProduct(coeffs);
}

FilterResult filter(const CoefficientMatrix& X, const DiagonalOperator& B, int threads) {
  if (X.rows() < 3) throw std::invalid_argument("filter: need at least 3 curves");
  if (X.cols() != B.J())
    throw std::invalid_argument("filter: operator truncation must match coefficient columns");
  if (!X.allFinite()) throw std::invalid_argument("filter: non-finite coefficients");
  if ((B.eigenvalues.array() < 0.0).any())
    throw std::domain_error("filter: smoothing operator violates the positivity condition");

  FilterResult result;
  result.trend.resize(X.rows(), X.cols());
  result.per_component_alpha = B.eigenvalues;
  result.component_status.assign(static_cast<size_t>(X.cols()), EstimateStatus::ok);
  parallel_for(X.cols(), threads, [&](Index j) {
    result.trend.col(j) = solve_smoother(X.col(j), B.eigenvalues[j]);
  });
  result.residual = X - result.trend;
  return result;
}

double functional_objective(const CoefficientMatrix& X, const CoefficientMatrix& Y,
                            const DiagonalOperator& B) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw std::invalid_argument("functional_objective: shape mismatch");
  if (X.cols() != B.J())
    throw std::invalid_argument("functional_objective: operator truncation mismatch");
  double value = (X - Y).squaredNorm();
  for (Index j = 0; j < X.cols(); ++j)
    value += B.eigenvalues[j] * apply_P(Y.col(j)).squaredNorm();
  return value;
}

DiagonalOperator optimal_B(const DiagonalOperator& sigma_u, const DiagonalOperator& sigma_v) {
  if (sigma_u.J() != sigma_v.J())
    throw std::invalid_argument("optimal_B: operator truncations differ");
  if ((sigma_u.eigenvalues.array() <= 0.0).any())
    throw std::domain_error("optimal_B: Sigma_u eigenvalues must be positive");
  if ((sigma_v.eigenvalues.array() <= 0.0).any())
    throw std::domain_error("optimal_B: Sigma_v eigenvalues must be positive");
  return {sigma_u.eigenvalues.cwiseQuotient(sigma_v.eigenvalues), OperatorLabel::smoothing};
}

std::vector<ScalarEstimate> estimate_components(const CoefficientMatrix& X, int threads) {
  if (X.rows() < 5)
    throw std::invalid_argument("estimate_components: need at least 5 curves");
  if (!X.allFinite())
    throw std::invalid_argument("estimate_components: non-finite coefficients");
  std::vector<ScalarEstimate> components(static_cast<size_t>(X.cols()));
  parallel_for(X.cols(), threads, [&](Index j) {
    VectorXd px = apply_P(X.col(j));
    // A column that is affine up to representation noise has a second
    // difference of pure roundoff; snap it to zero, otherwise the lag sums
    // are O(eps^2) garbage with arbitrary signs.
    const double scale = X.col(j).cwiseAbs().maxCoeff();
    if (px.cwiseAbs().maxCoeff() <=
        1024.0 * std::numeric_limits<double>::epsilon() * scale)
      px.setZero();
    components[static_cast<size_t>(j)] = estimate_alpha(px);
  });
  return components;
}

DiagonalOperator estimate_Sigma_u(const CoefficientMatrix& X) {
  const auto components = estimate_components(X);
  VectorXd eig(X.cols());
  for (Index j = 0; j < X.cols(); ++j) eig[j] = components[static_cast<size_t>(j)].mu_hat;
  return {std::move(eig), OperatorLabel::sigma_u};
}

DiagonalOperator estimate_Sigma_v(const CoefficientMatrix& X) {
  const auto components = estimate_components(X);
  VectorXd eig(X.cols());
  for (Index j = 0; j < X.cols(); ++j) eig[j] = components[static_cast<size_t>(j)].tau_hat;
  return {std::move(eig), OperatorLabel::sigma_v};
}

bool BEstimate::all_degenerate() const {
  return std::none_of(component_status.begin(), component_status.end(),
                      [](EstimateStatus s) { return s == EstimateStatus::ok; });
}

BEstimate estimate_B(const CoefficientMatrix& X, double alpha_max, int threads) {
  if (!(alpha_max > 0.0)) throw std::domain_error("estimate_B: alpha_max must be positive");
  BEstimate est;
  est.alpha_max = alpha_max;
  est.components = estimate_components(X, threads);
  est.B.label = OperatorLabel::smoothing;
  est.B.eigenvalues.resize(X.cols());
  est.component_status.resize(static_cast<size_t>(X.cols()));
  for (Index j = 0; j < X.cols(); ++j) {
    const ScalarEstimate& c = est.components[static_cast<size_t>(j)];
    est.component_status[static_cast<size_t>(j)] = c.status;
    switch (c.status) {
      case EstimateStatus::ok: est.B.eigenvalues[j] = c.alpha_hat; break;
      case EstimateStatus::mu_clamped: est.B.eigenvalues[j] = 0.0; break;
      case EstimateStatus::tau_degenerate: est.B.eigenvalues[j] = alpha_max; break;
    }
  }
  return est;
}

}  // namespace fhp
