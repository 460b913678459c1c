// functional_hp.hpp - the functional filter on basis coefficients and the
// operator-level estimation: diagonal operators, Y(B,X), the optimal
// smoothing operator Sigma_u Sigma_v^{-1}, and its data-driven estimator.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fhp/basis.hpp"
#include "fhp/scalar_hp.hpp"

namespace fhp {

enum class OperatorLabel { sigma_u, sigma_v, smoothing, generic };

std::string_view to_string(OperatorLabel label);

// An operator diagonal in the configured basis, stored as its eigenvalue
// sequence at truncation level J. Everything the model manipulates
// (Sigma_u, Sigma_v, B and their estimates) is of this form.
struct DiagonalOperator {
  Eigen::VectorXd eigenvalues;
  OperatorLabel label = OperatorLabel::generic;

  Eigen::Index J() const { return eigenvalues.size(); }

  // trace-class proxies at truncation
  double partial_trace() const { return eigenvalues.sum(); }
  double tail_ratio() const {
    return eigenvalues.size() > 0 && eigenvalues[0] != 0.0
               ? eigenvalues[eigenvalues.size() - 1] / eigenvalues[0]
               : 0.0;
  }
};

// out[j] = eigenvalues[j] * coeffs[j]
Eigen::VectorXd apply_operator(const DiagonalOperator& op,
                               const Eigen::Ref<const Eigen::VectorXd>& coeffs);

struct FilterResult {
  CoefficientMatrix trend;              // Y(B, X) coefficients, n x J
  CoefficientMatrix residual;           // X - trend
  Eigen::VectorXd per_component_alpha;  // smoothing weight used per component
  std::vector<EstimateStatus> component_status;
};

// Y(B,X) = (I + B P'P)^{-1} X, computed column by column: component j is
// smoothed with weight alpha_j = B.eigenvalues[j]. Requires eigenvalues >= 0
// (positivity of the smoothing operator). Columns are independent; threads
// > 1 splits them with a deterministic merge.
FilterResult filter(const CoefficientMatrix& X, const DiagonalOperator& B, int threads = 1);

// J_B(Y) = sum_ij (x_i^j - y_i^j)^2 + sum_j alpha_j sum_m (P ybar^j)_m^2
double functional_objective(const CoefficientMatrix& X, const CoefficientMatrix& Y,
                            const DiagonalOperator& B);

// eigenvalues[j] = mu_j / tau_j; the noise-to-signal operator
DiagonalOperator optimal_B(const DiagonalOperator& sigma_u, const DiagonalOperator& sigma_v);

// Per-component moment estimates from the differenced coefficient columns.
std::vector<ScalarEstimate> estimate_components(const CoefficientMatrix& X, int threads = 1);

// Sigma_u estimate: eigenvalue j is the (clamped) mu estimate of column j.
DiagonalOperator estimate_Sigma_u(const CoefficientMatrix& X);

// Sigma_v estimate: eigenvalue j is the raw tau estimate of column j
// (non-positive values are reported as-is and flagged by estimate_B).
DiagonalOperator estimate_Sigma_v(const CoefficientMatrix& X);

struct BEstimate {
  DiagonalOperator B;
  std::vector<EstimateStatus> component_status;
  std::vector<ScalarEstimate> components;
  double alpha_max = 0.0;

  bool all_degenerate() const;
};

// Data-driven estimate of the optimal smoothing operator. Component j gets
// alpha_hat_j when the estimate is clean, 0 when the noise estimate clamps,
// and alpha_max when the signal estimate degenerates, so the result is
// always usable by filter().
BEstimate estimate_B(const CoefficientMatrix& X, double alpha_max = 1e6, int threads = 1);

constexpr double kDefaultAlphaMax = 1e6;

}  // namespace fhp
