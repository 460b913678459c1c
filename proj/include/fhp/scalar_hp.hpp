// scalar_hp.hpp - the scalar Hodrick-Prescott filter and the moment
// estimators of the noise variance mu, signal variance tau, and their
// ratio alpha from one second-differenced series.
#pragma once

#include <Eigen/Dense>
#include <string_view>

namespace fhp {

enum class EstimateStatus { ok, mu_clamped, tau_degenerate };

std::string_view to_string(EstimateStatus status);

// Per-component estimate. status == ok exactly when both raw estimates are
// positive; then alpha_hat = mu_hat / tau_hat. Degenerate finite samples:
//   raw mu <= 0  -> mu_hat clamped to 0, alpha_hat = 0 (no detectable noise),
//   raw tau <= 0 -> alpha_hat = NaN; callers substitute a smoothing cap
//                   (no detectable signal curvature).
struct ScalarEstimate {
  double mu_hat = 0.0;
  double tau_hat = 0.0;
  double alpha_hat = 0.0;
  double s0 = 0.0;  // sum of Px(i)^2
  double s1 = 0.0;  // sum of Px(i) Px(i+1)
  Eigen::Index n = 0;
  EstimateStatus status = EstimateStatus::ok;
};

// sum_i (x_i - y_i)^2 + alpha * sum_m (Py)_m^2
double hp_objective(const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y, double alpha);

// argmin_y of hp_objective, i.e. (I + alpha P'P)^{-1} x
Eigen::VectorXd hp_filter(const Eigen::Ref<const Eigen::VectorXd>& x, double alpha);

// Raw noise-variance estimate from the differenced series px = Px:
//   mu = -S1 / (4 (n-3)).
// E[Px(i) Px(i+1)] = -4 mu under the model, so this is unbiased; it can
// still come out negative in finite samples (callers clamp).
double estimate_mu(const Eigen::Ref<const Eigen::VectorXd>& px);

// Raw signal-variance estimate: tau = S0/(n-2) + 3 S1/(2 (n-3)), which is
// S0/(n-2) - 6 mu and unbiased since E[Px(i)^2] = tau + 6 mu.
double estimate_tau(const Eigen::Ref<const Eigen::VectorXd>& px);

// Combined estimate with the degeneracy policy applied. When S1 != 0 and
// the estimate is non-degenerate, alpha_hat equals the closed form
//   -(1/4) (3/2 + (n-3) S0 / ((n-2) S1))^{-1}
// as an exact algebraic identity.
ScalarEstimate estimate_alpha(const Eigen::Ref<const Eigen::VectorXd>& px);

// Exact finite-sample variance of the mu estimator under the model:
//   (1/(16(n-3)^2)) [ (n-3)(tau^2 + 12 tau mu + 52 mu^2)
//                     + 2(n-4)(tau mu + 22 mu^2) + 2(n-5) mu^2 ].
double mu_estimator_variance(double mu, double tau, Eigen::Index n);

}  // namespace fhp
