#include "fhp/scalar_hp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fhp/diffop.hpp"

namespace fhp {

using Eigen::Index;
using Eigen::VectorXd;

namespace {

struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// S0 = sum px(i)^2, S1 = sum px(i) px(i+1), compensated accumulation
void lag_sums(const Eigen::Ref<const VectorXd>& px, double& s0, double& s1) {
  KahanSum a0, a1;
  const Index k = px.size();
  for (Index i = 0; i < k; ++i) {
    a0.add(px[i] * px[i]);
    if (i + 1 < k) a1.add(px[i] * px[i + 1]);
  }
  s0 = a0.sum;
  s1 = a1.sum;
}

void check_length(const Eigen::Ref<const VectorXd>& px, const char* who) {
  // n >= 5 keeps at least two lag-1 products and the (n-3) divisors sane
  if (px.size() < 3)
    throw std::invalid_argument(std::string(who) + ": differenced series must have length >= 3");
  if (!px.allFinite())
    throw std::invalid_argument(std::string(who) + ": non-finite values");
}

}  // namespace

std::string_view to_string(EstimateStatus status) {
  switch (status) {
    case EstimateStatus::ok: return "ok";
    case EstimateStatus::mu_clamped: return "mu_clamped";
    case EstimateStatus::tau_degenerate: return "tau_degenerate";
  }
  return "unknown";
}

double hp_objective(const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y, double alpha) {
  if (x.size() != y.size()) throw std::invalid_argument("hp_objective: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("hp_objective: series length must be >= 3");
  if (alpha < 0.0) throw std::domain_error("hp_objective: alpha must be >= 0");
  return (x - y).squaredNorm() + alpha * apply_P(y).squaredNorm();
}

Eigen::VectorXd hp_filter(const Eigen::Ref<const Eigen::VectorXd>& x, double alpha) {
  return solve_smoother(x, alpha);
}

double estimate_mu(const Eigen::Ref<const Eigen::VectorXd>& px) {
  check_length(px, "estimate_mu");
  double s0, s1;
  lag_sums(px, s0, s1);
  const double n3 = static_cast<double>(px.size() - 1);  // n - 3
  return -s1 / (4.0 * n3);
}

double estimate_tau(const Eigen::Ref<const Eigen::VectorXd>& px) {
  check_length(px, "estimate_tau");
  double s0, s1;
  lag_sums(px, s0, s1);
  const double n2 = static_cast<double>(px.size());      // n - 2
  const double n3 = static_cast<double>(px.size() - 1);  // n - 3
  return s0 / n2 + 1.5 * s1 / n3;
}

ScalarEstimate estimate_alpha(const Eigen::Ref<const Eigen::VectorXd>& px) {
  check_length(px, "estimate_alpha");
  ScalarEstimate est;
  est.n = px.size() + 2;
  lag_sums(px, est.s0, est.s1);
  const double n2 = static_cast<double>(px.size());
  const double n3 = static_cast<double>(px.size() - 1);
  const double raw_mu = -est.s1 / (4.0 * n3);
  const double raw_tau = est.s0 / n2 + 1.5 * est.s1 / n3;
  est.mu_hat = raw_mu;
  est.tau_hat = raw_tau;
  if (raw_mu <= 0.0) {
    est.mu_hat = 0.0;
    est.alpha_hat = 0.0;
    est.status = EstimateStatus::mu_clamped;
  } else if (raw_tau <= 0.0) {
    est.alpha_hat = std::numeric_limits<double>::quiet_NaN();
    est.status = EstimateStatus::tau_degenerate;
  } else {
    est.alpha_hat = raw_mu / raw_tau;
    est.status = EstimateStatus::ok;
  }
  return est;
}

double mu_estimator_variance(double mu, double tau, Eigen::Index n) {
  if (!(mu > 0.0) || !(tau > 0.0))
    throw std::domain_error("mu_estimator_variance: variances must be positive");
  if (n < 6) throw std::invalid_argument("mu_estimator_variance: n must be >= 6");
  const double n3 = static_cast<double>(n - 3);
  const double n4 = static_cast<double>(n - 4);
  const double n5 = static_cast<double>(n - 5);
  const double term = n3 * (tau * tau + 12.0 * tau * mu + 52.0 * mu * mu) +
                      2.0 * n4 * (tau * mu + 22.0 * mu * mu) + 2.0 * n5 * mu * mu;
  return term / (16.0 * n3 * n3);
}

}  // namespace fhp
