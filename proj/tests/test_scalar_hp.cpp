#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fhp/diffop.hpp"
#include "fhp/model_sim.hpp"
#include "fhp/scalar_hp.hpp"

using namespace fhp;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// the closed form for alpha from the lag sums alone
double alpha_closed_form(const VectorXd& px) {
  const double n2 = static_cast<double>(px.size());
  const double n3 = static_cast<double>(px.size() - 1);
  const double s0 = px.squaredNorm();
  const double s1 = px.head(px.size() - 1).dot(px.tail(px.size() - 1));
  return -0.25 / (1.5 + n3 * s0 / (n2 * s1));
}

ModelParams scalar_model(Index n, double mu, double tau, std::uint64_t seed) {
  ModelParams p;
  p.n = n;
  p.J = 1;
  p.gamma = MatrixXd::Zero(2, 1);
  p.mu = VectorXd::Constant(1, mu);
  p.tau = VectorXd::Constant(1, tau);
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("hp_objective hand values") {
  const VectorXd affine = vec({1, 2, 3, 4});
  CHECK(hp_objective(affine, affine, 7.5) == 0.0);
  CHECK(hp_objective(vec({1, 0, 0}), vec({0, 0, 0}), 5.0) == 1.0);
  // residual 85, penalty 2*(1+4): total 95
  CHECK(hp_objective(vec({0, 0, 0, 0}), vec({1, 2, 4, 8}), 2.0) == 95.0);
  CHECK_THROWS_AS(hp_objective(vec({1, 2, 3}), vec({1, 2}), 1.0), std::invalid_argument);
}

TEST_CASE("hp_filter delegates to the smoother") {
  const VectorXd x = vec({2, -1, 0, 4, 1, 3, -2});
  CHECK((hp_filter(x, 0.0) - x).cwiseAbs().maxCoeff() == 0.0);

  const MatrixXd Z = kernel_Z(7);
  const VectorXd affine = Z * Eigen::Vector2d(1.0, 2.0);
  for (double alpha : {0.1, 4.0, 1e5})
    CHECK((hp_filter(affine, alpha) - affine).norm() <= 1e-10 * affine.norm());

  const MatrixXd P = dense_P(7);
  const MatrixXd A = MatrixXd::Identity(7, 7) + 4.0 * (P.transpose() * P);
  const VectorXd oracle = A.fullPivLu().solve(x);
  CHECK((hp_filter(x, 4.0) - oracle).norm() <= 1e-10 * oracle.norm());
}

TEST_CASE("hp_filter output minimizes the objective") {
  std::mt19937 gen(41);
  std::normal_distribution<double> dist;
  std::uniform_real_distribution<double> logalpha(-2.0, 3.0);
  const Index n = 20;
  for (int trial = 0; trial < 100; ++trial) {
    VectorXd x(n);
    for (Index i = 0; i < n; ++i) x[i] = dist(gen);
    const double alpha = std::pow(10.0, logalpha(gen));
    const VectorXd y = hp_filter(x, alpha);
    const double best = hp_objective(x, y, alpha);
    for (int pert = 0; pert < 20; ++pert) {
      VectorXd delta(n);
      for (Index i = 0; i < n; ++i) delta[i] = dist(gen);
      delta *= 1e-3 / delta.norm();
      CHECK(best <= hp_objective(x, y + delta, alpha));
    }
  }
}

TEST_CASE("estimate_mu hand values") {
  // constant differenced series: every lag-1 product is c^2
  const VectorXd constant = VectorXd::Constant(6, 3.0);
  CHECK(estimate_mu(constant) == doctest::Approx(-9.0 / 4.0).epsilon(1e-14));
  CHECK(estimate_mu(vec({2, 0, 1, -1})) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK_THROWS_AS(estimate_mu(vec({1, 2})), std::invalid_argument);
}

TEST_CASE("estimate_tau hand values") {
  CHECK(estimate_tau(vec({2, 0, 1, -1})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(estimate_tau(VectorXd::Zero(5)) == 0.0);
}

TEST_CASE("estimate_alpha hand value and status") {
  const ScalarEstimate est = estimate_alpha(vec({2, 0, 1, -1}));
  CHECK(est.status == EstimateStatus::ok);
  CHECK(est.alpha_hat == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(est.s0 == 6.0);
  CHECK(est.s1 == -1.0);
  CHECK(est.n == 6);
  // the closed form evaluates to the same number
  CHECK(est.alpha_hat == doctest::Approx(alpha_closed_form(vec({2, 0, 1, -1}))).epsilon(1e-14));
}

TEST_CASE("estimate_alpha degenerate branches") {
  // constant px: raw mu = -c^2/4 <= 0, so the noise estimate clamps
  const ScalarEstimate constant = estimate_alpha(VectorXd::Constant(8, 2.0));
  CHECK(constant.status == EstimateStatus::mu_clamped);
  CHECK(constant.mu_hat == 0.0);
  CHECK(constant.alpha_hat == 0.0);

  // all-zero px: S1 = 0 with tau = 0, clamps the same way
  const ScalarEstimate zero = estimate_alpha(VectorXd::Zero(8));
  CHECK(zero.status == EstimateStatus::mu_clamped);
  CHECK(zero.alpha_hat == 0.0);

  // alternating signs blow up the lag-1 sum: raw mu > 0 but raw tau < 0
  VectorXd alternating(8);
  for (Index i = 0; i < 8; ++i) alternating[i] = (i % 2 == 0) ? 1.0 : -1.0;
  const ScalarEstimate alt = estimate_alpha(alternating);
  CHECK(alt.mu_hat > 0.0);
  CHECK(alt.tau_hat < 0.0);
  CHECK(alt.status == EstimateStatus::tau_degenerate);
  CHECK(std::isnan(alt.alpha_hat));
}

TEST_CASE("mu/tau ratio equals the closed form exactly") {
  // Both routes must be evaluated from the same lag sums: S1 suffers
  // catastrophic cancellation whenever alpha is small, so sums accumulated
  // in a different order differ at a relative scale of eps/alpha.
  std::mt19937 gen(53);
  std::normal_distribution<double> dist;
  int checked = 0;
  for (int trial = 0; trial < 2000 && checked < 1000; ++trial) {
    VectorXd px(40);
    for (Index i = 0; i < 40; ++i) px[i] = dist(gen);
    const ScalarEstimate est = estimate_alpha(px);
    if (est.status != EstimateStatus::ok) continue;
    ++checked;
    const double n2 = static_cast<double>(px.size());
    const double n3 = static_cast<double>(px.size() - 1);
    const double closed = -0.25 / (1.5 + n3 * est.s0 / (n2 * est.s1));
    CHECK(std::abs(est.alpha_hat - closed) <= 1e-12 * std::abs(closed));
  }
  CHECK(checked == 1000);
}

TEST_CASE("estimators are unbiased under the model" * doctest::timeout(120)) {
  const int reps = 500;
  const Index n = 2000;
  const ModelParams p = scalar_model(n, 1.0, 1.0, 99);
  const ModelParams p4 = scalar_model(n, 1.0, 4.0, 101);
  double sum_mu = 0, sumsq_mu = 0, sum_tau = 0, sumsq_tau = 0;
  for (int r = 0; r < reps; ++r) {
    const VectorXd px = apply_P(simulate(p, static_cast<std::uint32_t>(r)).X.col(0));
    const double m = estimate_mu(px);
    sum_mu += m;
    sumsq_mu += m * m;
    const VectorXd px4 = apply_P(simulate(p4, static_cast<std::uint32_t>(r)).X.col(0));
    const double t = estimate_tau(px4);
    sum_tau += t;
    sumsq_tau += t * t;
  }
  const double mean_mu = sum_mu / reps;
  const double se_mu = std::sqrt((sumsq_mu / reps - mean_mu * mean_mu) / reps);
  CHECK(std::abs(mean_mu - 1.0) <= 3.0 * se_mu);

  const double mean_tau = sum_tau / reps;
  const double se_tau = std::sqrt((sumsq_tau / reps - mean_tau * mean_tau) / reps);
  CHECK(std::abs(mean_tau - 4.0) <= 3.0 * se_tau);
}

TEST_CASE("median alpha estimate lands near the ratio" * doctest::timeout(120)) {
  const int reps = 500;
  const ModelParams p = scalar_model(5000, 1.0, 4.0, 7);
  std::vector<double> alphas;
  for (int r = 0; r < reps; ++r) {
    const ScalarEstimate est =
        estimate_alpha(apply_P(simulate(p, static_cast<std::uint32_t>(r)).X.col(0)));
    REQUIRE(est.status == EstimateStatus::ok);
    alphas.push_back(est.alpha_hat);
  }
  std::nth_element(alphas.begin(), alphas.begin() + reps / 2, alphas.end());
  CHECK(std::abs(alphas[reps / 2] - 0.25) <= 0.1 * 0.25);
}

TEST_CASE("differenced-series moments match the model") {
  // E[Px(i)^2] = tau + 6 mu and E[Px(i) Px(i+1)] = -4 mu
  const double mu = 0.5, tau = 2.0;
  const Index n = 400;
  const ModelParams p = scalar_model(n, mu, tau, 11);
  const int reps = 400;
  double sum0 = 0, sumsq0 = 0, sum1 = 0, sumsq1 = 0;
  for (int r = 0; r < reps; ++r) {
    const VectorXd px = apply_P(simulate(p, static_cast<std::uint32_t>(r)).X.col(0));
    const double v0 = px.squaredNorm() / static_cast<double>(px.size());
    const double v1 = px.head(px.size() - 1).dot(px.tail(px.size() - 1)) /
                      static_cast<double>(px.size() - 1);
    sum0 += v0;
    sumsq0 += v0 * v0;
    sum1 += v1;
    sumsq1 += v1 * v1;
  }
  const double mean0 = sum0 / reps, mean1 = sum1 / reps;
  const double se0 = std::sqrt((sumsq0 / reps - mean0 * mean0) / reps);
  const double se1 = std::sqrt((sumsq1 / reps - mean1 * mean1) / reps);
  CHECK(std::abs(mean0 - (tau + 6.0 * mu)) <= 3.0 * se0);
  CHECK(std::abs(mean1 - (-4.0 * mu)) <= 3.0 * se1);
}

TEST_CASE("mu_estimator_variance closed form") {
  // direct substitution at mu = tau = 1, n = 103:
  // (100*65 + 2*99*23 + 2*98) / 160000
  CHECK(mu_estimator_variance(1.0, 1.0, 103) == doctest::Approx(0.0703125).epsilon(1e-14));
  CHECK_THROWS_AS(mu_estimator_variance(0.0, 1.0, 100), std::domain_error);
  CHECK_THROWS_AS(mu_estimator_variance(1.0, 1.0, 5), std::invalid_argument);
  // O(1/n) decay
  const double v1 = mu_estimator_variance(2.0, 3.0, 1000);
  const double v2 = mu_estimator_variance(2.0, 3.0, 10000);
  CHECK(v2 < v1);
  CHECK(v2 * 10000.0 == doctest::Approx(v1 * 1000.0).epsilon(0.01));
}

TEST_CASE("mu_estimator_variance matches Monte Carlo" * doctest::timeout(120)) {
  const int reps = 4000;
  const ModelParams p = scalar_model(103, 1.0, 1.0, 4242);
  double sum = 0, sumsq = 0;
  for (int r = 0; r < reps; ++r) {
    const double m = estimate_mu(apply_P(simulate(p, static_cast<std::uint32_t>(r)).X.col(0)));
    sum += m;
    sumsq += m * m;
  }
  const double mean = sum / reps;
  const double var = (sumsq - reps * mean * mean) / (reps - 1);
  CHECK(var == doctest::Approx(0.0703125).epsilon(0.15));
}
