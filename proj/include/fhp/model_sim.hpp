// model_sim.hpp - ground-truth simulator for the mixed model, exact
// per-component covariances, conditional expectation, risk curves, and the
// Monte Carlo experiment drivers.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fhp/basis.hpp"

namespace fhp {

// Ground-truth simulation parameters. Component j has deterministic trend
// Y0^j = Z gamma(:,j), innovation variance tau[j], and noise variance mu[j].
struct ModelParams {
  Eigen::Index n = 0;       // series length (number of curves)
  int J = 0;                // components
  Eigen::MatrixXd gamma;    // 2 x J kernel coordinates
  Eigen::VectorXd mu;       // noise eigenvalues, > 0
  Eigen::VectorXd tau;      // signal eigenvalues, > 0
  std::uint64_t seed = 0;

  void validate() const;  // throws std::domain_error on violations
};

struct SimulationDraw {
  CoefficientMatrix X;  // n x J observed
  CoefficientMatrix Y;  // n x J latent trend
  CoefficientMatrix U;  // n x J observation noise
  CoefficientMatrix V;  // (n-2) x J innovations, V = P Y exactly
};

// One draw of the model. Component j uses normal streams keyed by
// (seed, j, rep), so draws are reproducible for any execution order and
// reps form independent streams.
SimulationDraw simulate(const ModelParams& params, std::uint32_t rep = 0);

// Exact per-component covariance matrices (dense; verification scale).
// M = P'(PP')^{-2} P, Sigma_X = mu I + tau M, Sigma_Y = Sigma_XY = tau M.
struct ComponentCovariances {
  Eigen::MatrixXd sigma_X;
  Eigen::MatrixXd sigma_Y;
  Eigen::MatrixXd sigma_XY;
  Eigen::MatrixXd M;
};
ComponentCovariances component_covariances(double mu_j, double tau_j, Eigen::Index n);

// E[ybar | xbar] = y0 + tau M (mu I + tau M)^{-1} (xbar - y0)
Eigen::VectorXd conditional_expectation(const Eigen::Ref<const Eigen::VectorXd>& xbar,
                                        double mu_j, double tau_j,
                                        const Eigen::Ref<const Eigen::VectorXd>& y0);

Eigen::VectorXd log_spaced(double lo, double hi, int count);

// Exact mean-square risk of the smoothed signal against the conditional
// expectation, per grid value of alpha:
//   J_j(alpha) = trace((L - F_alpha) Sigma_X (L - F_alpha)')
// with F_alpha = (I + alpha P'P)^{-1}. The deterministic trend drops out
// because F_alpha fixes ker P.
Eigen::VectorXd risk_curve(double mu_j, double tau_j, Eigen::Index n,
                           const Eigen::Ref<const Eigen::VectorXd>& alphas);

struct OptimalityComponent {
  int j = 0;                // 1-based component index
  double alpha_star = 0.0;  // mu_j / tau_j
  double argmin_alpha = 0.0;
  int argmin_index = 0;
  int star_index = 0;  // grid point nearest alpha_star in log space
  int gap_steps = 0;
};

struct OptimalityReport {
  Eigen::VectorXd alphas;
  Eigen::MatrixXd curves;  // grid x J risk values
  std::vector<OptimalityComponent> components;
  bool pass = false;  // every gap <= 1 grid step
};

OptimalityReport verify_optimality(const ModelParams& params,
                                   const Eigen::Ref<const Eigen::VectorXd>& alphas);

// Monte Carlo summary for one (n, component) pair. mu/tau statistics are
// for the raw (unclamped) estimators; alpha uses the policy values.
struct ConsistencyCell {
  double mean_mu = 0.0, bias_mu = 0.0, rmse_mu = 0.0;
  double mean_tau = 0.0, bias_tau = 0.0, rmse_tau = 0.0;
  double median_abs_alpha_err = 0.0;
  double var_mu_empirical = 0.0;
  double var_mu_formula = 0.0;
  double degenerate_fraction = 0.0;
};

struct ConsistencyReport {
  std::vector<Eigen::Index> n_list;
  int reps = 0;
  std::vector<std::vector<ConsistencyCell>> cells;   // [n][j]
  std::vector<double> median_max_alpha_err;          // per n, max over j
  bool rmse_nonincreasing = false;                   // mu and tau, per component
  bool pass = false;
};

// reps independent simulations per n (reps >= 100, n_list increasing);
// reps are independent work units and may run on several threads with a
// deterministic merge.
ConsistencyReport mc_consistency(const ModelParams& params,
                                 const std::vector<Eigen::Index>& n_list, int reps,
                                 int threads = 1);

}  // namespace fhp
