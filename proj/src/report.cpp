#include "fhp/report.hpp"

#include <cmath>

namespace fhp {

using nlohmann::json;

nlohmann::json estimation_report(const BEstimate& estimate, Eigen::Index n,
                                 const std::string& basis_kind) {
  json components = json::array();
  int n_ok = 0, n_mu_clamped = 0, n_tau_degenerate = 0;
  double trace_mu = 0.0, trace_tau = 0.0;
  for (size_t j = 0; j < estimate.components.size(); ++j) {
    const ScalarEstimate& c = estimate.components[j];
    trace_mu += c.mu_hat;
    trace_tau += c.tau_hat;
    json entry{{"j", j + 1},
               {"mu_hat", c.mu_hat},
               {"tau_hat", c.tau_hat},
               {"status", std::string(to_string(c.status))},
               {"s0", c.s0},
               {"s1", c.s1}};
    entry["alpha_hat"] = std::isfinite(c.alpha_hat) ? json(c.alpha_hat) : json(nullptr);
    components.push_back(std::move(entry));
    switch (c.status) {
      case EstimateStatus::ok: ++n_ok; break;
      case EstimateStatus::mu_clamped: ++n_mu_clamped; break;
      case EstimateStatus::tau_degenerate: ++n_tau_degenerate; break;
    }
  }
  return json{{"metadata",
               {{"n", n}, {"J", estimate.components.size()}, {"basis", basis_kind}}},
              {"components", components},
              {"summary",
               {{"ok", n_ok},
                {"mu_clamped", n_mu_clamped},
                {"tau_degenerate", n_tau_degenerate},
                {"alpha_max", estimate.alpha_max},
                {"partial_trace_mu", trace_mu},
                {"partial_trace_tau", trace_tau}}}};
}

nlohmann::json optimality_report(const OptimalityReport& report) {
  json components = json::array();
  for (const auto& c : report.components) {
    components.push_back(json{{"j", c.j},
                              {"alpha_star", c.alpha_star},
                              {"argmin_alpha", c.argmin_alpha},
                              {"argmin_index", c.argmin_index},
                              {"star_index", c.star_index},
                              {"gap_steps", c.gap_steps}});
  }
  return json{{"check", "optimality"},
              {"grid_size", report.alphas.size()},
              {"alpha_min", report.alphas.size() ? report.alphas[0] : 0.0},
              {"alpha_max", report.alphas.size() ? report.alphas[report.alphas.size() - 1] : 0.0},
              {"components", components},
              {"pass", report.pass}};
}

nlohmann::json consistency_report(const ConsistencyReport& report) {
  json by_n = json::array();
  for (size_t i = 0; i < report.cells.size(); ++i) {
    json comps = json::array();
    for (size_t j = 0; j < report.cells[i].size(); ++j) {
      const ConsistencyCell& c = report.cells[i][j];
      comps.push_back(json{{"j", j + 1},
                           {"mean_mu", c.mean_mu},
                           {"bias_mu", c.bias_mu},
                           {"rmse_mu", c.rmse_mu},
                           {"mean_tau", c.mean_tau},
                           {"bias_tau", c.bias_tau},
                           {"rmse_tau", c.rmse_tau},
                           {"median_abs_alpha_err", c.median_abs_alpha_err},
                           {"var_mu_empirical", c.var_mu_empirical},
                           {"var_mu_formula", c.var_mu_formula},
                           {"degenerate_fraction", c.degenerate_fraction}});
    }
    by_n.push_back(json{{"n", report.n_list[i]},
                        {"components", comps},
                        {"median_max_alpha_err", report.median_max_alpha_err[i]}});
  }
  return json{{"check", "consistency"},
              {"reps", report.reps},
              {"by_n", by_n},
              {"rmse_nonincreasing", report.rmse_nonincreasing},
              {"pass", report.pass}};
}

}  // namespace fhp
