// report.hpp - JSON documents for estimation results and verification runs.
#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "fhp/functional_hp.hpp"
#include "fhp/model_sim.hpp"

namespace fhp {

// Per-component {j, mu_hat, tau_hat, alpha_hat, status, s0, s1} plus
// metadata {n, J, basis kind} and summary counts. alpha_hat is null for
// degenerate components.
nlohmann::json estimation_report(const BEstimate& estimate, Eigen::Index n,
                                 const std::string& basis_kind);

nlohmann::json optimality_report(const OptimalityReport& report);

nlohmann::json consistency_report(const ConsistencyReport& report);

}  // namespace fhp
