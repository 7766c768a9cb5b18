#pragma once

// JSON and CSV renderings of results.

#include "honeycomb/dirac_point.hpp"
#include "honeycomb/harness.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace honeycomb {

using Json = nlohmann::ordered_json;

Json cplx_json(cplx z);
cplx json_cplx(const Json& j);

/// mu_*, b1, lambda_sharp estimates, residuals, cone table and the gauge-fixed
/// Phi coefficients (so the record can be read back).
Json dirac_point_json(const DiracPointData& dp, const std::optional<ConeFit>& cone = std::nullopt);
DiracPointData dirac_point_from_json(const Json& j);

Json simulation_report_json(const SimulationReport& rep);
Json ballistic_json(const BallisticReport& rep);
Json effective_mass_json(const EffectiveMassReport& rep);
Json lipschitz_json(const LipschitzReport& rep);

/// Columns delta, t_final, sup_rel_err (plus t_theory, capped, sup_rel_grad).
void write_scaling_csv(const std::string& path, const SimulationReport& rep);
void write_json(const std::string& path, const Json& j);

}  // namespace honeycomb
