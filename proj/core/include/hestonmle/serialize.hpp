#pragma once

#include <nlohmann/json.hpp>

#include "hestonmle/estimate.hpp"
#include "hestonmle/montecarlo.hpp"
#include "hestonmle/params.hpp"

namespace hestonmle {

// Parameter types round-trip through JSON with the field names
// kappa, theta, gamma2, mu, rho, omega, zeta, u, v, w, T, N.
void to_json(nlohmann::json& j, const VolParams& p);
void from_json(const nlohmann::json& j, VolParams& p);
void to_json(nlohmann::json& j, const HestonParams& p);
void from_json(const nlohmann::json& j, HestonParams& p);
void to_json(nlohmann::json& j, const CanonicalParams& p);
void from_json(const nlohmann::json& j, CanonicalParams& p);
void to_json(nlohmann::json& j, const ConeParams& p);
void from_json(const nlohmann::json& j, ConeParams& p);
void to_json(nlohmann::json& j, const SamplingGrid& g);
void from_json(const nlohmann::json& j, SamplingGrid& g);

void to_json(nlohmann::json& j, const SufficientStats& s);

/// Every estimator group is either its values plus "available": true, or
/// {"available": false, "reason": ...}.
nlohmann::json report_to_json(const EstimateReport& report);

nlohmann::json accuracy_to_json(const AccuracyResult& result,
                                const std::vector<SqrtNFit>& fits = {});

}  // namespace hestonmle
