#include "hestonmle/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace hestonmle {

using nlohmann::json;

namespace {

json unavailable(const std::string& reason) {
    return json{{"available", false}, {"reason", reason}};
}

// NaN and infinities have no JSON encoding; they become null.
json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

json summary_to_json(const EstimatorSummary& s) {
    json q = json::object();
    for (std::size_t i = 0; i < kQuantileLevels.size(); ++i) {
        char key[16];
        std::snprintf(key, sizeof key, "q%02d", static_cast<int>(std::lround(kQuantileLevels[i] * 100)));
        q[key] = number(s.quantiles[i]);
    }
    json j{{"count", s.count},
           {"sigma", number(s.sigma)},
           {"sigma_se", number(s.sigma_se)},
           {"bias", number(s.bias)},
           {"quantiles", q}};
    if (s.normality) {
        const auto& n = *s.normality;
        j["normality"] = {{"n", n.n},
                          {"skewness", number(n.skewness)},
                          {"excess_kurtosis", number(n.excess_kurtosis)},
                          {"jarque_bera", number(n.jarque_bera)},
                          {"jb_pvalue", number(n.jb_pvalue)},
                          {"anderson_darling", number(n.anderson_darling)},
                          {"ad_pvalue", number(n.ad_pvalue)},
                          {"gaussian_compatible", n.gaussian_compatible}};
    }
    return j;
}

}  // namespace

void to_json(json& j, const VolParams& p) {
    j = json{{"kappa", p.kappa}, {"theta", p.theta}, {"gamma2", p.gamma2}};
}

void from_json(const json& j, VolParams& p) {
    j.at("kappa").get_to(p.kappa);
    j.at("theta").get_to(p.theta);
    j.at("gamma2").get_to(p.gamma2);
}

void to_json(json& j, const HestonParams& p) {
    to_json(j, p.vol);
    j["mu"] = p.mu;
    j["rho"] = p.rho;
}

void from_json(const json& j, HestonParams& p) {
    from_json(j, p.vol);
    j.at("mu").get_to(p.mu);
    j.at("rho").get_to(p.rho);
}

void to_json(json& j, const CanonicalParams& p) {
    j = json{{"omega", p.omega}, {"zeta", p.zeta}};
}

void from_json(const json& j, CanonicalParams& p) {
    j.at("omega").get_to(p.omega);
    j.at("zeta").get_to(p.zeta);
}

void to_json(json& j, const ConeParams& p) {
    j = json{{"u", p.u}, {"v", p.v}, {"w", p.w}};
}

void from_json(const json& j, ConeParams& p) {
    j.at("u").get_to(p.u);
    j.at("v").get_to(p.v);
    j.at("w").get_to(p.w);
}

void to_json(json& j, const SamplingGrid& g) {
    j = json{{"T", g.T}, {"N", g.N}};
}

void from_json(const json& j, SamplingGrid& g) {
    j.at("T").get_to(g.T);
    j.at("N").get_to(g.N);
}

void to_json(json& j, const SufficientStats& s) {
    j = json{{"a", s.a}, {"b", s.b}, {"c", s.c}, {"d", s.d}, {"f", s.f}, {"N", s.n}, {"T", s.T}};
}

json report_to_json(const EstimateReport& r) {
    json j;
    j["grid"] = r.grid;
    j["stats"] = r.stats;
    j["generic"] = r.genericity.generic;
    if (!r.genericity.generic) j["genericity_reason"] = r.genericity.reason;
    j["annualization"] = r.annualization;

    if (r.boundary) {
        json b{{"reason", r.boundary->reason}};
        b["stationary"] = r.boundary->stationary ? json(*r.boundary->stationary) : json(nullptr);
        b["projected"] = r.boundary->projected ? json(*r.boundary->projected) : json(nullptr);
        j["boundary"] = b;
    }

    if (r.raw) {
        json raw = *r.raw;
        raw["available"] = true;
        raw["projected"] = !r.genericity.generic;
        j["raw"] = raw;
    } else {
        j["raw"] = unavailable(r.raw_reason);
    }

    if (r.consistent) {
        j["consistent"] = {{"available", true},
                           {"kappa", r.consistent->kappa},
                           {"theta", r.consistent->theta},
                           {"gamma2", r.consistent->gamma2}};
    } else {
        j["consistent"] = unavailable(r.consistent_reason);
    }

    if (r.mu_hat) {
        j["drift"] = {{"available", true}, {"mu", *r.mu_hat}};
    } else {
        j["drift"] = unavailable(r.mu_reason);
    }

    if (r.rho_hat) {
        j["correlation"] = {{"available", true}, {"rho", *r.rho_hat}, {"near_unit", r.rho_near_unit}};
    } else {
        j["correlation"] = unavailable(r.rho_reason);
    }

    if (r.canonical_hat) {
        json c = *r.canonical_hat;
        c["available"] = true;
        c["regime"] = r.regime ? to_string(*r.regime) : "unknown";
        j["canonical"] = c;
    } else {
        j["canonical"] = unavailable(r.consistent_reason);
    }

    if (r.canonical_raw) {
        json c = *r.canonical_raw;
        c["available"] = true;
        j["canonical_raw"] = c;
    } else {
        j["canonical_raw"] = unavailable(r.raw ? "raw estimates outside the Feller domain" : r.raw_reason);
    }
    return j;
}

json accuracy_to_json(const AccuracyResult& result, const std::vector<SqrtNFit>& fits) {
    const auto& spec = result.spec;
    json j;
    j["spec"] = {{"omega", spec.canonical.omega},
                 {"zeta", spec.canonical.zeta},
                 {"Tbar", spec.sampling_interval()},
                 {"N", spec.N_values},
                 {"trajectories", spec.trajectories},
                 {"scheme", spec.scheme == SimulationScheme::Exact ? "exact" : "euler"},
                 {"seed", spec.seed}};
    if (spec.scheme == SimulationScheme::Euler) j["spec"]["euler_substeps"] = spec.euler_substeps;
    if (spec.physical) {
        json phys = spec.physical->truth;
        phys["T"] = spec.physical->T;
        j["spec"]["physical"] = phys;
    }
    j["warnings"] = result.warnings;

    json cells = json::array();
    for (const auto& cell : result.cells) {
        json c{{"N", cell.N},
               {"generic", cell.generic},
               {"boundary", cell.boundary},
               {"dismissed", cell.dismissed},
               {"generic_fraction", number(cell.generic_fraction)},
               {"dismissed_fraction", number(cell.dismissed_fraction)}};
        json est = json::object();
        for (Estimator e : kAllEstimators) est[to_string(e)] = summary_to_json(cell[e]);
        c["estimators"] = est;
        cells.push_back(c);
    }
    j["cells"] = cells;

    if (!fits.empty()) {
        json f = json::object();
        for (const auto& fit : fits) {
            f[to_string(fit.estimator)] = {{"C", number(fit.C)},
                                           {"residual", number(fit.residual)},
                                           {"points", fit.points}};
        }
        j["sqrtn_constants"] = f;
    }
    return j;
}

}  // namespace hestonmle
