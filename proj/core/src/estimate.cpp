#include "hestonmle/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hestonmle/errors.hpp"

namespace hestonmle {

double neg_log_likelihood(const ConeParams& p, const SufficientStats& s) {
    if (!in_cone(p)) throw DomainError("likelihood evaluated outside the cone u > w > 0, v > 0");
    const double quad = s.a + s.b * p.u + s.c * p.v + 0.5 * s.d * p.u * p.u - 2.0 * p.u * p.v +
                        0.5 * s.f * p.v * p.v;
    return std::log(2.0 * p.w) + quad / (2.0 * p.w);
}

ConeParams stationary_point(const SufficientStats& s) {
    const double disc = s.discriminant();
    if (disc == 0.0) throw DomainError("stationary point undefined for d f - 4 = 0");
    ConeParams p;
    p.u = -(s.b * s.f + 2.0 * s.c) / disc;
    p.v = -(2.0 * s.b + s.c * s.d) / disc;
    p.w = s.a / 2.0 - (s.b * s.b * s.f + 4.0 * s.b * s.c + s.c * s.c * s.d) / (4.0 * disc);
    return p;
}

ConeParams project_into_cone(const ConeParams& p, double scale) {
    const double floor = kBoundaryProjectionEps * scale;
    ConeParams q;
    q.v = std::max(p.v, floor);
    q.w = std::max(p.w, floor);
    q.u = std::max(p.u, q.w * (1.0 + kBoundaryProjectionEps));
    return q;
}

MleOutcome mle_uvw(const SufficientStats& s) {
    const auto verdict = check_genericity(s);
    if (verdict.generic) return stationary_point(s);

    BoundaryOutcome out;
    out.reason = verdict.reason;
    if (s.discriminant() > kDegenerateDiscriminant) {
        const ConeParams p = stationary_point(s);
        const double scale = std::max({std::abs(p.u), std::abs(p.v), std::abs(p.w), s.a / 2.0,
                                       std::numeric_limits<double>::min()});
        out.stationary = p;
        out.projected = project_into_cone(p, scale);
    }
    return out;
}

RawEstimates mle_volatility_params(const SufficientStats& s) {
    const auto verdict = check_genericity(s);
    if (!verdict.generic) {
        throw EstimatorUnavailable(EstimatorUnavailable::Reason::BoundaryCase,
                                   "boundary case: " + verdict.reason);
    }
    const double disc = s.discriminant();
    const double lead = 2.0 * s.b + s.c * s.d;
    RawEstimates r;
    r.kappa = -lead / (s.T * disc);
    r.theta = (s.b * s.f + 2.0 * s.c) / lead;
    r.gamma2 = s.a / s.T - (s.b * s.b * s.f + 4.0 * s.b * s.c + s.c * s.c * s.d) / (2.0 * s.T * disc);
    return r;
}

RawEstimates estimates_from_cone(const ConeParams& c, double T) {
    return {c.v / T, c.u / c.v, 2.0 * c.w / T};
}

RawEstimates asymptotic_limits(const VolParams& p, double T) {
    const auto canon = to_canonical(p, T);
    const double omega = canon.params.omega;
    const double zeta = canon.params.zeta;
    const double one_minus = -std::expm1(-canon.Tbar);
    RawEstimates lim;
    lim.kappa = one_minus / T;
    lim.theta = p.theta;
    lim.gamma2 = one_minus * p.gamma2 / (p.kappa * T) *
                 (omega + one_minus * zeta / (2.0 * zeta - 1.0));
    return lim;
}

bool asymptotic_genericity(const CanonicalParams& c) {
    require_valid(c);
    if (c.zeta >= 0.75) return true;
    // omega > zeta (3 - 4 zeta) / (1 - zeta), with 1 - zeta > 0 here.
    return c.omega * (1.0 - c.zeta) > c.zeta * (3.0 - 4.0 * c.zeta);
}

double consistent_kappa(double kappa_hat, double T) {
    const double x = T * kappa_hat;
    if (!(x > 0.0 && x < 1.0)) {
        throw EstimatorUnavailable(EstimatorUnavailable::Reason::NotInvertible,
                                   "T * kappa_hat outside (0, 1)");
    }
    return -std::log1p(-x) / T;
}

QuadraticRoots bias_polynomial_roots(const RawEstimates& raw, double T) {
    const double tk = T * raw.kappa;
    if (!(tk > 0.0 && tk < 1.0)) {
        throw EstimatorUnavailable(EstimatorUnavailable::Reason::NotInvertible,
                                   "T * kappa_hat outside (0, 1)");
    }
    const double qa = 1.0 - tk;
    const double qb = raw.theta * (tk - 2.0) - raw.gamma2 / raw.kappa;
    const double qc = 2.0 * raw.gamma2 * raw.theta / raw.kappa;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (!(disc >= 0.0)) {
        throw EstimatorUnavailable(EstimatorUnavailable::Reason::RootsNotSeparated,
                                   "bias polynomial has complex roots");
    }
    const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    if (q == 0.0) {
        throw EstimatorUnavailable(EstimatorUnavailable::Reason::RootsNotSeparated,
                                   "bias polynomial is degenerate");
    }
    const double r1 = q / qa;
    const double r2 = qc / q;
    QuadraticRoots roots{std::min(r1, r2), std::max(r1, r2)};
    const double bound = 2.0 * raw.theta;
    if (!(roots.smaller > 0.0 && roots.smaller < bound && bound < roots.larger)) {
        throw EstimatorUnavailable(EstimatorUnavailable::Reason::RootsNotSeparated,
                                   "bias polynomial roots do not bracket 2 theta_hat");
    }
    return roots;
}

double consistent_gamma2(const RawEstimates& raw, double T) {
    const double K = consistent_kappa(raw.kappa, T);
    return bias_polynomial_roots(raw, T).smaller * K;
}

double zeta_hat(double K, double theta_hat, double G) {
    if (!(G > 0.0)) throw DomainError("zeta_hat requires G > 0");
    return K * theta_hat / G;
}

Regime regime_of(double zeta) noexcept { return zeta > 1.0 ? Regime::Gaussian : Regime::HeavyTail; }

const char* to_string(Regime r) noexcept {
    return r == Regime::Gaussian ? "Gaussian" : "HeavyTail";
}

namespace {

void require_positive_joint(const JointSeries& series) {
    const auto& v = series.vol.values;
    const auto& u = series.prices;
    if (v.size() < 3 || u.size() != v.size()) {
        throw DomainError("joint series needs matching price/variance lengths with N >= 2");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw NonPositiveValue("non-positive variance", i);
        if (!(u[i] > 0.0)) throw NonPositiveValue("non-positive price", i);
    }
}

}  // namespace

double drift_mu(const JointSeries& series) {
    require_positive_joint(series);
    const auto& v = series.vol.values;
    const auto& u = series.prices;
    const std::size_t N = v.size() - 1;
    CompensatedSum num, den;
    for (std::size_t n = 0; n < N; ++n) {
        const double w = 1.0 / v[n];
        num += w * (u[n + 1] - u[n]) / u[n];
        den += w;
    }
    return num.value() / (series.vol.grid.T * den.value());
}

CorrelationEstimate residuals_and_rho(const JointSeries& series, double mu_hat,
                                      const ConeParams& cone) {
    if (!in_cone(cone)) throw DomainError("correlation residuals need cone parameters in the cone");
    require_positive_joint(series);
    const auto& v = series.vol.values;
    const auto& u = series.prices;
    const double T = series.vol.grid.T;
    const std::size_t N = v.size() - 1;
    const double sqrtT = std::sqrt(T);
    const double vol_scale = std::sqrt(2.0 * cone.w);

    CorrelationEstimate out;
    out.residuals.dZ.resize(N);
    out.residuals.dB.resize(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double sv = std::sqrt(v[n]);
        out.residuals.dZ[n] = (u[n + 1] - u[n] - T * mu_hat * u[n]) / (sqrtT * sv * u[n]);
        out.residuals.dB[n] = (v[n + 1] - v[n] - (cone.u - cone.v * v[n])) / (vol_scale * sv);
    }

    CompensatedSum mz, mb;
    for (std::size_t n = 0; n < N; ++n) {
        mz += out.residuals.dZ[n];
        mb += out.residuals.dB[n];
    }
    const double zbar = mz.value() / static_cast<double>(N);
    const double bbar = mb.value() / static_cast<double>(N);
    CompensatedSum szz, sbb, szb;
    for (std::size_t n = 0; n < N; ++n) {
        const double z = out.residuals.dZ[n] - zbar;
        const double b = out.residuals.dB[n] - bbar;
        szz += z * z;
        sbb += b * b;
        szb += z * b;
    }
    if (!(szz.value() > 0.0) || !(sbb.value() > 0.0)) {
        throw DomainError("correlation undefined: residual sequence has zero variance");
    }
    out.rho = std::clamp(szb.value() / std::sqrt(szz.value() * sbb.value()), -1.0, 1.0);
    out.near_unit = std::abs(out.rho) >= 1.0 - 1e-9;
    return out;
}

VolatilityEstimates estimate_volatility(const SufficientStats& s) {
    VolatilityEstimates out;
    out.genericity = check_genericity(s);
    if (!out.genericity.generic) {
        out.consistent_reason = "boundary case";
        return out;
    }
    out.raw = mle_volatility_params(s);
    try {
        out.K = consistent_kappa(out.raw->kappa, s.T);
        out.G = bias_polynomial_roots(*out.raw, s.T).smaller * *out.K;
    } catch (const EstimatorUnavailable& e) {
        out.consistent_reason = e.what();
    }
    return out;
}

EstimateReport estimate(const VolSeries& series) {
    EstimateReport rep;
    rep.grid = series.grid;
    rep.stats = sufficient_stats(series);
    rep.genericity = check_genericity(rep.stats);
    const double T = rep.grid.T;

    if (rep.genericity.generic) {
        rep.raw = mle_volatility_params(rep.stats);
    } else {
        auto outcome = std::get<BoundaryOutcome>(mle_uvw(rep.stats));
        if (outcome.projected) {
            rep.raw = estimates_from_cone(*outcome.projected, T);
        } else {
            rep.raw_reason = outcome.reason;
        }
        rep.boundary = std::move(outcome);
    }

    if (rep.raw && validate_domain(*rep.raw)) {
        rep.canonical_raw = to_canonical(*rep.raw, T).params;
    }

    if (!rep.genericity.generic) {
        rep.consistent_reason = "boundary case: " + rep.genericity.reason;
    } else {
        try {
            const double K = consistent_kappa(rep.raw->kappa, T);
            const double G = bias_polynomial_roots(*rep.raw, T).smaller * K;
            rep.consistent = ConsistentEstimates{K, rep.raw->theta, G};
            rep.canonical_hat = CanonicalParams{std::exp(-K * T), zeta_hat(K, rep.raw->theta, G)};
        } catch (const EstimatorUnavailable& e) {
            rep.consistent_reason = e.what();
        }
    }

    rep.mu_reason = "no price series";
    rep.rho_reason = "no price series";

    if (rep.canonical_hat) {
        rep.regime = regime_of(rep.canonical_hat->zeta);
    } else if (rep.canonical_raw) {
        rep.regime = regime_of(rep.canonical_raw->zeta);
    }
    return rep;
}

EstimateReport estimate(const JointSeries& series) {
    EstimateReport rep = estimate(series.vol);
    rep.mu_reason.clear();
    rep.rho_reason.clear();
    try {
        rep.mu_hat = drift_mu(series);
    } catch (const std::exception& e) {
        rep.mu_reason = e.what();
    }
    if (!rep.mu_hat) {
        rep.rho_reason = "drift unavailable";
    } else if (!rep.raw) {
        rep.rho_reason = "volatility estimates unavailable";
    } else {
        try {
            const auto corr = residuals_and_rho(series, *rep.mu_hat, rescale_time(*rep.raw, rep.grid.T));
            rep.rho_hat = corr.rho;
            rep.rho_near_unit = corr.near_unit;
        } catch (const std::exception& e) {
            rep.rho_reason = e.what();
        }
    }
    return rep;
}

}  // namespace hestonmle
