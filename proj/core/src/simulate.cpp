#include "hestonmle/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "hestonmle/errors.hpp"

namespace hestonmle {

namespace {

constexpr double kStepTolerance = 1e-9;

// Number of integration steps of length delta in an interval; throws unless integral.
std::size_t whole_steps(double interval, double delta, const char* what) {
    const double ratio = interval / delta;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > kStepTolerance * rounded) {
        throw DomainError(std::string(what) + " must be a positive integer multiple of delta");
    }
    return static_cast<std::size_t>(rounded);
}

double initial_variance(const VolParams& p, const PathConfig& cfg, RandomStream& rng) {
    return cfg.y0 ? *cfg.y0 : stationary_sample(p, rng);
}

void format_number(std::ostream& os, double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
}

}  // namespace

std::vector<std::string> validate(const PathConfig& cfg, std::optional<double> T) {
    std::vector<std::string> warnings;
    if (cfg.y0 && !(*cfg.y0 > 0.0 && std::isfinite(*cfg.y0))) {
        throw DomainError("initial variance y0 must be positive");
    }
    if (!(cfg.x0 > 0.0 && std::isfinite(cfg.x0))) throw DomainError("initial price x0 must be positive");
    if (const auto* euler = std::get_if<EulerScheme>(&cfg.scheme)) {
        if (!(euler->delta > 0.0 && std::isfinite(euler->delta))) {
            throw DomainError("Euler step delta must be positive");
        }
        if (T) {
            whole_steps(*T, euler->delta, "sub-sampling interval T");
            if (euler->delta > *T / 10.0 * (1.0 + kStepTolerance)) {
                warnings.emplace_back("Euler step delta exceeds T/10; discretization bias may dominate");
            }
        }
    }
    return warnings;
}

TransitionParams transition_params(const VolParams& p, double t) {
    require_valid(p);
    if (!(t > 0.0)) throw DomainError("transition horizon must be positive");
    TransitionParams tp;
    tp.nu = std::exp(-p.kappa * t);
    tp.lambda = 4.0 * p.kappa / (p.gamma2 * -std::expm1(-p.kappa * t));
    const double zeta = p.kappa * p.theta / p.gamma2;
    tp.r = 2.0 * zeta - 1.0;
    tp.dof = 4.0 * zeta;
    return tp;
}

double exact_transition_sample(const VolParams& p, double y, double t, RandomStream& rng) {
    if (!(y > 0.0)) throw DomainError("exact transition needs a positive starting variance");
    const auto tp = transition_params(p, t);
    return rng.noncentral_chi_square(tp.dof, tp.lambda * y * tp.nu) / tp.lambda;
}

double stationary_sample(const VolParams& p, RandomStream& rng) {
    require_valid(p);
    const double zeta = p.kappa * p.theta / p.gamma2;
    return rng.gamma(2.0 * zeta, p.gamma2 / (2.0 * p.kappa));
}

PathOutcome euler_vol_path(const VolParams& p, const PathConfig& cfg) {
    require_valid(p);
    validate(cfg);
    const auto* euler = std::get_if<EulerScheme>(&cfg.scheme);
    if (!euler) throw DomainError("euler_vol_path requires an Euler scheme");
    const double delta = euler->delta;
    const std::size_t steps = whole_steps(cfg.horizon, delta, "horizon S");

    RandomStream rng(cfg.seed, cfg.stream_id);
    const double drift = p.kappa * delta;
    const double diffusion = std::sqrt(p.gamma2 * delta);

    std::vector<double> path;
    path.reserve(steps + 1);
    double y = initial_variance(p, cfg, rng);
    path.push_back(y);
    for (std::size_t k = 0; k < steps; ++k) {
        const double g = cfg.zero_noise ? 0.0 : rng.normal();
        y = y + drift * (p.theta - y) + diffusion * std::sqrt(y) * g;
        if (!(y > 0.0)) {
            if (cfg.dismissal == Dismissal::DiscardNegative) {
                return Dismissed{k + 1, "Euler variance became non-positive"};
            }
            path.push_back(0.0);
            return path;
        }
        path.push_back(y);
    }
    return path;
}

SeriesOutcome subsampled_vol_series(const VolParams& p, const SamplingGrid& grid,
                                    const PathConfig& cfg) {
    require_valid(p);
    require_valid(grid);
    validate(cfg, grid.T);

    RandomStream rng(cfg.seed, cfg.stream_id);
    VolSeries out{grid, {}};
    out.values.reserve(grid.N + 1);
    double y = initial_variance(p, cfg, rng);
    out.values.push_back(y);

    if (const auto* euler = std::get_if<EulerScheme>(&cfg.scheme)) {
        const std::size_t substeps = whole_steps(grid.T, euler->delta, "sub-sampling interval T");
        const double drift = p.kappa * euler->delta;
        const double diffusion = std::sqrt(p.gamma2 * euler->delta);
        for (std::size_t n = 0; n < grid.N; ++n) {
            for (std::size_t k = 0; k < substeps; ++k) {
                const double g = cfg.zero_noise ? 0.0 : rng.normal();
                y = y + drift * (p.theta - y) + diffusion * std::sqrt(y) * g;
                if (!(y > 0.0)) {
                    return Dismissed{n * substeps + k + 1, "Euler variance became non-positive"};
                }
            }
            out.values.push_back(y);
        }
        return out;
    }

    const auto tp = transition_params(p, grid.T);
    for (std::size_t n = 0; n < grid.N; ++n) {
        y = rng.noncentral_chi_square(tp.dof, tp.lambda * y * tp.nu) / tp.lambda;
        if (!(y > 0.0)) return Dismissed{n + 1, "exact transition underflowed to zero"};
        out.values.push_back(y);
    }
    return out;
}

JointOutcome joint_euler_path(const HestonParams& hp, const SamplingGrid& grid,
                              const PathConfig& cfg) {
    require_valid(hp);
    require_valid(grid);
    validate(cfg, grid.T);
    const auto* euler = std::get_if<EulerScheme>(&cfg.scheme);
    if (!euler) throw DomainError("joint paths are simulated with the Euler scheme only");

    const VolParams& p = hp.vol;
    const double delta = euler->delta;
    const std::size_t substeps = whole_steps(grid.T, delta, "sub-sampling interval T");
    const double drift = p.kappa * delta;
    const double diffusion = std::sqrt(p.gamma2 * delta);
    const double sqrt_delta = std::sqrt(delta);
    const double orth = std::sqrt(1.0 - hp.rho * hp.rho);

    RandomStream rng(cfg.seed, cfg.stream_id);
    JointSeries out{{grid, {}}, {}};
    out.vol.values.reserve(grid.N + 1);
    out.prices.reserve(grid.N + 1);
    double y = initial_variance(p, cfg, rng);
    double x = cfg.x0;
    out.vol.values.push_back(y);
    out.prices.push_back(x);

    for (std::size_t n = 0; n < grid.N; ++n) {
        for (std::size_t k = 0; k < substeps; ++k) {
            double g_vol = 0.0;
            double g_ind = 0.0;
            if (!cfg.zero_noise) {
                g_vol = rng.normal();
                g_ind = rng.normal();
            }
            const double dB = sqrt_delta * g_vol;
            const double dZ = hp.rho * dB + orth * sqrt_delta * g_ind;
            const double sy = std::sqrt(y);
            x = x + hp.mu * x * delta + sy * x * dZ;
            y = y + drift * (p.theta - y) + diffusion * sy * g_vol;
            if (!(y > 0.0)) return Dismissed{n * substeps + k + 1, "Euler variance became non-positive"};
            if (!(x > 0.0)) return Dismissed{n * substeps + k + 1, "Euler price became non-positive"};
        }
        out.vol.values.push_back(y);
        out.prices.push_back(x);
    }
    return out;
}

double transition_density(const VolParams& p, double y, double z, double t) {
    if (!(y > 0.0)) throw DomainError("transition density needs a positive starting variance");
    if (!(z > 0.0)) return 0.0;
    const auto tp = transition_params(p, t);
    const double x = tp.lambda * z;
    const double half_nc = 0.5 * tp.lambda * y * tp.nu;
    const double log_x = std::log(x);

    // f(x) = sum_j Poisson(j; half_nc) chi2pdf(x; dof + 2j)
    auto log_term = [&](double j) {
        const double half_m = 0.5 * tp.dof + j;
        const double log_poisson = j * std::log(half_nc) - half_nc - std::lgamma(j + 1.0);
        const double log_chi2 = (half_m - 1.0) * log_x - 0.5 * x - half_m * std::log(2.0) -
                                std::lgamma(half_m);
        return log_poisson + log_chi2;
    };
    if (!(half_nc > 0.0)) {
        // central limit of the mixture (nu underflowed)
        const double half_m = 0.5 * tp.dof;
        return tp.lambda * std::exp((half_m - 1.0) * log_x - 0.5 * x - half_m * std::log(2.0) -
                                    std::lgamma(half_m));
    }

    // Chi-square densities with more than 2 degrees of freedom are bounded by 1/2,
    // so the neglected tail is at most half the remaining Poisson mass.
    constexpr double kTail = 1e-12;
    const double mode = std::floor(half_nc);
    double sum = 0.0;
    for (double j = mode; j >= 0.0; j -= 1.0) sum += std::exp(log_term(j));
    double log_weight = 0.0;
    for (double j = mode + 1.0;; j += 1.0) {
        sum += std::exp(log_term(j));
        log_weight = j * std::log(half_nc) - half_nc - std::lgamma(j + 1.0);
        const double ratio = half_nc / (j + 1.0);
        if (ratio < 1.0 && 0.5 * std::exp(log_weight) * ratio / (1.0 - ratio) < kTail) break;
    }
    return tp.lambda * sum;
}

double stationary_density(const VolParams& p, double z) {
    require_valid(p);
    if (!(z > 0.0)) return 0.0;
    const double shape = 2.0 * p.kappa * p.theta / p.gamma2;
    const double rate = 2.0 * p.kappa / p.gamma2;
    return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(z) - rate * z -
                    std::lgamma(shape));
}

double conditional_mean(const VolParams& p, double y, double t) {
    require_valid(p);
    const double omega = std::exp(-p.kappa * t);
    return p.theta * (1.0 - omega) + omega * y;
}

double conditional_variance(const VolParams& p, double y, double t) {
    require_valid(p);
    const double omega = std::exp(-p.kappa * t);
    return p.gamma2 * (1.0 - omega) / p.kappa * (omega * y + (1.0 - omega) * p.theta / 2.0);
}

void write_path_csv(std::ostream& os, const VolSeries& series) {
    os << "n,t,V\n";
    for (std::size_t n = 0; n < series.values.size(); ++n) {
        os << n << ',';
        format_number(os, static_cast<double>(n) * series.grid.T);
        os << ',';
        format_number(os, series.values[n]);
        os << '\n';
    }
}

void write_path_csv(std::ostream& os, const JointSeries& series) {
    os << "n,t,V,U\n";
    const auto& v = series.vol.values;
    for (std::size_t n = 0; n < v.size(); ++n) {
        os << n << ',';
        format_number(os, static_cast<double>(n) * series.vol.grid.T);
        os << ',';
        format_number(os, v[n]);
        os << ',';
        format_number(os, series.prices[n]);
        os << '\n';
    }
}

}  // namespace hestonmle
