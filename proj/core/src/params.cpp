#include "hestonmle/params.hpp"

#include <cmath>
#include <utility>

#include "hestonmle/errors.hpp"

namespace hestonmle {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

DomainCheck validate_domain(const VolParams& p) {
    if (!positive_finite(p.kappa)) return {false, "kappa must be positive"};
    if (!positive_finite(p.theta)) return {false, "theta must be positive"};
    if (!positive_finite(p.gamma2)) return {false, "gamma2 must be positive"};
    if (!(2.0 * p.kappa * p.theta - p.gamma2 > 0.0)) {
        return {false, "Feller condition violated (2 kappa theta - gamma2 <= 0)"};
    }
    return {true, {}};
}

DomainCheck validate_domain(const HestonParams& p) {
    auto check = validate_domain(p.vol);
    if (!check) return check;
    if (!std::isfinite(p.mu)) return {false, "mu must be finite"};
    if (!(std::abs(p.rho) < 1.0)) return {false, "|rho| must be < 1"};
    return {true, {}};
}

void require_valid(const VolParams& p) {
    if (auto check = validate_domain(p); !check) throw DomainError(check.diagnostic);
}

void require_valid(const HestonParams& p) {
    if (auto check = validate_domain(p); !check) throw DomainError(check.diagnostic);
}

void require_valid(const CanonicalParams& c) {
    if (!(c.omega > 0.0 && c.omega < 1.0)) throw DomainError("omega must lie in (0, 1)");
    if (!(std::isfinite(c.zeta) && c.zeta > 0.5)) throw DomainError("zeta must exceed 1/2");
}

void require_valid(const SamplingGrid& grid) {
    if (!positive_finite(grid.T)) throw DomainError("sub-sampling interval T must be positive");
    if (grid.N < 2) throw DomainError("at least N = 2 observations are required");
}

bool in_cone(const ConeParams& c) noexcept {
    return c.u > c.w && c.w > 0.0 && c.v > 0.0 && std::isfinite(c.u) && std::isfinite(c.v);
}

CanonicalForm to_canonical(const VolParams& p, double T) {
    require_valid(p);
    if (!positive_finite(T)) throw DomainError("sub-sampling interval T must be positive");
    CanonicalForm out;
    out.Tbar = p.kappa * T;
    out.params.omega = std::exp(-out.Tbar);
    out.params.zeta = p.kappa * p.theta / p.gamma2;
    require_valid(out.params);
    return out;
}

CanonicalForm to_canonical(const VolParams& p, const SamplingGrid& grid) {
    return to_canonical(p, grid.T);
}

VolParams canonical_vol_params(double zeta) {
    VolParams p{1.0, zeta, 1.0};
    require_valid(p);
    return p;
}

VolParams rescale_space(const VolParams& p, double A) {
    if (!positive_finite(A)) throw DomainError("space rescaling factor A must be positive");
    return {p.kappa, A * p.theta, A * p.gamma2};
}

ConeParams rescale_time(const VolParams& p, double sigma) {
    if (!positive_finite(sigma)) throw DomainError("time rescaling factor sigma must be positive");
    return {sigma * p.kappa * p.theta, sigma * p.kappa, sigma * p.gamma2 / 2.0};
}

VolParams cone_to_params(const ConeParams& c, double sigma) {
    if (!positive_finite(sigma)) throw DomainError("time rescaling factor sigma must be positive");
    if (!in_cone(c)) throw DomainError("cone membership u > w > 0, v > 0 violated");
    return {c.v / sigma, c.u / c.v, 2.0 * c.w / sigma};
}

VolParams rescale(const VolParams& p, double A, double sigma) {
    if (!positive_finite(A)) throw DomainError("space rescaling factor A must be positive");
    if (!positive_finite(sigma)) throw DomainError("time rescaling factor sigma must be positive");
    return {sigma * p.kappa, A * p.theta, A * sigma * p.gamma2};
}

VolSeries make_vol_series(double T, std::vector<double> values) {
    if (values.size() < 3) throw DomainError("a series needs at least 3 values (N >= 2)");
    VolSeries s{{T, values.size() - 1}, std::move(values)};
    require_valid(s.grid);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (!(s.values[i] > 0.0) || !std::isfinite(s.values[i])) {
            throw NonPositiveValue("non-positive variance", i);
        }
    }
    return s;
}

JointSeries make_joint_series(double T, std::vector<double> variances, std::vector<double> prices) {
    JointSeries s{make_vol_series(T, std::move(variances)), std::move(prices)};
    if (s.prices.size() != s.vol.values.size()) {
        throw DomainError("price and variance series lengths differ");
    }
    for (std::size_t i = 0; i < s.prices.size(); ++i) {
        if (!(s.prices[i] > 0.0) || !std::isfinite(s.prices[i])) {
            throw NonPositiveValue("non-positive price", i);
        }
    }
    return s;
}

}  // namespace hestonmle
