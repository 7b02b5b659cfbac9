#include "hestonmle/stats.hpp"

#include <cmath>

#include "hestonmle/errors.hpp"

namespace hestonmle {

SufficientStats sufficient_stats(std::span<const double> values, double T) {
    if (values.size() < 3) throw DomainError("sufficient statistics need N >= 2 increments");
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("sub-sampling interval T must be positive");

    const std::size_t N = values.size() - 1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            throw NonPositiveValue("non-positive variance", i);
        }
    }

    CompensatedSum sa, sb, sd, sf;
    for (std::size_t n = 0; n < N; ++n) {
        const double v = values[n];
        const double dv = values[n + 1] - v;
        sa += dv * dv / v;
        sb += dv / v;
        sd += 1.0 / v;
        sf += v;
    }

    const double inv = 1.0 / static_cast<double>(N);
    SufficientStats s;
    s.a = sa.value() * inv;
    s.b = -2.0 * sb.value() * inv;
    s.c = 2.0 * (values[N] - values[0]) * inv;
    s.d = 2.0 * sd.value() * inv;
    s.f = 2.0 * sf.value() * inv;
    s.n = N;
    s.T = T;
    return s;
}

SufficientStats sufficient_stats(const VolSeries& series) {
    if (series.values.size() != series.grid.N + 1) {
        throw DomainError("series length does not match its sampling grid");
    }
    return sufficient_stats(std::span<const double>(series.values), series.grid.T);
}

GenericityVerdict check_genericity(const SufficientStats& s) {
    const double disc = s.discriminant();
    if (!(disc > kDegenerateDiscriminant)) return GenericityVerdict::Boundary(kDegenerateReason);

    if (!(2.0 * s.b + s.c * s.d < 0.0)) {
        return GenericityVerdict::Boundary("2b+cd >= 0 (stationary v* not positive)");
    }
    const double w_num = 2.0 * s.a * disc - s.b * s.b * s.f - 4.0 * s.b * s.c - s.c * s.c * s.d;
    if (!(w_num > 0.0)) {
        return GenericityVerdict::Boundary("stationary w* not positive");
    }
    if (!(w_num < -4.0 * (s.b * s.f + 2.0 * s.c))) {
        return GenericityVerdict::Boundary("stationary u* not above w* (Feller bound)");
    }
    return GenericityVerdict::Generic();
}

}  // namespace hestonmle
