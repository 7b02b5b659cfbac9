#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>

#include "hestonmle/params.hpp"

namespace hestonmle {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// The five statistics that fully determine the discretized likelihood:
///   a = (1/N) sum (V_{n+1} - V_n)^2 / V_n
///   b = -(2/N) sum (V_{n+1} - V_n) / V_n
///   c = (2/N) (V_N - V_0)
///   d = (2/N) sum 1 / V_n
///   f = (2/N) sum V_n
/// with every sum over n = 0..N-1.
struct SufficientStats {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double f = 0.0;
    std::size_t n = 0;
    double T = 0.0;

    double discriminant() const noexcept { return d * f - 4.0; }
};

SufficientStats sufficient_stats(const VolSeries& series);

/// Statistics of the first values.size() - 1 increments of a raw path.
/// Throws NonPositiveValue / DomainError on invalid input.
SufficientStats sufficient_stats(std::span<const double> values, double T);

/// d f - 4 at or below this value is treated as degenerate.
inline constexpr double kDegenerateDiscriminant = 1e-12;

struct GenericityVerdict {
    bool generic = false;
    std::string reason;  // empty when generic

    static GenericityVerdict Generic() { return {true, {}}; }
    static GenericityVerdict Boundary(std::string why) { return {false, std::move(why)}; }

    explicit operator bool() const noexcept { return generic; }
};

inline constexpr const char* kDegenerateReason = "degenerate discriminant";

/// Generic iff 2b + cd < 0 and 0 < 2a(df - 4) - b^2 f - 4bc - c^2 d < -4(bf + 2c),
/// i.e. the unconstrained likelihood stationary point lies inside the cone.
GenericityVerdict check_genericity(const SufficientStats& s);

}  // namespace hestonmle
