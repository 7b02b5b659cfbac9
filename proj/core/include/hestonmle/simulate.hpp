#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hestonmle/params.hpp"
#include "hestonmle/random.hpp"

namespace hestonmle {

struct EulerScheme {
    double delta = 0.0;  // integration step
};

/// Chain exact noncentral chi-square transitions; no discretization error.
struct ExactScheme {};

using Scheme = std::variant<EulerScheme, ExactScheme>;

enum class Dismissal {
    DiscardNegative,  // reject the whole trajectory once a value is <= 0
    AbsorbHalt,       // diagnostics only: stop at 0 and return the truncated path
};

struct PathConfig {
    Scheme scheme = ExactScheme{};
    double horizon = 0.0;          // S, total simulated time for euler_vol_path
    std::optional<double> y0;      // empty: draw Y_0 from the stationary law
    double x0 = 1.0;               // initial price of joint paths
    Dismissal dismissal = Dismissal::DiscardNegative;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    bool zero_noise = false;       // test hook: every Gaussian increment is 0
};

/// Default Euler step relative to the sub-sampling interval.
inline constexpr int kDefaultEulerSubsteps = 20;

/// Hard errors throw DomainError; soft problems (coarse Euler steps) are returned
/// as warnings. Pass the sub-sampling interval when the path will be sub-sampled.
std::vector<std::string> validate(const PathConfig& cfg, std::optional<double> T = std::nullopt);

/// Constants of the exact transition law over a horizon t.
struct TransitionParams {
    double lambda = 0.0;  // 4 kappa / (gamma2 (1 - exp(-kappa t)))
    double r = 0.0;       // 2 zeta - 1
    double nu = 0.0;      // exp(-kappa t)
    double dof = 0.0;     // 2 (r + 1) = 4 zeta
};

TransitionParams transition_params(const VolParams& p, double t);

struct Dismissed {
    std::size_t step = 0;  // index of the first non-positive value
    std::string what;
};

using PathOutcome = std::variant<std::vector<double>, Dismissed>;
using SeriesOutcome = std::variant<VolSeries, Dismissed>;
using JointOutcome = std::variant<JointSeries, Dismissed>;

/// Euler path y_0..y_K with K = S / delta; requires an EulerScheme config.
/// Under AbsorbHalt the returned path ends at the absorbed 0.
PathOutcome euler_vol_path(const VolParams& p, const PathConfig& cfg);

/// Draw Y_{s+t} given Y_s = y:  Z / lambda with Z ~ chi2'(4 zeta, lambda y nu).
double exact_transition_sample(const VolParams& p, double y, double t, RandomStream& rng);

/// Draw from the stationary law Gamma(shape 2 zeta, scale gamma2 / (2 kappa)).
double stationary_sample(const VolParams& p, RandomStream& rng);

/// N + 1 observations Y_{nT} of a single trajectory.
SeriesOutcome subsampled_vol_series(const VolParams& p, const SamplingGrid& grid,
                                    const PathConfig& cfg);

/// Correlated Euler simulation of price and variance, sub-sampled every grid.T.
JointOutcome joint_euler_path(const HestonParams& hp, const SamplingGrid& grid,
                              const PathConfig& cfg);

/// Transition density g_t(y, z) via the Poisson-mixture series of the Bessel
/// expansion, truncated once the neglected mass is below 1e-12.
double transition_density(const VolParams& p, double y, double z, double t);

double stationary_density(const VolParams& p, double z);

/// First two conditional moments of Y_{s+t} given Y_s = y.
double conditional_mean(const VolParams& p, double y, double t);
double conditional_variance(const VolParams& p, double y, double t);

/// CSV with header n,t,V (and U for joint series), 17 significant digits.
void write_path_csv(std::ostream& os, const VolSeries& series);
void write_path_csv(std::ostream& os, const JointSeries& series);

}  // namespace hestonmle
