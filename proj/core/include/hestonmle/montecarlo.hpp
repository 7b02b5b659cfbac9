#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hestonmle/params.hpp"

namespace hestonmle {

enum class Estimator { KappaHat, KappaConsistent, ThetaHat, Gamma2Hat, Gamma2Consistent };

inline constexpr std::array<Estimator, 5> kAllEstimators = {
    Estimator::KappaHat, Estimator::KappaConsistent, Estimator::ThetaHat, Estimator::Gamma2Hat,
    Estimator::Gamma2Consistent};

/// Short names used in every table: kappa_hat, K, theta_hat, gamma2_hat, G.
const char* to_string(Estimator e) noexcept;

enum class SimulationScheme { Exact, Euler };

/// A non-canonical problem to simulate instead of the canonical SDE.
/// Errors are still normalized by the true parameters.
struct PhysicalProblem {
    VolParams truth;
    double T = 0.0;
};

struct AccuracySpec {
    CanonicalParams canonical;
    double Tbar = 0.0;  // canonical sub-sampling interval; 0 means -log(omega)
    std::vector<std::size_t> N_values;
    std::size_t trajectories = 1100;
    SimulationScheme scheme = SimulationScheme::Exact;
    int euler_substeps = 20;  // delta = Tbar / euler_substeps
    std::uint64_t seed = 0;
    std::optional<PhysicalProblem> physical;
    unsigned threads = 0;  // 0: hardware concurrency; never changes results

    double sampling_interval() const;
};

/// Throws DomainError; returns warnings (tiny trajectory counts, omega/Tbar mismatch).
std::vector<std::string> validate(const AccuracySpec& spec);

struct NormalityResult {
    std::size_t n = 0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double jarque_bera = 0.0;
    double jb_pvalue = 0.0;
    double anderson_darling = 0.0;  // small-sample adjusted A*^2
    double ad_pvalue = 0.0;
    bool gaussian_compatible = false;
};

inline constexpr double kNormalityLevel = 0.01;

/// Jarque-Bera and Anderson-Darling (estimated mean and variance). The verdict
/// splits the 1% level between the two tests, so each must have p > 0.005.
/// Throws DomainError for fewer than 100 values or a zero-variance sample.
NormalityResult normality_diagnostic(std::span<const double> sample);

struct TailProbe {
    double index = 0.0;     // Hill estimate of the tail exponent
    std::size_t k = 0;      // number of order statistics used
    std::size_t n = 0;
    std::size_t N = 0;      // observation count of the runs the errors came from
    const char* label = "EXPLORATORY";
};

/// Hill estimator on |e - median(e)| over the largest 1% (at least 10) values.
/// Exploratory only. Throws DomainError for fewer than 1000 values.
TailProbe tail_probe(std::span<const double> errors, std::size_t N);

inline constexpr std::array<double, 7> kQuantileLevels = {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99};

struct EstimatorSummary {
    std::size_t count = 0;  // trajectories where the estimator was available
    double sigma = 0.0;     // relative RMS error sqrt(mean((eta_hat / eta - 1)^2))
    double sigma_se = 0.0;  // delta-method standard error of sigma
    double bias = 0.0;      // mean relative error
    std::array<double, kQuantileLevels.size()> quantiles{};
    std::optional<NormalityResult> normality;
    std::vector<double> samples;  // relative error per trajectory, NaN when unavailable
};

struct AccuracyCell {
    std::size_t N = 0;
    std::size_t generic = 0;
    std::size_t boundary = 0;
    std::size_t dismissed = 0;
    double generic_fraction = 0.0;    // among non-dismissed trajectories
    double dismissed_fraction = 0.0;  // among all trajectories
    std::array<EstimatorSummary, kAllEstimators.size()> estimators;

    const EstimatorSummary& operator[](Estimator e) const {
        return estimators[static_cast<std::size_t>(e)];
    }
};

struct AccuracyResult {
    AccuracySpec spec;
    std::vector<AccuracyCell> cells;  // one per N, ascending
    std::vector<std::string> warnings;

    const AccuracyCell& at(std::size_t N) const;
};

/// Simulate spec.trajectories paths, estimate on the first N observations of each
/// for every N in spec.N_values, and summarize the relative errors. Boundary cases
/// are counted and excluded. Throws std::runtime_error when no trajectory yields a
/// generic estimate at any N.
AccuracyResult run_accuracy(const AccuracySpec& spec);

struct SqrtNFit {
    Estimator estimator = Estimator::ThetaHat;
    double C = 0.0;         // sigma(N) ~ C / sqrt(N)
    double residual = 0.0;  // RMS of sigma - C / sqrt(N) over the fitted points
    std::size_t points = 0;
};

inline constexpr std::size_t kSqrtNMinN = 1000;

/// Least-squares C over cells with N > 1000. Throws DomainError with fewer than
/// three such cells.
std::vector<SqrtNFit> sqrtn_constants(const AccuracyResult& result);

struct GenericityRate {
    std::vector<std::size_t> N;
    std::vector<double> fraction;
    bool nondecreasing = true;  // within two binomial standard errors
};

GenericityRate genericity_rate(const AccuracyResult& result);

/// Wide table: one row per estimator, one column per N, sigma in percent.
void write_sigma_table(std::ostream& os, const AccuracyResult& result);
/// Long format: estimator,N,sigma,bias,generic_fraction.
void write_long_csv(std::ostream& os, const AccuracyResult& result);

}  // namespace hestonmle
