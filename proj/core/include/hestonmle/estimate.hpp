#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hestonmle/params.hpp"
#include "hestonmle/stats.hpp"

namespace hestonmle {

/// Thrown when an estimator is undefined for the observed statistics.
/// The caller still holds whatever raw estimates were computable.
class EstimatorUnavailable : public std::runtime_error {
public:
    enum class Reason { NotInvertible, RootsNotSeparated, BoundaryCase, Degenerate };

    EstimatorUnavailable(Reason reason, const std::string& what)
        : std::runtime_error(what), reason_(reason) {}

    Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

/// L(u, v, w) = log(2w) + [a + b u + c v + d u^2 / 2 - 2 u v + f v^2 / 2] / (2w).
/// Throws DomainError outside the cone u > w > 0, v > 0.
double neg_log_likelihood(const ConeParams& p, const SufficientStats& s);

/// Non-generic outcome of the likelihood minimization. When the discriminant
/// d f - 4 is degenerate there is no stationary point and both points are empty.
struct BoundaryOutcome {
    std::string reason;
    std::optional<ConeParams> stationary;  // unconstrained stationary point, outside the cone
    std::optional<ConeParams> projected;   // interior point within relative 1e-6 of the clamp
};

using MleOutcome = std::variant<ConeParams, BoundaryOutcome>;

/// Unconstrained stationary point of L, without any cone check. Requires d f - 4 != 0.
ConeParams stationary_point(const SufficientStats& s);

MleOutcome mle_uvw(const SufficientStats& s);

inline constexpr double kBoundaryProjectionEps = 1e-6;

ConeParams project_into_cone(const ConeParams& p, double scale);

/// Raw approximate MLEs (kappa_hat, theta_hat, gamma2_hat) as a VolParams triple.
/// May lie outside the Feller domain only when produced from a boundary projection.
using RawEstimates = VolParams;

/// Closed-form rational estimators. Throws EstimatorUnavailable(BoundaryCase) when
/// the statistics are not generic.
RawEstimates mle_volatility_params(const SufficientStats& s);

/// kappa_hat = v / T, theta_hat = u / v, gamma2_hat = 2 w / T.
RawEstimates estimates_from_cone(const ConeParams& c, double T);

/// Almost-sure limits of the raw estimators for fixed T as N grows.
RawEstimates asymptotic_limits(const VolParams& p, double T);

/// Asymptotic genericity: zeta >= 3/4, or 1/2 < zeta < 3/4 with
/// omega > zeta (3 - 4 zeta) / (1 - zeta).
bool asymptotic_genericity(const CanonicalParams& c);

/// K = -log(1 - T kappa_hat) / T. Throws EstimatorUnavailable(NotInvertible)
/// unless 0 < T kappa_hat < 1.
double consistent_kappa(double kappa_hat, double T);

struct QuadraticRoots {
    double smaller = 0.0;
    double larger = 0.0;
};

/// Roots of the bias-inversion polynomial
///   (1 - T k) Z^2 + [theta (T k - 2) - g / k] Z + 2 g theta / k
/// for raw estimates (k, theta, g). Throws RootsNotSeparated on complex roots
/// or when 0 < Z1 < 2 theta < Z2 fails.
QuadraticRoots bias_polynomial_roots(const RawEstimates& raw, double T);

/// G = Z1 * K, consistent estimator of gamma2.
double consistent_gamma2(const RawEstimates& raw, double T);

/// zeta_hat = K theta_hat / G. Throws DomainError when G <= 0.
double zeta_hat(double K, double theta_hat, double G);

enum class Regime { Gaussian, HeavyTail };

Regime regime_of(double zeta) noexcept;
const char* to_string(Regime r) noexcept;

/// Weighted drift estimator sum (1/V_n)(dU_n / U_n) / (T sum 1/V_n).
double drift_mu(const JointSeries& series);

struct Residuals {
    std::vector<double> dZ;  // normalized price-driver increments
    std::vector<double> dB;  // normalized volatility-driver increments
};

struct CorrelationEstimate {
    Residuals residuals;
    double rho = 0.0;
    bool near_unit = false;  // |rho| >= 1 - 1e-9
};

/// Brownian-increment residuals of both SDEs and their centered sample correlation.
/// Throws DomainError when either residual sequence has zero variance.
CorrelationEstimate residuals_and_rho(const JointSeries& series, double mu_hat,
                                      const ConeParams& cone);

/// Volatility estimators of one path, in the compact form used by the harness.
struct VolatilityEstimates {
    GenericityVerdict genericity;
    std::optional<RawEstimates> raw;  // generic raw MLEs; empty for boundary cases
    std::optional<double> K;
    std::optional<double> G;
    std::string consistent_reason;  // why K or G is absent
};

VolatilityEstimates estimate_volatility(const SufficientStats& s);

struct ConsistentEstimates {
    double kappa = 0.0;   // K
    double theta = 0.0;   // theta_hat (already asymptotically unbiased)
    double gamma2 = 0.0;  // G
};

struct EstimateReport {
    SamplingGrid grid;
    SufficientStats stats;
    GenericityVerdict genericity;
    std::optional<BoundaryOutcome> boundary;

    std::optional<RawEstimates> raw;  // generic MLEs, or the projected boundary point
    std::string raw_reason;

    std::optional<ConsistentEstimates> consistent;
    std::string consistent_reason;

    std::optional<double> mu_hat;
    std::string mu_reason;
    std::optional<double> rho_hat;
    bool rho_near_unit = false;
    std::string rho_reason;

    // From (K, theta_hat, G); omega = exp(-K T).
    std::optional<CanonicalParams> canonical_hat;
    // From the raw MLEs; omega = exp(-kappa_hat T).
    std::optional<CanonicalParams> canonical_raw;
    std::optional<Regime> regime;

    double annualization = 1.0;
};

EstimateReport estimate(const VolSeries& series);
EstimateReport estimate(const JointSeries& series);

}  // namespace hestonmle
