#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hestonmle {

/// Parameters of the square-root volatility SDE
///   dY = kappa (theta - Y) dt + gamma sqrt(Y) dB.
/// gamma2 is the squared vol-of-vol. Values are not validated on construction;
/// call validate_domain() or require_valid() where the Feller domain matters.
struct VolParams {
    double kappa = 0.0;
    double theta = 0.0;
    double gamma2 = 0.0;

    friend bool operator==(const VolParams&, const VolParams&) = default;
};

struct HestonParams {
    VolParams vol;
    double mu = 0.0;
    double rho = 0.0;

    friend bool operator==(const HestonParams&, const HestonParams&) = default;
};

/// omega = exp(-kappa T), zeta = kappa theta / gamma2.
struct CanonicalParams {
    double omega = 0.0;
    double zeta = 0.0;

    friend bool operator==(const CanonicalParams&, const CanonicalParams&) = default;
};

/// Parameters (u, v, w) of the time-changed SDE dV = (u - v V) ds + sqrt(2w V) dB.
struct ConeParams {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;

    friend bool operator==(const ConeParams&, const ConeParams&) = default;
};

struct SamplingGrid {
    double T = 0.0;
    std::size_t N = 0;

    double horizon() const noexcept { return T * static_cast<double>(N); }
};

/// N + 1 variance observations V_0..V_N taken every grid.T.
struct VolSeries {
    SamplingGrid grid;
    std::vector<double> values;
};

/// Joint observations: prices U_0..U_N alongside the variances.
struct JointSeries {
    VolSeries vol;
    std::vector<double> prices;
};

struct DomainCheck {
    bool valid = false;
    std::string diagnostic;  // empty when valid

    explicit operator bool() const noexcept { return valid; }
};

DomainCheck validate_domain(const VolParams& p);
DomainCheck validate_domain(const HestonParams& p);

// Throw DomainError carrying the diagnostic when the check fails.
void require_valid(const VolParams& p);
void require_valid(const HestonParams& p);
void require_valid(const CanonicalParams& c);
void require_valid(const SamplingGrid& grid);

bool in_cone(const ConeParams& c) noexcept;

struct CanonicalForm {
    CanonicalParams params;
    double Tbar = 0.0;  // kappa * T, the sampling interval of the canonical SDE
};

CanonicalForm to_canonical(const VolParams& p, const SamplingGrid& grid);
CanonicalForm to_canonical(const VolParams& p, double T);

/// Canonical SDE dJ = (zeta - J) dt + sqrt(J) dW as a VolParams triple.
VolParams canonical_vol_params(double zeta);

/// Y -> A Y maps (kappa, theta, gamma2) to (kappa, A theta, A gamma2).
VolParams rescale_space(const VolParams& p, double A);

/// Time change t -> t / sigma; (u, v, w) = (sigma kappa theta, sigma kappa, sigma gamma2 / 2).
ConeParams rescale_time(const VolParams& p, double sigma);
VolParams cone_to_params(const ConeParams& c, double sigma);

/// Space rescale by A combined with time change by sigma:
/// (sigma kappa, A theta, A sigma gamma2).
VolParams rescale(const VolParams& p, double A, double sigma);

VolSeries make_vol_series(double T, std::vector<double> values);
JointSeries make_joint_series(double T, std::vector<double> variances, std::vector<double> prices);

}  // namespace hestonmle
