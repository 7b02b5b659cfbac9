#include "hestonmle/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "hestonmle/errors.hpp"
#include "hestonmle/estimate.hpp"
#include "hestonmle/simulate.hpp"
#include "hestonmle/stats.hpp"

namespace hestonmle {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct TrajectoryOutcome {
    bool dismissed = false;
    std::vector<bool> generic;                             // per N
    std::vector<std::array<double, kAllEstimators.size()>> errors;  // per N
};

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// p-value of the adjusted Anderson-Darling statistic when mean and variance are estimated.
double anderson_darling_pvalue(double a) {
    if (a >= 0.6) return std::exp(1.2937 - 5.709 * a + 0.0186 * a * a);
    if (a >= 0.34) return std::exp(0.9177 - 4.279 * a - 1.38 * a * a);
    if (a >= 0.2) return 1.0 - std::exp(-8.318 + 42.796 * a - 59.938 * a * a);
    return 1.0 - std::exp(-13.436 + 101.14 * a - 223.73 * a * a);
}

// Type-7 (linear interpolation) quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double level) {
    if (sorted.empty()) return kNaN;
    const double h = level * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

VolParams truth_of(const AccuracySpec& spec) {
    return spec.physical ? spec.physical->truth : canonical_vol_params(spec.canonical.zeta);
}

TrajectoryOutcome simulate_trajectory(const AccuracySpec& spec, const VolParams& truth, double T,
                                      std::size_t index) {
    const std::size_t n_max = spec.N_values.back();
    PathConfig cfg;
    if (spec.scheme == SimulationScheme::Euler) {
        cfg.scheme = EulerScheme{T / spec.euler_substeps};
    }
    cfg.seed = spec.seed;
    cfg.stream_id = index;

    TrajectoryOutcome out;
    const auto outcome = subsampled_vol_series(truth, {T, n_max}, cfg);
    if (std::holds_alternative<Dismissed>(outcome)) {
        out.dismissed = true;
        return out;
    }
    const auto& values = std::get<VolSeries>(outcome).values;
    const std::span<const double> path(values);

    out.generic.resize(spec.N_values.size());
    out.errors.resize(spec.N_values.size());
    for (std::size_t i = 0; i < spec.N_values.size(); ++i) {
        const std::size_t N = spec.N_values[i];
        const auto est = estimate_volatility(sufficient_stats(path.first(N + 1), T));
        auto& err = out.errors[i];
        err.fill(kNaN);
        out.generic[i] = est.genericity.generic;
        if (!est.raw) continue;
        err[static_cast<std::size_t>(Estimator::KappaHat)] = est.raw->kappa / truth.kappa - 1.0;
        err[static_cast<std::size_t>(Estimator::ThetaHat)] = est.raw->theta / truth.theta - 1.0;
        err[static_cast<std::size_t>(Estimator::Gamma2Hat)] = est.raw->gamma2 / truth.gamma2 - 1.0;
        if (est.K) err[static_cast<std::size_t>(Estimator::KappaConsistent)] = *est.K / truth.kappa - 1.0;
        if (est.G) err[static_cast<std::size_t>(Estimator::Gamma2Consistent)] = *est.G / truth.gamma2 - 1.0;
    }
    return out;
}

EstimatorSummary summarize(std::vector<double> samples) {
    EstimatorSummary s;
    std::vector<double> present;
    present.reserve(samples.size());
    for (double x : samples) {
        if (!std::isnan(x)) present.push_back(x);
    }
    s.samples = std::move(samples);
    s.count = present.size();
    if (present.empty()) {
        s.sigma = s.sigma_se = s.bias = kNaN;
        s.quantiles.fill(kNaN);
        return s;
    }
    const double n = static_cast<double>(present.size());
    CompensatedSum sum, sum_sq;
    for (double x : present) {
        sum += x;
        sum_sq += x * x;
    }
    s.bias = sum.value() / n;
    const double mean_sq = sum_sq.value() / n;
    s.sigma = std::sqrt(mean_sq);
    CompensatedSum dev;
    for (double x : present) dev += (x * x - mean_sq) * (x * x - mean_sq);
    const double se_sq = present.size() > 1 ? std::sqrt(dev.value() / (n - 1.0) / n) : kNaN;
    s.sigma_se = s.sigma > 0.0 ? se_sq / (2.0 * s.sigma) : kNaN;

    std::sort(present.begin(), present.end());
    for (std::size_t q = 0; q < kQuantileLevels.size(); ++q) {
        s.quantiles[q] = quantile_sorted(present, kQuantileLevels[q]);
    }
    if (present.size() >= 100) {
        try {
            s.normality = normality_diagnostic(present);
        } catch (const DomainError&) {
        }
    }
    return s;
}

void format_number(std::ostream& os, double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
}

}  // namespace

const char* to_string(Estimator e) noexcept {
    switch (e) {
        case Estimator::KappaHat: return "kappa_hat";
        case Estimator::KappaConsistent: return "K";
        case Estimator::ThetaHat: return "theta_hat";
        case Estimator::Gamma2Hat: return "gamma2_hat";
        case Estimator::Gamma2Consistent: return "G";
    }
    return "?";
}

double AccuracySpec::sampling_interval() const {
    if (physical) return physical->T;
    return Tbar > 0.0 ? Tbar : -std::log(canonical.omega);
}

std::vector<std::string> validate(const AccuracySpec& spec) {
    std::vector<std::string> warnings;
    if (spec.physical) {
        require_valid(spec.physical->truth);
        if (!(spec.physical->T > 0.0)) throw DomainError("sub-sampling interval T must be positive");
    } else {
        require_valid(spec.canonical);
        if (spec.Tbar < 0.0 || !std::isfinite(spec.Tbar)) throw DomainError("Tbar must be positive");
        if (spec.Tbar > 0.0 && std::abs(std::exp(-spec.Tbar) - spec.canonical.omega) > 1e-3) {
            warnings.emplace_back("omega differs from exp(-Tbar) by more than 1e-3; Tbar is used");
        }
    }
    if (spec.trajectories < 2) throw DomainError("at least 2 trajectories are required");
    if (spec.N_values.empty()) throw DomainError("N_values must not be empty");
    if (!std::is_sorted(spec.N_values.begin(), spec.N_values.end()) ||
        std::adjacent_find(spec.N_values.begin(), spec.N_values.end()) != spec.N_values.end()) {
        throw DomainError("N_values must be strictly ascending");
    }
    if (spec.N_values.front() < 2) throw DomainError("every N must be at least 2");
    if (spec.scheme == SimulationScheme::Euler && spec.euler_substeps < 1) {
        throw DomainError("euler_substeps must be positive");
    }
    if (spec.trajectories < 100) {
        warnings.emplace_back("fewer than 100 trajectories: RMS errors carry large sampling error");
    }
    return warnings;
}

const AccuracyCell& AccuracyResult::at(std::size_t N) const {
    for (const auto& cell : cells) {
        if (cell.N == N) return cell;
    }
    throw std::out_of_range("no accuracy cell for N = " + std::to_string(N));
}

AccuracyResult run_accuracy(const AccuracySpec& spec) {
    AccuracyResult result;
    result.warnings = validate(spec);
    result.spec = spec;

    const VolParams truth = truth_of(spec);
    const double T = spec.sampling_interval();

    std::vector<TrajectoryOutcome> outcomes(spec.trajectories);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < spec.trajectories; i = next++) {
            outcomes[i] = simulate_trajectory(spec, truth, T, i);
        }
    };
    unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, spec.trajectories));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    std::size_t total_dismissed = 0;
    for (const auto& o : outcomes) total_dismissed += o.dismissed ? 1 : 0;

    bool any_generic = false;
    for (std::size_t i = 0; i < spec.N_values.size(); ++i) {
        AccuracyCell cell;
        cell.N = spec.N_values[i];
        cell.dismissed = total_dismissed;
        std::array<std::vector<double>, kAllEstimators.size()> samples;
        for (auto& s : samples) s.reserve(spec.trajectories);
        for (const auto& o : outcomes) {
            if (o.dismissed) {
                for (auto& s : samples) s.push_back(kNaN);
                continue;
            }
            (o.generic[i] ? cell.generic : cell.boundary) += 1;
            for (std::size_t e = 0; e < samples.size(); ++e) samples[e].push_back(o.errors[i][e]);
        }
        const std::size_t live = spec.trajectories - total_dismissed;
        cell.generic_fraction = live ? static_cast<double>(cell.generic) / static_cast<double>(live) : kNaN;
        cell.dismissed_fraction =
            static_cast<double>(total_dismissed) / static_cast<double>(spec.trajectories);
        for (std::size_t e = 0; e < samples.size(); ++e) cell.estimators[e] = summarize(std::move(samples[e]));
        if (cell.generic == 0) {
            result.warnings.push_back("no generic trajectory at N = " + std::to_string(cell.N));
        }
        any_generic = any_generic || cell.generic > 0;
        result.cells.push_back(std::move(cell));
    }
    if (!any_generic) {
        throw std::runtime_error("accuracy run produced no generic estimate: " +
                                 std::to_string(total_dismissed) + " of " +
                                 std::to_string(spec.trajectories) + " trajectories dismissed");
    }
    return result;
}

NormalityResult normality_diagnostic(std::span<const double> sample) {
    if (sample.size() < 100) throw DomainError("normality diagnostic needs at least 100 values");
    const double n = static_cast<double>(sample.size());
    CompensatedSum sum;
    for (double x : sample) sum += x;
    const double mean = sum.value() / n;
    CompensatedSum m2, m3, m4;
    for (double x : sample) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double var = m2.value() / n;
    if (!(var > 0.0)) throw DomainError("normality diagnostic on a zero-variance sample");

    NormalityResult r;
    r.n = sample.size();
    r.skewness = m3.value() / n / std::pow(var, 1.5);
    r.excess_kurtosis = m4.value() / n / (var * var) - 3.0;
    r.jarque_bera = n / 6.0 * (r.skewness * r.skewness + 0.25 * r.excess_kurtosis * r.excess_kurtosis);
    r.jb_pvalue = std::exp(-0.5 * r.jarque_bera);  // chi-square(2) survival

    std::vector<double> z(sample.begin(), sample.end());
    std::sort(z.begin(), z.end());
    const double sd = std::sqrt(m2.value() / (n - 1.0));
    CompensatedSum acc;
    const std::size_t m = z.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double lo = std::max(normal_cdf((z[i] - mean) / sd), 1e-300);
        const double hi = std::max(normal_cdf(-(z[m - 1 - i] - mean) / sd), 1e-300);
        acc += (2.0 * static_cast<double>(i) + 1.0) * (std::log(lo) + std::log(hi));
    }
    const double a2 = -n - acc.value() / n;
    r.anderson_darling = a2 * (1.0 + 0.75 / n + 2.25 / (n * n));
    r.ad_pvalue = std::clamp(anderson_darling_pvalue(r.anderson_darling), 0.0, 1.0);
    r.gaussian_compatible = std::min(r.jb_pvalue, r.ad_pvalue) > kNormalityLevel / 2.0;
    return r;
}

TailProbe tail_probe(std::span<const double> errors, std::size_t N) {
    if (errors.size() < 1000) throw DomainError("tail probe needs at least 1000 values");
    std::vector<double> x(errors.begin(), errors.end());
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(x.size() / 2), x.end());
    const double median = x[x.size() / 2];
    for (double& v : x) v = std::abs(v - median);
    std::sort(x.begin(), x.end(), std::greater<>());

    TailProbe probe;
    probe.n = x.size();
    probe.N = N;
    probe.k = std::max<std::size_t>(10, x.size() / 100);
    const double threshold = x[probe.k];
    if (!(threshold > 0.0)) throw DomainError("tail probe: degenerate tail sample");
    CompensatedSum logs;
    for (std::size_t i = 0; i < probe.k; ++i) logs += std::log(x[i] / threshold);
    probe.index = static_cast<double>(probe.k) / logs.value();
    return probe;
}

std::vector<SqrtNFit> sqrtn_constants(const AccuracyResult& result) {
    std::vector<const AccuracyCell*> cells;
    for (const auto& cell : result.cells) {
        if (cell.N > kSqrtNMinN) cells.push_back(&cell);
    }
    if (cells.size() < 3) throw DomainError("sqrt(N) fit needs at least three N values above 1000");

    std::vector<SqrtNFit> fits;
    for (Estimator e : kAllEstimators) {
        double sxy = 0.0, sxx = 0.0;
        std::size_t used = 0;
        for (const auto* cell : cells) {
            const double sigma = (*cell)[e].sigma;
            if (std::isnan(sigma)) continue;
            const double x = 1.0 / std::sqrt(static_cast<double>(cell->N));
            sxy += x * sigma;
            sxx += x * x;
            ++used;
        }
        SqrtNFit fit;
        fit.estimator = e;
        fit.points = used;
        fit.C = used ? sxy / sxx : kNaN;
        double ss = 0.0;
        for (const auto* cell : cells) {
            const double sigma = (*cell)[e].sigma;
            if (std::isnan(sigma)) continue;
            const double r = sigma - fit.C / std::sqrt(static_cast<double>(cell->N));
            ss += r * r;
        }
        fit.residual = used ? std::sqrt(ss / static_cast<double>(used)) : kNaN;
        fits.push_back(fit);
    }
    return fits;
}

GenericityRate genericity_rate(const AccuracyResult& result) {
    GenericityRate rate;
    std::vector<double> se;
    for (const auto& cell : result.cells) {
        rate.N.push_back(cell.N);
        rate.fraction.push_back(cell.generic_fraction);
        const double live = static_cast<double>(cell.generic + cell.boundary);
        const double f = cell.generic_fraction;
        se.push_back(live > 0.0 ? std::sqrt(f * (1.0 - f) / live) : 0.0);
    }
    for (std::size_t i = 1; i < rate.fraction.size(); ++i) {
        const double slack = 2.0 * std::hypot(se[i - 1], se[i]);
        if (rate.fraction[i] < rate.fraction[i - 1] - slack) rate.nondecreasing = false;
    }
    return rate;
}

void write_sigma_table(std::ostream& os, const AccuracyResult& result) {
    os << "estimator";
    for (const auto& cell : result.cells) os << ',' << cell.N;
    os << '\n';
    for (Estimator e : kAllEstimators) {
        os << to_string(e);
        for (const auto& cell : result.cells) {
            os << ',';
            format_number(os, 100.0 * cell[e].sigma);
        }
        os << '\n';
    }
}

void write_long_csv(std::ostream& os, const AccuracyResult& result) {
    os << "estimator,N,sigma,bias,generic_fraction\n";
    for (Estimator e : kAllEstimators) {
        for (const auto& cell : result.cells) {
            os << to_string(e) << ',' << cell.N << ',';
            format_number(os, cell[e].sigma);
            os << ',';
            format_number(os, cell[e].bias);
            os << ',';
            format_number(os, cell.generic_fraction);
            os << '\n';
        }
    }
}

}  // namespace hestonmle
