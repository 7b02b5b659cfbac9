#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "hestonmle/errors.hpp"
#include "hestonmle/estimate.hpp"
#include "hestonmle/ingest.hpp"
#include "hestonmle/montecarlo.hpp"
#include "hestonmle/serialize.hpp"
#include "hestonmle/simulate.hpp"

namespace hestonmle::cli {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Writes to --output when given, else to the provided stream.
int emit(const std::string& path, std::ostream& out, std::ostream& err,
         const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(out);
        return kOk;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        err << "error: cannot open " << path << " for writing\n";
        return kIoError;
    }
    body(file);
    file.flush();
    if (!file) {
        err << "error: write to " << path << " failed\n";
        return kIoError;
    }
    return kOk;
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != item.size() || item.front() == '-') throw DomainError("bad --n-list entry '" + item + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw DomainError("--n-list is empty");
    return out;
}

unsigned thread_cap(const std::optional<unsigned>& flag, std::ostream& err) {
    if (flag) return *flag;
    if (const char* env = std::getenv("HESTON_MLE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0) return static_cast<unsigned>(v);
        err << "warning: ignoring HESTON_MLE_THREADS='" << env << "'\n";
    }
    return 0;
}

// ---- fit ----------------------------------------------------------------

struct FitOptions {
    std::string input;
    double dt = 0.0;
    double annualization = 1.0;
    bool ohlc = false;
    bool raw_gk = false;
    bool vol_only = false;
    std::string time_col = "t";
    std::string price_col = "price";
    std::string var_col = "var";
    std::string open_col = "open";
    std::string high_col = "high";
    std::string low_col = "low";
    std::string close_col = "close";
    char delimiter = ',';
    std::string output;
    std::string format = "json";
};

void write_fit_csv(std::ostream& os, const EstimateReport& r) {
    os << "field,value\n";
    auto row = [&](const char* name, std::optional<double> v) {
        os << name << ',' << (v ? fmt17(*v) : "") << '\n';
    };
    os << "generic," << (r.genericity.generic ? "true" : "false") << '\n';
    row("T", r.grid.T);
    os << "N," << r.grid.N << '\n';
    row("kappa_hat", r.raw ? std::optional(r.raw->kappa) : std::nullopt);
    row("theta_hat", r.raw ? std::optional(r.raw->theta) : std::nullopt);
    row("gamma2_hat", r.raw ? std::optional(r.raw->gamma2) : std::nullopt);
    row("K", r.consistent ? std::optional(r.consistent->kappa) : std::nullopt);
    row("G", r.consistent ? std::optional(r.consistent->gamma2) : std::nullopt);
    row("mu", r.mu_hat);
    row("rho", r.rho_hat);
    row("omega", r.canonical_hat ? std::optional(r.canonical_hat->omega) : std::nullopt);
    row("zeta", r.canonical_hat ? std::optional(r.canonical_hat->zeta) : std::nullopt);
    os << "regime," << (r.regime ? to_string(*r.regime) : "") << '\n';
}

int cmd_fit(const FitOptions& o, std::ostream& out, std::ostream& err) {
    if (!(o.dt > 0.0)) throw DomainError("--dt must be positive");
    if (o.raw_gk && !o.ohlc) throw DomainError("--raw-gk requires --ohlc");
    if (o.vol_only && o.ohlc) throw DomainError("--vol-only and --ohlc are mutually exclusive");

    EstimateReport report;
    if (o.ohlc) {
        OhlcSchema schema{o.delimiter, o.time_col, o.open_col, o.high_col, o.low_col, o.close_col};
        const auto rows = load_ohlc_csv(o.input, schema);
        const auto bars = bars_from_rows(rows);
        const auto gk = garman_klass_variance(
            bars, o.raw_gk ? GarmanKlassForm::RawPrices : GarmanKlassForm::Log);
        if (gk.clamped > 0) {
            err << "warning: " << gk.clamped << " of " << bars.size()
                << " Garman-Klass values were negative and clamped to 0\n";
        }
        const auto records = records_from_ohlc(rows, gk.variance);
        report = estimate(annualize(build_joint_series(records, o.dt), o.annualization));
    } else if (o.vol_only) {
        CsvSchema schema{o.delimiter, o.time_col, o.price_col, o.var_col};
        report = estimate(annualize(make_vol_series(o.dt, load_variance_csv(o.input, schema)),
                                    o.annualization));
    } else {
        CsvSchema schema{o.delimiter, o.time_col, o.price_col, o.var_col};
        const auto records = load_joint_csv(o.input, schema);
        report = estimate(annualize(build_joint_series(records, o.dt), o.annualization));
    }
    report.annualization = o.annualization;

    if (!report.genericity.generic) {
        err << "note: boundary case (" << report.genericity.reason << ")\n";
    }
    return emit(o.output, out, err, [&](std::ostream& os) {
        if (o.format == "csv") {
            write_fit_csv(os, report);
        } else {
            os << report_to_json(report).dump(2) << '\n';
        }
    });
}

// ---- simulate -----------------------------------------------------------

struct SimulateOptions {
    double kappa = 0.0, theta = 0.0, gamma2 = 0.0;
    double mu = 0.0, rho = 0.0;
    double dt = 0.0;
    std::size_t n = 0;
    std::string scheme = "euler";
    std::optional<double> delta;
    std::uint64_t seed = 0;
    std::optional<double> y0;
    double x0 = 1.0;
    std::string output;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    const HestonParams hp{{o.kappa, o.theta, o.gamma2}, o.mu, o.rho};
    require_valid(hp);
    const SamplingGrid grid{o.dt, o.n};
    require_valid(grid);

    PathConfig cfg;
    cfg.y0 = o.y0;
    cfg.x0 = o.x0;
    cfg.seed = o.seed;
    if (o.scheme == "exact") {
        if (o.delta) throw DomainError("--delta applies only to --scheme euler");
        cfg.scheme = ExactScheme{};
    } else {
        cfg.scheme = EulerScheme{o.delta.value_or(o.dt / kDefaultEulerSubsteps)};
    }
    for (const auto& w : validate(cfg, o.dt)) err << "warning: " << w << '\n';

    auto dismissed = [&](const Dismissed& d) {
        err << "error: trajectory dismissed at step " << d.step << " (" << d.what
            << "); dismissed trajectories: 1 of 1\n";
        return kDismissed;
    };

    if (o.scheme == "exact") {
        const auto res = subsampled_vol_series(hp.vol, grid, cfg);
        if (const auto* d = std::get_if<Dismissed>(&res)) return dismissed(*d);
        const auto& series = std::get<VolSeries>(res);
        return emit(o.output, out, err, [&](std::ostream& os) { write_path_csv(os, series); });
    }
    const auto res = joint_euler_path(hp, grid, cfg);
    if (const auto* d = std::get_if<Dismissed>(&res)) return dismissed(*d);
    const auto& series = std::get<JointSeries>(res);
    return emit(o.output, out, err, [&](std::ostream& os) { write_path_csv(os, series); });
}

// ---- accuracy -----------------------------------------------------------

struct AccuracyOptions {
    double zeta = 0.0;
    double omega = 0.0;
    std::optional<double> tbar;
    std::string n_list;
    std::size_t trajectories = 1100;
    std::string scheme = "exact";
    int euler_substeps = kDefaultEulerSubsteps;
    std::uint64_t seed = 0;
    std::optional<unsigned> threads;
    std::string format = "csv";
    std::string output;
    std::string long_csv;
};

void write_tail_section(std::ostream& os, const AccuracyResult& result) {
    const auto& cell = result.cells.back();
    os << "\n# EXPLORATORY tail probe (zeta <= 1), N=" << cell.N << "\n";
    os << "estimator,hill_index,k,n\n";
    for (Estimator e : kAllEstimators) {
        std::vector<double> errors;
        for (double x : cell[e].samples) {
            if (!std::isnan(x)) errors.push_back(x);
        }
        os << to_string(e) << ',';
        try {
            const auto probe = tail_probe(errors, cell.N);
            os << fmt17(probe.index) << ',' << probe.k << ',' << probe.n << '\n';
        } catch (const DomainError&) {
            os << ",," << errors.size() << '\n';
        }
    }
}

int cmd_accuracy(const AccuracyOptions& o, std::ostream& out, std::ostream& err) {
    AccuracySpec spec;
    spec.canonical = {o.omega, o.zeta};
    spec.Tbar = o.tbar.value_or(0.0);
    spec.N_values = parse_n_list(o.n_list);
    spec.trajectories = o.trajectories;
    spec.scheme = o.scheme == "euler" ? SimulationScheme::Euler : SimulationScheme::Exact;
    spec.euler_substeps = o.euler_substeps;
    spec.seed = o.seed;
    spec.threads = thread_cap(o.threads, err);

    const auto result = run_accuracy(spec);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';

    std::vector<SqrtNFit> fits;
    try {
        fits = sqrtn_constants(result);
    } catch (const DomainError&) {
        // not enough N values above 1000
    }
    const bool heavy = o.zeta <= 1.0;

    if (!o.long_csv.empty()) {
        const int rc = emit(o.long_csv, out, err, [&](std::ostream& os) { write_long_csv(os, result); });
        if (rc != kOk) return rc;
    }

    return emit(o.output, out, err, [&](std::ostream& os) {
        if (o.format == "json") {
            auto j = accuracy_to_json(result, fits);
            if (heavy) {
                auto tail = nlohmann::json::object();
                tail["label"] = "EXPLORATORY";
                const auto& cell = result.cells.back();
                for (Estimator e : kAllEstimators) {
                    std::vector<double> errors;
                    for (double x : cell[e].samples) {
                        if (!std::isnan(x)) errors.push_back(x);
                    }
                    try {
                        const auto p = tail_probe(errors, cell.N);
                        tail[to_string(e)] = {{"hill_index", p.index}, {"k", p.k}, {"n", p.n}, {"N", p.N}};
                    } catch (const DomainError& ex) {
                        tail[to_string(e)] = {{"available", false}, {"reason", ex.what()}};
                    }
                }
                j["tail_probe"] = tail;
            }
            os << j.dump(2) << '\n';
            return;
        }
        os << "# relative RMS error (percent), zeta=" << fmt17(o.zeta)
           << " omega=" << fmt17(o.omega) << " Tbar=" << fmt17(spec.sampling_interval())
           << " trajectories=" << spec.trajectories << '\n';
        write_sigma_table(os, result);
        os << "generic_fraction";
        for (const auto& cell : result.cells) os << ',' << fmt17(cell.generic_fraction);
        os << '\n';
        if (!fits.empty()) {
            os << "\n# sqrt(N) constants over N > 1000\n";
            os << "estimator,C,residual,points\n";
            for (const auto& f : fits) {
                os << to_string(f.estimator) << ',' << fmt17(f.C) << ',' << fmt17(f.residual) << ','
                   << f.points << '\n';
            }
        }
        if (heavy) write_tail_section(os, result);
    });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Closed-form approximate MLE for Heston volatility SDEs", "heston_mle"};
    app.require_subcommand(1);

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Estimate Heston parameters from a CSV file");
    fit_cmd->add_option("input", fit.input, "Input CSV")->required();
    fit_cmd->add_option("--dt", fit.dt, "Sub-sampling interval T")->required();
    fit_cmd->add_option("--annualization", fit.annualization, "Variance multiplier A")
        ->capture_default_str();
    fit_cmd->add_flag("--ohlc", fit.ohlc, "Input has t,open,high,low,close; variance via Garman-Klass");
    fit_cmd->add_flag("--raw-gk", fit.raw_gk, "Raw-price Garman-Klass expression");
    fit_cmd->add_flag("--vol-only", fit.vol_only, "Variance column only; skip drift and correlation");
    fit_cmd->add_option("--time-col", fit.time_col)->capture_default_str();
    fit_cmd->add_option("--price-col", fit.price_col)->capture_default_str();
    fit_cmd->add_option("--var-col", fit.var_col)->capture_default_str();
    fit_cmd->add_option("--open-col", fit.open_col)->capture_default_str();
    fit_cmd->add_option("--high-col", fit.high_col)->capture_default_str();
    fit_cmd->add_option("--low-col", fit.low_col)->capture_default_str();
    fit_cmd->add_option("--close-col", fit.close_col)->capture_default_str();
    fit_cmd->add_option("--delimiter", fit.delimiter)->capture_default_str();
    fit_cmd->add_option("--output,-o", fit.output, "Output file (default stdout)");
    fit_cmd->add_option("--format", fit.format)
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate a sub-sampled Heston path");
    sim_cmd->add_option("--kappa", sim.kappa)->required();
    sim_cmd->add_option("--theta", sim.theta)->required();
    sim_cmd->add_option("--gamma2", sim.gamma2)->required();
    sim_cmd->add_option("--mu", sim.mu)->capture_default_str();
    sim_cmd->add_option("--rho", sim.rho)->capture_default_str();
    sim_cmd->add_option("--dt", sim.dt, "Sub-sampling interval T")->required();
    sim_cmd->add_option("--n", sim.n, "Number of increments N")->required();
    sim_cmd->add_option("--scheme", sim.scheme, "euler (joint price and variance) or exact (variance)")
        ->check(CLI::IsMember({"euler", "exact"}))
        ->capture_default_str();
    sim_cmd->add_option("--delta", sim.delta, "Euler step (default dt/20)");
    sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
    sim_cmd->add_option("--y0", sim.y0, "Initial variance (default: stationary draw)");
    sim_cmd->add_option("--x0", sim.x0, "Initial price")->capture_default_str();
    sim_cmd->add_option("--output,-o", sim.output, "Output file (default stdout)");

    AccuracyOptions acc;
    auto* acc_cmd = app.add_subcommand("accuracy", "Monte Carlo accuracy of the estimators");
    acc_cmd->add_option("--zeta", acc.zeta)->required();
    acc_cmd->add_option("--omega", acc.omega)->required();
    acc_cmd->add_option("--tbar", acc.tbar, "Canonical interval (default -log omega)");
    acc_cmd->add_option("--n-list", acc.n_list, "Comma-separated N values")->required();
    acc_cmd->add_option("--trajectories", acc.trajectories)->capture_default_str();
    acc_cmd->add_option("--scheme", acc.scheme)
        ->check(CLI::IsMember({"exact", "euler"}))
        ->capture_default_str();
    acc_cmd->add_option("--euler-substeps", acc.euler_substeps)->capture_default_str();
    acc_cmd->add_option("--seed", acc.seed)->capture_default_str();
    acc_cmd->add_option("--threads", acc.threads, "Worker cap (env HESTON_MLE_THREADS)");
    acc_cmd->add_option("--format", acc.format)
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    acc_cmd->add_option("--output,-o", acc.output, "Output file (default stdout)");
    acc_cmd->add_option("--long-csv", acc.long_csv, "Also write estimator,N,sigma,bias,generic_fraction");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (*fit_cmd) return cmd_fit(fit, out, err);
        if (*sim_cmd) return cmd_simulate(sim, out, err);
        return cmd_accuracy(acc, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace hestonmle::cli
