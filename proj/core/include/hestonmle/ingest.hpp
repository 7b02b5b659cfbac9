#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hestonmle/params.hpp"

namespace hestonmle {

/// One row of a joint price / variance file.
struct MarketRecord {
    std::size_t index = 0;    // 0-based row index
    double t = 0.0;
    double price = 0.0;       // > 0
    double squared_vol = 0.0; // >= 0
};

/// Declared layout of a joint CSV file. Columns are matched by header name.
struct CsvSchema {
    char delimiter = ',';
    std::string time = "t";
    std::string price = "price";
    std::string variance = "var";
};

struct OhlcSchema {
    char delimiter = ',';
    std::string time = "t";
    std::string open = "open";
    std::string high = "high";
    std::string low = "low";
    std::string close = "close";
};

struct OhlcRow {
    std::size_t index = 0;
    double t = 0.0;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
};

/// High, low and last price of one bar, plus the reference price O used for
/// the close-to-open term (the previous bar's last price).
struct OhlcBar {
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double last = 0.0;
};

std::vector<MarketRecord> parse_joint_csv(std::istream& in, const CsvSchema& schema = {});
std::vector<MarketRecord> load_joint_csv(const std::filesystem::path& path,
                                         const CsvSchema& schema = {});

/// Time and variance columns only (the price column of the schema is ignored).
/// Variances must be positive.
std::vector<double> parse_variance_csv(std::istream& in, const CsvSchema& schema = {});
std::vector<double> load_variance_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

std::vector<OhlcRow> parse_ohlc_csv(std::istream& in, const OhlcSchema& schema = {});
std::vector<OhlcRow> load_ohlc_csv(const std::filesystem::path& path, const OhlcSchema& schema = {});

/// Bars with O set to the previous row's close; the first bar uses its own open.
std::vector<OhlcBar> bars_from_rows(std::span<const OhlcRow> rows);

enum class GarmanKlassForm {
    Log,           // 0.5 ln(H/L)^2 - 0.386 ln(Q/O)^2
    RawPrices,     // 0.5 (H - L)^2 - 0.386 Q^2 on raw prices
};

struct GarmanKlassResult {
    std::vector<double> variance;  // per bar, clamped at 0
    std::size_t clamped = 0;       // bars where the raw value was negative
};

GarmanKlassResult garman_klass_variance(std::span<const OhlcBar> bars,
                                        GarmanKlassForm form = GarmanKlassForm::Log);

/// Joint records from OHLC rows: price = close, variance = per-bar estimate.
std::vector<MarketRecord> records_from_ohlc(std::span<const OhlcRow> rows,
                                            std::span<const double> variance);

/// Multiply (or divide) every variance by A > 0; prices are untouched.
VolSeries annualize(const VolSeries& series, double A);
VolSeries deannualize(const VolSeries& series, double A);
JointSeries annualize(const JointSeries& series, double A);
JointSeries deannualize(const JointSeries& series, double A);

/// JointSeries with N = records.size() - 1 over interval T. Needs at least 3
/// records; a zero variance is rejected with its row index.
JointSeries build_joint_series(std::span<const MarketRecord> records, double T);

}  // namespace hestonmle
