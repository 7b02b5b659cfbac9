#include "hestonmle/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>

#include "hestonmle/errors.hpp"

namespace hestonmle {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(delimiter, start);
        fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

// Reads the header and maps requested column names to field positions.
class CsvReader {
public:
    CsvReader(std::istream& in, char delimiter, std::vector<std::string> columns)
        : in_(in), delimiter_(delimiter) {
        std::string header;
        if (!std::getline(in_, header)) throw ParseError("missing header row", 1);
        line_no_ = 1;
        if (header.size() >= 3 && header.compare(0, 3, "\xEF\xBB\xBF") == 0) header.erase(0, 3);
        const auto names = split(header, delimiter_);
        for (const auto& col : columns) {
            std::optional<std::size_t> found;
            for (std::size_t i = 0; i < names.size(); ++i) {
                if (names[i] == col) found = i;
            }
            if (!found) throw ParseError("missing column '" + col + "'", 1);
            positions_.push_back(*found);
        }
        width_ = names.size();
    }

    // Next non-empty row as numbers in requested-column order; false at EOF.
    bool next(std::vector<double>& out) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (trim(line).empty()) continue;
            const auto fields = split(line, delimiter_);
            if (fields.size() != width_) {
                throw ParseError("expected " + std::to_string(width_) + " fields, found " +
                                     std::to_string(fields.size()),
                                 line_no_);
            }
            out.clear();
            for (std::size_t pos : positions_) out.push_back(parse_number(fields[pos]));
            return true;
        }
        return false;
    }

    std::size_t line() const noexcept { return line_no_; }

private:
    double parse_number(std::string_view field) const {
        double value = 0.0;
        const char* first = field.data();
        const char* last = field.data() + field.size();
        if (!field.empty() && *first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
            throw ParseError("cannot parse number '" + std::string(field) + "'", line_no_);
        }
        return value;
    }

    std::istream& in_;
    char delimiter_;
    std::vector<std::size_t> positions_;
    std::size_t width_ = 0;
    std::size_t line_no_ = 0;
};

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

void require_increasing(double previous, double t, std::size_t count, std::size_t line) {
    if (count > 0 && !(t > previous)) throw ParseError("time column must be strictly increasing", line);
}

// divide rather than multiply by 1/A so a round trip stays within one ulp
VolSeries scale_variance(const VolSeries& s, double A, bool inverse) {
    VolSeries out = s;
    for (double& v : out.values) v = inverse ? v / A : v * A;
    return out;
}

JointSeries scale_variance(const JointSeries& s, double A, bool inverse) {
    return {scale_variance(s.vol, A, inverse), s.prices};
}

void require_factor(double A) {
    if (!(A > 0.0) || !std::isfinite(A)) throw DomainError("annualization factor A must be positive");
}

}  // namespace

std::vector<MarketRecord> parse_joint_csv(std::istream& in, const CsvSchema& schema) {
    CsvReader reader(in, schema.delimiter, {schema.time, schema.price, schema.variance});
    std::vector<MarketRecord> records;
    std::vector<double> row;
    while (reader.next(row)) {
        MarketRecord r{records.size(), row[0], row[1], row[2]};
        require_increasing(records.empty() ? 0.0 : records.back().t, r.t, records.size(), reader.line());
        if (!(r.price > 0.0)) throw ParseError("price must be positive", reader.line());
        if (r.squared_vol < 0.0) throw ParseError("squared volatility must be non-negative", reader.line());
        records.push_back(r);
    }
    return records;
}

std::vector<MarketRecord> load_joint_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    auto in = open_or_throw(path);
    return parse_joint_csv(in, schema);
}

std::vector<double> parse_variance_csv(std::istream& in, const CsvSchema& schema) {
    CsvReader reader(in, schema.delimiter, {schema.time, schema.variance});
    std::vector<double> values;
    std::vector<double> row;
    double last_t = 0.0;
    while (reader.next(row)) {
        require_increasing(last_t, row[0], values.size(), reader.line());
        last_t = row[0];
        if (!(row[1] > 0.0)) throw ParseError("squared volatility must be positive", reader.line());
        values.push_back(row[1]);
    }
    return values;
}

std::vector<double> load_variance_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    auto in = open_or_throw(path);
    return parse_variance_csv(in, schema);
}

std::vector<OhlcRow> parse_ohlc_csv(std::istream& in, const OhlcSchema& schema) {
    CsvReader reader(in, schema.delimiter,
                     {schema.time, schema.open, schema.high, schema.low, schema.close});
    std::vector<OhlcRow> rows;
    std::vector<double> v;
    while (reader.next(v)) {
        OhlcRow r{rows.size(), v[0], v[1], v[2], v[3], v[4]};
        require_increasing(rows.empty() ? 0.0 : rows.back().t, r.t, rows.size(), reader.line());
        if (!(r.open > 0.0 && r.high > 0.0 && r.low > 0.0 && r.close > 0.0)) {
            throw ParseError("OHLC prices must be positive", reader.line());
        }
        if (!(r.low <= r.high && r.low <= r.close && r.close <= r.high)) {
            throw ParseError("OHLC bar violates low <= close <= high", reader.line());
        }
        rows.push_back(r);
    }
    return rows;
}

std::vector<OhlcRow> load_ohlc_csv(const std::filesystem::path& path, const OhlcSchema& schema) {
    auto in = open_or_throw(path);
    return parse_ohlc_csv(in, schema);
}

std::vector<OhlcBar> bars_from_rows(std::span<const OhlcRow> rows) {
    std::vector<OhlcBar> bars;
    bars.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double reference = i == 0 ? rows[i].open : rows[i - 1].close;
        bars.push_back({reference, rows[i].high, rows[i].low, rows[i].close});
    }
    return bars;
}

GarmanKlassResult garman_klass_variance(std::span<const OhlcBar> bars, GarmanKlassForm form) {
    GarmanKlassResult out;
    out.variance.reserve(bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& b = bars[i];
        if (!(b.open > 0.0 && b.high > 0.0 && b.low > 0.0 && b.last > 0.0)) {
            throw NonPositiveValue("non-positive OHLC price", i);
        }
        double range = 0.0;
        double drift = 0.0;
        if (form == GarmanKlassForm::Log) {
            range = std::log(b.high / b.low);
            drift = std::log(b.last / b.open);
        } else {
            range = b.high - b.low;
            drift = b.last;
        }
        const double value = 0.5 * range * range - 0.386 * drift * drift;
        if (value < 0.0) ++out.clamped;
        out.variance.push_back(std::max(value, 0.0));
    }
    return out;
}

std::vector<MarketRecord> records_from_ohlc(std::span<const OhlcRow> rows,
                                            std::span<const double> variance) {
    if (rows.size() != variance.size()) throw DomainError("OHLC rows and variances differ in length");
    std::vector<MarketRecord> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.push_back({i, rows[i].t, rows[i].close, variance[i]});
    }
    return out;
}

VolSeries annualize(const VolSeries& series, double A) {
    require_factor(A);
    return scale_variance(series, A, false);
}

VolSeries deannualize(const VolSeries& series, double A) {
    require_factor(A);
    return scale_variance(series, A, true);
}

JointSeries annualize(const JointSeries& series, double A) {
    require_factor(A);
    return scale_variance(series, A, false);
}

JointSeries deannualize(const JointSeries& series, double A) {
    require_factor(A);
    return scale_variance(series, A, true);
}

JointSeries build_joint_series(std::span<const MarketRecord> records, double T) {
    if (records.size() < 3) throw DomainError("at least 3 records are required (N >= 2)");
    if (!(T > 0.0)) throw DomainError("sub-sampling interval T must be positive");
    std::vector<double> variances;
    std::vector<double> prices;
    variances.reserve(records.size());
    prices.reserve(records.size());
    for (const auto& r : records) {
        if (!(r.squared_vol > 0.0)) throw NonPositiveValue("zero or negative variance in record", r.index);
        if (!(r.price > 0.0)) throw NonPositiveValue("non-positive price in record", r.index);
        variances.push_back(r.squared_vol);
        prices.push_back(r.price);
    }
    return make_joint_series(T, std::move(variances), std::move(prices));
}

}  // namespace hestonmle
