#include "tempnet/panel.hpp"

#include "tempnet/csv.hpp"
#include "tempnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

namespace tempnet {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

bool is_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

// Days since 1970-01-01 -> ISO date (civil calendar arithmetic).
std::string civil_from_days(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04ld-%02u-%02u", m <= 2 ? y + 1 : y, m, d);
    return buf;
}

long days_from_civil(long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

// Deterministic standard normal stream: Box-Muller over mt19937_64.
// std::normal_distribution is implementation-defined; this is not.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    double uniform01() {
        return (engine_() >> 11) * 0x1.0p-53; // 53 uniform bits in [0,1)
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct RawTable {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;          // sorted unique
    std::vector<std::vector<double>> values; // [stock][date], NaN = missing
};

void check_date_cell(const std::string& date, long line) {
    if (!is_iso_date(date))
        throw IoError("cannot parse date '" + date + "' at line " +
                      std::to_string(line) + ", column 1 (expected YYYY-MM-DD)");
}

RawTable parse_wide(const std::vector<csv::Row>& rows) {
    const auto& header = rows.front().cells;
    RawTable table;
    table.tickers.assign(header.begin() + 1, header.end());
    const int n = static_cast<int>(table.tickers.size());

    std::map<std::string, std::vector<double>> by_date;
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (static_cast<int>(row.cells.size()) != n + 1)
            throw IoError("row at line " + std::to_string(row.line) + " has " +
                          std::to_string(row.cells.size()) + " cells, expected " +
                          std::to_string(n + 1));
        check_date_cell(row.cells[0], row.line);
        if (by_date.count(row.cells[0]))
            throw IoError("duplicate date '" + row.cells[0] + "' at line " +
                          std::to_string(row.line));
        std::vector<double> vals(n, kMissing);
        for (int j = 0; j < n; ++j) {
            const std::string& cell = row.cells[j + 1];
            if (cell.empty()) continue;
            vals[j] = csv::parse_double(cell, row.line, j + 2);
        }
        by_date.emplace(row.cells[0], std::move(vals));
    }

    table.values.assign(n, {});
    for (auto& [date, vals] : by_date) {
        table.dates.push_back(date);
        for (int j = 0; j < n; ++j) table.values[j].push_back(vals[j]);
    }
    return table;
}

RawTable parse_long(const std::vector<csv::Row>& rows) {
    struct Obs {
        std::string date;
        double value;
        long line;
    };
    std::vector<std::string> tickers; // first-appearance order
    std::map<std::string, int> ticker_index;
    std::vector<std::vector<Obs>> obs;

    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.cells.size() != 3)
            throw IoError("row at line " + std::to_string(row.line) +
                          " has " + std::to_string(row.cells.size()) +
                          " cells, expected 3 (date,ticker,close)");
        check_date_cell(row.cells[0], row.line);
        const double v = csv::parse_double(row.cells[2], row.line, 3);
        auto [it, inserted] = ticker_index.emplace(row.cells[1], tickers.size());
        if (inserted) {
            tickers.push_back(row.cells[1]);
            obs.emplace_back();
        }
        obs[it->second].push_back({row.cells[0], v, row.line});
    }

    std::map<std::string, int> date_index;
    for (const auto& per_stock : obs)
        for (const auto& o : per_stock) date_index.emplace(o.date, 0);
    RawTable table;
    table.tickers = tickers;
    for (auto& [date, idx] : date_index) {
        idx = static_cast<int>(table.dates.size());
        table.dates.push_back(date);
    }
    table.values.assign(tickers.size(),
                        std::vector<double>(table.dates.size(), kMissing));
    for (size_t i = 0; i < obs.size(); ++i) {
        for (const auto& o : obs[i]) {
            double& slot = table.values[i][date_index[o.date]];
            if (!std::isnan(slot))
                throw IoError("duplicate observation for ticker '" + tickers[i] +
                              "' on " + o.date + " at line " + std::to_string(o.line));
            slot = o.value;
        }
    }
    return table;
}

PricePanel align(const RawTable& table, const AlignmentPolicy& policy) {
    const int n_dates = static_cast<int>(table.dates.size());
    std::vector<int> kept;
    for (size_t i = 0; i < table.tickers.size(); ++i) {
        int present = 0;
        for (double v : table.values[i])
            if (!std::isnan(v)) ++present;
        if (n_dates > 0 &&
            static_cast<double>(present) / n_dates >= policy.min_coverage)
            kept.push_back(static_cast<int>(i));
    }
    if (kept.size() < 2 || n_dates < 3)
        throw ValidationError("insufficient data after alignment: " +
                              std::to_string(kept.size()) + " stocks, " +
                              std::to_string(n_dates) + " dates (need >= 2 and >= 3)");

    PricePanel panel;
    panel.dates = table.dates;
    panel.prices.resize(static_cast<int>(kept.size()), n_dates);
    for (size_t r = 0; r < kept.size(); ++r) {
        panel.tickers.push_back(table.tickers[kept[r]]);
        std::vector<double> series = table.values[kept[r]];
        for (int t = 1; t < n_dates; ++t) // forward fill
            if (std::isnan(series[t])) series[t] = series[t - 1];
        for (int t = n_dates - 2; t >= 0; --t) // back fill
            if (std::isnan(series[t])) series[t] = series[t + 1];
        for (int t = 0; t < n_dates; ++t) {
            if (std::isnan(series[t]))
                throw ValidationError("stock '" + panel.tickers.back() +
                                      "' has no observations at all");
            panel.prices(static_cast<int>(r), t) = series[t];
        }
    }
    panel.validate();
    return panel;
}

} // namespace

void PricePanel::validate() const {
    if (n_stocks() < 1 || n_dates() < 1)
        throw ValidationError("empty price panel");
    if (prices.rows() != n_stocks() || prices.cols() != n_dates())
        throw ValidationError("price matrix shape does not match tickers/dates");
    for (int t = 1; t < n_dates(); ++t)
        if (!(dates[t - 1] < dates[t]))
            throw ValidationError("dates not strictly increasing at '" + dates[t] + "'");
    for (int i = 0; i < n_stocks(); ++i)
        for (int t = 0; t < n_dates(); ++t)
            if (!(prices(i, t) > 0.0) || !std::isfinite(prices(i, t)))
                throw ValidationError("non-positive price for stock '" + tickers[i] +
                                      "' on " + dates[t]);
}

void ReturnPanel::validate() const {
    if (n_stocks() < 1 || n_obs() < 1)
        throw ValidationError("empty return panel");
    if (returns.rows() != n_stocks() || returns.cols() != n_obs())
        throw ValidationError("return matrix shape does not match tickers/dates");
    if (!returns.allFinite())
        throw ValidationError("return panel contains non-finite values");
}

void FactorSpec::validate() const {
    if (n_stocks < 2) throw ValidationError("factor spec needs at least 2 stocks");
    if (n_days < 2) throw ValidationError("factor spec needs at least 2 days");
    if (!(factor_vol > 0.0) || !(idio_vol > 0.0))
        throw ValidationError("factor spec volatilities must be positive");
    if (!betas.empty() && static_cast<int>(betas.size()) != n_stocks)
        throw ValidationError("factor spec betas size does not match n_stocks");
}

PricePanel load_prices(std::istream& in, const AlignmentPolicy& policy) {
    const auto rows = csv::read_rows(in);
    if (rows.empty()) throw IoError("empty input file");
    const auto& header = rows.front().cells;
    if (header.empty() || header[0] != "date")
        throw IoError("first header column must be 'date', got '" +
                      (header.empty() ? std::string() : header[0]) + "' at line " +
                      std::to_string(rows.front().line));
    if (header.size() < 2)
        throw IoError("header names no tickers at line " +
                      std::to_string(rows.front().line));
    const bool long_format =
        header.size() == 3 && header[1] == "ticker" && header[2] == "close";
    RawTable table = long_format ? parse_long(rows) : parse_wide(rows);
    return align(table, policy);
}

PricePanel load_prices_file(const std::string& path, const AlignmentPolicy& policy) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return load_prices(in, policy);
}

ReturnPanel log_returns(const PricePanel& panel) {
    panel.validate();
    const int n = panel.n_stocks();
    const int obs = panel.n_dates() - 1;
    if (obs < 1) throw ValidationError("need at least 2 price dates for returns");
    ReturnPanel out;
    out.tickers = panel.tickers;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    out.returns.resize(n, obs);
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < obs; ++t) {
            const double p0 = panel.prices(i, t);
            const double p1 = panel.prices(i, t + 1);
            if (!(p0 > 0.0) || !(p1 > 0.0))
                throw ValidationError("non-positive price for stock '" +
                                      panel.tickers[i] + "' on " + panel.dates[t + 1]);
            out.returns(i, t) = std::log(p1) - std::log(p0);
        }
    }
    return out;
}

PricePanel synth_one_factor(const FactorSpec& spec) {
    spec.validate();
    std::vector<double> betas = spec.betas;
    if (betas.empty()) betas.assign(spec.n_stocks, 1.0);

    GaussianRng rng(spec.seed);
    const int n = spec.n_stocks;
    const int n_ret = spec.n_days - 1;

    PricePanel panel;
    panel.prices.resize(n, spec.n_days);
    panel.prices.col(0).setConstant(100.0);
    for (int t = 0; t < n_ret; ++t) {
        const double f = spec.factor_vol * rng.next();
        for (int i = 0; i < n; ++i) {
            const double r = betas[i] * f + spec.idio_vol * rng.next();
            panel.prices(i, t + 1) = panel.prices(i, t) * std::exp(r);
        }
    }

    const long epoch = days_from_civil(2000, 1, 3);
    for (int t = 0; t < spec.n_days; ++t)
        panel.dates.push_back(civil_from_days(epoch + t));
    for (int i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "S%03d", i);
        panel.tickers.emplace_back(buf);
    }
    panel.validate();
    return panel;
}

void write_wide_csv(const PricePanel& panel, std::ostream& out) {
    out << "date";
    for (const auto& t : panel.tickers) out << ',' << t;
    out << '\n';
    for (int t = 0; t < panel.n_dates(); ++t) {
        out << panel.dates[t];
        for (int i = 0; i < panel.n_stocks(); ++i)
            out << ',' << csv::format_double(panel.prices(i, t));
        out << '\n';
    }
}

ReturnPanel slice_returns(const ReturnPanel& panel, int begin, int len) {
    if (begin < 0 || len < 1 || begin + len > panel.n_obs())
        throw ValidationError("return slice [" + std::to_string(begin) + ", " +
                              std::to_string(begin + len) + ") out of range for " +
                              std::to_string(panel.n_obs()) + " observations");
    ReturnPanel out;
    out.tickers = panel.tickers;
    out.dates.assign(panel.dates.begin() + begin, panel.dates.begin() + begin + len);
    out.returns = panel.returns.block(0, begin, panel.n_stocks(), len);
    return out;
}

ReturnPanel select_stocks(const ReturnPanel& panel, const std::vector<int>& indices) {
    ReturnPanel out;
    out.dates = panel.dates;
    out.returns.resize(static_cast<int>(indices.size()), panel.n_obs());
    std::vector<char> seen(panel.n_stocks(), 0);
    for (size_t k = 0; k < indices.size(); ++k) {
        const int i = indices[k];
        if (i < 0 || i >= panel.n_stocks())
            throw ValidationError("stock index " + std::to_string(i) + " out of range");
        if (seen[i])
            throw ValidationError("stock index " + std::to_string(i) + " repeats");
        seen[i] = 1;
        out.tickers.push_back(panel.tickers[i]);
        out.returns.row(static_cast<int>(k)) = panel.returns.row(i);
    }
    return out;
}

} // namespace tempnet
