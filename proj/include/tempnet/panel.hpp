#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tempnet {

/// Row-major so each stock's time series is contiguous.
using MatrixRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Aligned panel of adjusted closing prices, one row per stock.
/// Dates are ISO-8601, strictly increasing; all prices strictly positive.
struct PricePanel {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;
    MatrixRM prices; // n_stocks x n_dates

    int n_stocks() const { return static_cast<int>(tickers.size()); }
    int n_dates() const { return static_cast<int>(dates.size()); }
    void validate() const; // throws ValidationError on any broken invariant
};

/// Log returns r_i(t) = ln p_i(t+1) - ln p_i(t). One fewer column than the
/// price panel; each return is labeled by the later of its two dates.
struct ReturnPanel {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;
    MatrixRM returns; // n_stocks x n_obs

    int n_stocks() const { return static_cast<int>(tickers.size()); }
    int n_obs() const { return static_cast<int>(dates.size()); }
    void validate() const;
};

/// Parameters of the synthetic one-factor market generator.
struct FactorSpec {
    int n_stocks = 0;
    int n_days = 0;              // price dates; generates n_days - 1 returns
    std::vector<double> betas;   // per-stock factor loadings, size n_stocks
    double factor_vol = 0.01;
    double idio_vol = 0.01;
    std::uint64_t seed = 0;

    void validate() const;
};

struct AlignmentPolicy {
    double min_coverage = 0.9; // stocks below this fraction of dates are dropped
};

/// Ingests wide (`date,TICK1,TICK2,...`) or long (`date,ticker,close`) CSV.
/// The layout is detected from the header. Stocks with insufficient coverage
/// are dropped, remaining gaps forward-filled then back-filled.
PricePanel load_prices(std::istream& in, const AlignmentPolicy& policy = {});
PricePanel load_prices_file(const std::string& path, const AlignmentPolicy& policy = {});

ReturnPanel log_returns(const PricePanel& panel);

/// Returns r_i(t) = beta_i * f(t) + eps_i(t) with f, eps i.i.d. Gaussian;
/// prices are cumulative exponentials anchored at 100. Deterministic per seed.
PricePanel synth_one_factor(const FactorSpec& spec);

void write_wide_csv(const PricePanel& panel, std::ostream& out);

/// Contiguous slice [begin, begin + len) of the return observations.
ReturnPanel slice_returns(const ReturnPanel& panel, int begin, int len);

/// Sub-panel restricted to the given stock indices, in the given order.
ReturnPanel select_stocks(const ReturnPanel& panel, const std::vector<int>& indices);

} // namespace tempnet
