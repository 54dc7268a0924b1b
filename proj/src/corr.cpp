#include "tempnet/corr.hpp"

#include "tempnet/errors.hpp"
#include "tempnet/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace tempnet {

namespace {

// Both the scalar estimator and the rolling path funnel through this
// combine step so a window entry recomputed from raw slices matches the
// sequence entry bit for bit.
struct SeriesSums {
    double s = 0.0;  // sum x
    double ss = 0.0; // sum x^2
};

SeriesSums series_sums(const double* x, long n) {
    SeriesSums out;
    for (long k = 0; k < n; ++k) {
        out.s += x[k];
        out.ss += x[k] * x[k];
    }
    return out;
}

double cross_sum(const double* x, const double* y, long n) {
    double s = 0.0;
    for (long k = 0; k < n; ++k) s += x[k] * y[k];
    return s;
}

double variance_term(const SeriesSums& s, long n) { return s.ss - s.s * s.s / n; }

double combine(const SeriesSums& sx, const SeriesSums& sy, double sxy, long n) {
    const double vx = variance_term(sx, n);
    const double vy = variance_term(sy, n);
    const double cov = sxy - sx.s * sy.s / n;
    const double rho = cov / std::sqrt(vx * vy);
    return std::clamp(rho, -1.0, 1.0);
}

} // namespace

void WindowConfig::validate(int n_obs) const {
    if (delta < 2) throw ValidationError("window delta must be >= 2");
    if (step < 1) throw ValidationError("window step must be >= 1");
    if (delta > n_obs)
        throw ValidationError("window delta " + std::to_string(delta) +
                              " exceeds panel length " + std::to_string(n_obs));
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ValidationError("pearson requires equal-length series");
    const long n = static_cast<long>(x.size());
    if (n < 2) throw ValidationError("pearson requires series length >= 2");
    const SeriesSums sx = series_sums(x.data(), n);
    const SeriesSums sy = series_sums(y.data(), n);
    if (variance_term(sx, n) <= 0.0 || variance_term(sy, n) <= 0.0)
        throw NumericError("undefined correlation: zero variance series");
    return combine(sx, sy, cross_sum(x.data(), y.data(), n), n);
}

long window_count(long n_obs, long delta, long step) {
    if (delta < 1 || step < 1) throw ValidationError("delta and step must be >= 1");
    if (n_obs < delta)
        throw ValidationError("panel length " + std::to_string(n_obs) +
                              " shorter than window " + std::to_string(delta));
    return (n_obs - delta) / step + 1;
}

CorrelationSequence rolling_correlations(const ReturnPanel& panel,
                                         const WindowConfig& config) {
    const int n = panel.n_stocks();
    const int n_obs = panel.n_obs();
    config.validate(n_obs);
    const int n_windows =
        static_cast<int>(window_count(n_obs, config.delta, config.step));

    CorrelationSequence seq;
    seq.config = config;
    if (config.delta < n)
        seq.warnings.push_back("window delta " + std::to_string(config.delta) +
                               " is smaller than the " + std::to_string(n) +
                               "-stock universe; correlation matrices will be singular");
    seq.windows.assign(n_windows, Eigen::MatrixXd());
    seq.anchors.resize(n_windows);
    std::vector<std::vector<DegeneratePair>> degenerate(n_windows);

    parallel_for_indexed(n_windows, [&](int t) {
        const long begin = static_cast<long>(t) * config.step;
        const long len = config.delta;
        seq.anchors[t] = panel.dates[begin + len - 1];

        std::vector<SeriesSums> sums(n);
        std::vector<char> flat(n, 0);
        for (int i = 0; i < n; ++i) {
            sums[i] = series_sums(&panel.returns(i, begin), len);
            flat[i] = variance_term(sums[i], len) <= 0.0;
        }

        Eigen::MatrixXd rho = Eigen::MatrixXd::Identity(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double value = 0.0;
                if (flat[i] || flat[j]) {
                    degenerate[t].push_back({t, i, j});
                } else {
                    const double sxy =
                        cross_sum(&panel.returns(i, begin), &panel.returns(j, begin), len);
                    value = combine(sums[i], sums[j], sxy, len);
                }
                rho(i, j) = value;
                rho(j, i) = value;
            }
        }
        seq.windows[t] = std::move(rho);
    });

    int windows_hit = 0;
    for (auto& d : degenerate) {
        windows_hit += !d.empty();
        seq.degenerate.insert(seq.degenerate.end(), d.begin(), d.end());
    }
    if (!seq.degenerate.empty())
        seq.warnings.push_back(
            std::to_string(seq.degenerate.size()) +
            " zero-variance pair(s) set to correlation 0 across " +
            std::to_string(windows_hit) + " window(s)");
    return seq;
}

} // namespace tempnet
