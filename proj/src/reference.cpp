#include "tempnet/reference.hpp"

#include "tempnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tempnet::reference {

namespace {

// Plain left-to-right sums, matching the accumulation order of the rolling
// kernel so results agree bit for bit.
void sums(const double* x, long n, double* s, double* ss) {
    *s = 0.0;
    *ss = 0.0;
    for (long t = 0; t < n; ++t) {
        *s += x[t];
        *ss += x[t] * x[t];
    }
}

} // namespace

CorrelationSequence rolling_correlations(const ReturnPanel& panel,
                                         const WindowConfig& config) {
    const int n = panel.n_stocks();
    config.validate(panel.n_obs());
    const int n_windows = static_cast<int>(
        window_count(panel.n_obs(), config.delta, config.step));

    CorrelationSequence seq;
    seq.config = config;
    if (config.delta < n)
        seq.warnings.push_back("window delta " + std::to_string(config.delta) +
                               " is smaller than the " + std::to_string(n) +
                               "-stock universe; correlation matrices will be singular");
    seq.windows.assign(n_windows, Eigen::MatrixXd());
    seq.anchors.resize(n_windows);

    const long len = config.delta;
    std::vector<double> s(n), ss(n);
    for (int t = 0; t < n_windows; ++t) {
        const long begin = static_cast<long>(t) * config.step;
        seq.anchors[t] = panel.dates[begin + len - 1];
        std::vector<char> flat(n, 0);
        for (int i = 0; i < n; ++i) {
            sums(&panel.returns(i, begin), len, &s[i], &ss[i]);
            flat[i] = (ss[i] - s[i] * s[i] / static_cast<double>(len)) <= 0.0;
        }
        Eigen::MatrixXd rho = Eigen::MatrixXd::Identity(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double value = 0.0;
                if (flat[i] || flat[j]) {
                    seq.degenerate.push_back({t, i, j});
                } else {
                    double sxy = 0.0;
                    const double* xi = &panel.returns(i, begin);
                    const double* xj = &panel.returns(j, begin);
                    for (long k = 0; k < len; ++k) sxy += xi[k] * xj[k];
                    const double vx = ss[i] - s[i] * s[i] / static_cast<double>(len);
                    const double vy = ss[j] - s[j] * s[j] / static_cast<double>(len);
                    value = (sxy - s[i] * s[j] / static_cast<double>(len)) /
                            std::sqrt(vx * vy);
                    value = std::clamp(value, -1.0, 1.0);
                }
                rho(i, j) = value;
                rho(j, i) = value;
            }
        }
        seq.windows[t] = std::move(rho);
    }
    return seq;
}

std::vector<PlanarGraph> pmfg_sequence(const CorrelationSequence& seq) {
    std::vector<PlanarGraph> graphs;
    graphs.reserve(seq.n_windows());
    for (const auto& window : seq.windows) graphs.push_back(build_pmfg(window));
    return graphs;
}

std::vector<ArimaFit> fit_arima_batch(const Eigen::MatrixXd& rows,
                                      const OrderGrid& grid) {
    std::vector<ArimaFit> fits;
    fits.reserve(rows.rows());
    for (int i = 0; i < rows.rows(); ++i) {
        std::vector<double> series(rows.cols());
        for (int t = 0; t < rows.cols(); ++t) series[t] = rows(i, t);
        fits.push_back(fit_arima(series, grid));
        fits.back().stock = i;
    }
    return fits;
}

void supra_multiply(const SupraEvolutionMatrix& supra, const Eigen::VectorXd& x,
                    Eigen::VectorXd& y) {
    const long d = supra.dim();
    if (x.size() != d) throw ValidationError("vector length mismatch");
    y.resize(d);
    const int lags = static_cast<int>(supra.couplings.size());
    for (long r = 0; r < d; ++r) {
        const int layer = static_cast<int>(r / supra.n);
        const int i = static_cast<int>(r % supra.n);
        const long base = static_cast<long>(layer) * supra.n;
        double acc = 0.0;
        for (int j : supra.adj[layer][i]) acc += x(base + j);
        for (int l = 1; l <= lags && l <= layer; ++l)
            acc += supra.couplings[l - 1](i) * x(base - static_cast<long>(l) * supra.n + i);
        y(r) = acc;
    }
}

std::vector<FrontierPoint> efficient_frontier(const Eigen::MatrixXd& returns,
                                              std::vector<double> q_grid,
                                              bool long_only) {
    if (q_grid.empty()) throw ValidationError("empty risk-tolerance grid");
    for (double q : q_grid)
        if (!(q >= 0.0) || !std::isfinite(q))
            throw ValidationError("risk tolerances must be finite and >= 0");
    std::sort(q_grid.begin(), q_grid.end());

    const Eigen::VectorXd mean = sample_mean(returns);
    const Eigen::MatrixXd cov = sample_covariance(returns);

    std::vector<FrontierPoint> points(q_grid.size());
    for (size_t k = 0; k < q_grid.size(); ++k) {
        const Portfolio p = mean_variance_weights(cov, mean, q_grid[k], long_only);
        points[k].q = q_grid[k];
        points[k].weights = p.weights;
        points[k].risk = p.weights.dot(cov * p.weights);
        points[k].ret = mean.dot(p.weights);
    }
    return points;
}

} // namespace tempnet::reference
