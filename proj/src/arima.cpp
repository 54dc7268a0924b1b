#include "tempnet/arima.hpp"

#include "tempnet/errors.hpp"
#include "tempnet/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tempnet {

namespace {

// OLS of z_t on [z_{t-1..t-p}, eh_{t-1..t-q}] for t in [t0, n). Returns the
// coefficient vector and writes the residual sum of squares.
Eigen::VectorXd lag_regression(const std::vector<double>& z,
                               const std::vector<double>& eh, int p, int q,
                               int t0, double* rss) {
    const int n = static_cast<int>(z.size());
    const int rows = n - t0;
    const int cols = p + q;
    Eigen::VectorXd y(rows);
    for (int t = t0; t < n; ++t) y(t - t0) = z[t];
    if (cols == 0) {
        *rss = y.squaredNorm();
        return Eigen::VectorXd();
    }
    Eigen::MatrixXd X(rows, cols);
    for (int t = t0; t < n; ++t) {
        for (int k = 1; k <= p; ++k) X(t - t0, k - 1) = z[t - k];
        for (int k = 1; k <= q; ++k) X(t - t0, p + k - 1) = eh[t - k];
    }
    Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
    *rss = (y - X * beta).squaredNorm();
    return beta;
}

// A near-common factor between the AR and MA polynomials cancels out of the
// transfer function, leaving the coefficients unidentified; least squares
// then lands anywhere on the equivalent family. Cancellation shows up as the
// (p-1,q-1) reduction fitting almost as well: the gain statistic
// n (rss_red / rss - 1) stays at chi-squared noise levels instead of growing
// with the sample. Candidates below the slack are excluded from selection.
constexpr double kReductionSlack = 15.0;

bool reducible(const std::vector<double>& z, const std::vector<double>& eh,
               int p, int q, int t0, double rss, double n_eff) {
    double rss_red = 0.0;
    lag_regression(z, eh, p - 1, q - 1, t0, &rss_red);
    if (rss <= 0.0) return false;
    return n_eff * (rss_red / rss - 1.0) < kReductionSlack;
}

} // namespace

void OrderGrid::validate() const {
    if (p_grid.empty() || q_grid.empty())
        throw ValidationError("order grid must be non-empty");
    for (int p : p_grid)
        if (p < 0) throw ValidationError("negative AR order in grid");
    for (int q : q_grid)
        if (q < 0) throw ValidationError("negative MA order in grid");
    if (max_d < 0) throw ValidationError("negative differencing bound");
}

double lag1_autocorr(std::span<const double> x) {
    const size_t n = x.size();
    if (n < 2) throw ValidationError("lag-1 autocorrelation needs 2 points");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (size_t t = 0; t < n; ++t) {
        const double c = x[t] - mean;
        den += c * c;
        if (t > 0) num += c * (x[t - 1] - mean);
    }
    if (den == 0.0) return 0.0; // constant series
    return num / den;
}

std::vector<double> difference(std::span<const double> x, int d) {
    std::vector<double> out(x.begin(), x.end());
    for (int k = 0; k < d; ++k) {
        if (out.size() < 2)
            throw ValidationError("series too short to difference");
        for (size_t t = 0; t + 1 < out.size(); ++t) out[t] = out[t + 1] - out[t];
        out.pop_back();
    }
    return out;
}

ArimaFit fit_arima(std::span<const double> series, const OrderGrid& grid) {
    grid.validate();
    const int p_max = *std::max_element(grid.p_grid.begin(), grid.p_grid.end());
    const int q_max = *std::max_element(grid.q_grid.begin(), grid.q_grid.end());
    const int n = static_cast<int>(series.size());
    if (n < 10 + p_max + grid.max_d)
        throw ValidationError("series too short for ARIMA fit: " +
                              std::to_string(n) + " points");
    for (double v : series)
        if (!std::isfinite(v))
            throw ValidationError("series has non-finite entries");

    ArimaFit fit;
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    if (*lo == *hi) { // constant input: nothing to model
        fit.mean = *lo;
        return fit;
    }

    std::vector<double> w(series.begin(), series.end());
    while (fit.d < grid.max_d && lag1_autocorr(w) > grid.diff_threshold) {
        w = difference(w, 1);
        ++fit.d;
    }

    double mu = 0.0;
    for (double v : w) mu += v;
    mu /= static_cast<double>(w.size());
    fit.mean = mu;
    std::vector<double> z(w.size());
    for (size_t t = 0; t < z.size(); ++t) z[t] = w[t] - mu;

    double zvar = 0.0;
    for (double v : z) zvar += v * v;
    if (zvar == 0.0) return fit; // differencing removed all variation

    const int nz = static_cast<int>(z.size());

    // Innovation proxies from a long autoregression; needed only when the
    // grid contains MA terms.
    std::vector<double> eh(z.size(), 0.0);
    int t0 = p_max;
    if (q_max > 0) {
        const int long_order =
            std::max(p_max + q_max, std::min(20, nz / 4));
        double rss = 0.0;
        const Eigen::VectorXd beta = lag_regression(z, eh, long_order, 0,
                                                    long_order, &rss);
        for (int t = long_order; t < nz; ++t) {
            double pred = 0.0;
            for (int k = 1; k <= long_order; ++k) pred += beta(k - 1) * z[t - k];
            eh[t] = z[t] - pred;
        }
        t0 = long_order + q_max;
    }
    if (nz - t0 <= p_max + q_max)
        throw ValidationError("series too short for ARIMA fit after differencing");

    // Two passes: reducible candidates only compete when nothing else exists.
    const double n_eff = static_cast<double>(nz - t0);
    double best_aic = std::numeric_limits<double>::infinity();
    bool found = false;
    for (bool allow_reducible : {false, true}) {
        if (found) break;
        for (int p : grid.p_grid) {
            for (int q : grid.q_grid) {
                double rss = 0.0;
                const Eigen::VectorXd beta =
                    lag_regression(z, eh, p, q, t0, &rss);
                if (!allow_reducible && p > 0 && q > 0 &&
                    reducible(z, eh, p, q, t0, rss, n_eff))
                    continue;
                const double mse = std::max(rss / n_eff, 1e-300);
                const double aic = n_eff * std::log(mse) + 2.0 * (p + q + 1);
                if (aic < best_aic) {
                    best_aic = aic;
                    found = true;
                    fit.p = p;
                    fit.q = q;
                    fit.aic = aic;
                    fit.noise_var = rss / n_eff;
                    fit.phi.assign(beta.data(), beta.data() + p);
                    fit.theta.resize(q);
                    for (int k = 0; k < q; ++k) fit.theta[k] = -beta(p + k);
                }
            }
        }
    }
    return fit;
}

std::vector<ArimaFit> fit_arima_batch(const Eigen::MatrixXd& rows,
                                      const OrderGrid& grid) {
    const int n = static_cast<int>(rows.rows());
    std::vector<ArimaFit> fits(n);
    parallel_for_indexed(n, [&](int i) {
        std::vector<double> series(rows.cols());
        for (int t = 0; t < rows.cols(); ++t) series[t] = rows(i, t);
        fits[i] = fit_arima(series, grid);
        fits[i].stock = i;
    });
    return fits;
}

} // namespace tempnet
