#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace tempnet {

/// Candidate (p, q) orders and the differencing rule for fit_arima.
struct OrderGrid {
    std::vector<int> p_grid = {1, 2, 3};
    std::vector<int> q_grid = {0, 1, 2};
    int max_d = 2;
    double diff_threshold = 0.95; // difference while lag-1 autocorr exceeds this

    void validate() const; // throws ValidationError
};

/// x_t = sum_k phi_k x_{t-k} + e_t - sum_k theta_k e_{t-k}, fitted to the
/// d-times differenced, demeaned series.
struct ArimaFit {
    int p = 0;
    int d = 0;
    int q = 0;
    std::vector<double> phi;
    std::vector<double> theta;
    double noise_var = 0.0;
    double aic = 0.0;
    double mean = 0.0; // mean removed from the differenced series
    int stock = -1;
};

double lag1_autocorr(std::span<const double> x);

std::vector<double> difference(std::span<const double> x, int d);

/// Order selection by minimum AIC over the grid; conditional least squares,
/// with a long-AR first stage supplying innovation proxies when q > 0. All
/// candidates condition on the same initial stretch so AICs are comparable.
ArimaFit fit_arima(std::span<const double> series, const OrderGrid& grid = {});

/// One fit per row, rows processed in parallel.
std::vector<ArimaFit> fit_arima_batch(const Eigen::MatrixXd& rows,
                                      const OrderGrid& grid = {});

} // namespace tempnet
