#pragma once

#include "tempnet/temporal.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace tempnet {

enum class PortfolioMode { central, peripheral };

const char* to_string(PortfolioMode mode);

struct Portfolio {
    std::vector<int> members; // ascending indices into the caller's universe
    Eigen::VectorXd weights;  // aligned with members, sums to 1
    bool long_only = true;
};

/// Top-m (central) or bottom-m (peripheral) stocks by ranking score, using
/// the ranking's own tie order. Returns ascending stock indices.
std::vector<int> select_portfolio(const CentralityRanking& ranking, int m,
                                  PortfolioMode mode);

/// min w'Cov w - q mean'w  with  sum(w) = 1 (and w >= 0 when long_only).
/// A ridge of 1e-10 * trace/m is added when the covariance is near-singular.
Portfolio mean_variance_weights(const Eigen::MatrixXd& cov,
                                const Eigen::VectorXd& mean, double q,
                                bool long_only = true);

struct FrontierPoint {
    double q = 0.0;
    double risk = 0.0; // w'Cov w against the sample covariance
    double ret = 0.0;  // mean'w per day
    Eigen::VectorXd weights;
};

/// One mean-variance solution per risk tolerance, from the sample moments of
/// the scenario slice. Points come back sorted by q; they are computed in
/// parallel.
std::vector<FrontierPoint> efficient_frontier(const Eigen::MatrixXd& returns,
                                              std::vector<double> q_grid,
                                              bool long_only = true);

struct EsResult {
    double alpha = 0.0;
    double var_level = 0.0; // empirical alpha-quantile of the returns
    double es = 0.0;        // expected shortfall on the loss scale
};

/// ES^a(X) = -(1/a) (E[X 1{X<=q}] - q (P[X<=q] - a)) with q the lower
/// empirical alpha-quantile; equals the fractionally weighted mean loss of
/// the worst a*L scenarios.
EsResult expected_shortfall(std::span<const double> pnl, double alpha);

/// Long-only budget-constrained weights minimizing empirical ES. The hinge
/// linearization is solved through its dual, whose basis involves only one
/// row per asset plus the budget row; weights are the asset-row duals.
/// Assets with identical scenario rows receive equal weights.
Portfolio minimize_es(const Eigen::MatrixXd& returns, double alpha);

/// {0} followed by 49 geometrically spaced values from 1e-3 to 10.
std::vector<double> default_q_grid();

Eigen::VectorXd sample_mean(const Eigen::MatrixXd& returns);
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& returns);

} // namespace tempnet
