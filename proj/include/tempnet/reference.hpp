#pragma once

#include "tempnet/arima.hpp"
#include "tempnet/corr.hpp"
#include "tempnet/panel.hpp"
#include "tempnet/pmfg.hpp"
#include "tempnet/portfolio.hpp"
#include "tempnet/temporal.hpp"

#include <vector>

namespace tempnet::reference {

/// Serial counterparts of the OpenMP kernels. Each one must produce output
/// byte-identical to its parallel twin; the parity tests and the benchmark
/// tool compare them directly.

CorrelationSequence rolling_correlations(const ReturnPanel& panel,
                                         const WindowConfig& config);

std::vector<PlanarGraph> pmfg_sequence(const CorrelationSequence& seq);

std::vector<ArimaFit> fit_arima_batch(const Eigen::MatrixXd& rows,
                                      const OrderGrid& grid = {});

void supra_multiply(const SupraEvolutionMatrix& supra, const Eigen::VectorXd& x,
                    Eigen::VectorXd& y);

std::vector<FrontierPoint> efficient_frontier(const Eigen::MatrixXd& returns,
                                              std::vector<double> q_grid,
                                              bool long_only = true);

} // namespace tempnet::reference
