#pragma once

#include "tempnet/arima.hpp"
#include "tempnet/corr.hpp"
#include "tempnet/panel.hpp"
#include "tempnet/pmfg.hpp"
#include "tempnet/portfolio.hpp"
#include "tempnet/temporal.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tempnet {

enum class CentralityMethod { temporal, aggregated };

const char* to_string(CentralityMethod method);

struct ExperimentConfig {
    WindowConfig window;
    long estimation_len = 0; // return observations; 0 = whole panel
    long evaluation_len = 0;
    std::vector<int> sizes = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
    int frontier_m = 30;
    double tail_prob = 0.05;
    std::vector<double> q_grid = default_q_grid();
    bool long_only = true;
    bool absolute_centrality = false;
    // Out-of-sample only: fit weights on the estimation slice instead of the
    // evaluation slice (reported ES always comes from the evaluation slice).
    bool fit_on_estimation = false;
    std::uint64_t seed = 0; // echoed into provenance

    void validate(int n_stocks, long n_obs, bool out_of_sample) const;
};

struct TopologyRow {
    std::string window_end;
    double clustering = 0.0;
    double path_length = 0.0;
    double heterogeneity = 0.0;
    std::optional<double> jaccard; // against the previous window
};

std::vector<TopologyRow> run_topology(const ReturnPanel& panel,
                                      const WindowConfig& config);

/// Everything derived from one return slice: rolling correlations, PMFGs,
/// topology rows, strength ARIMA fits, and both centrality rankings. This is
/// the only place selection inputs come from, which keeps out-of-sample runs
/// free of look-ahead by construction.
struct NetworkAnalysis {
    CorrelationSequence corr;
    std::vector<PlanarGraph> pmfgs;
    std::vector<TopologyRow> topology;
    std::vector<ArimaFit> fits;
    SupraEvolutionMatrix supra;
    CentralityRanking temporal;
    CentralityRanking aggregated;
};

NetworkAnalysis analyze_network(const ReturnPanel& panel,
                                const WindowConfig& config,
                                bool absolute_centrality = false);

struct FrontierCurve {
    PortfolioMode mode;
    CentralityMethod method;
    int m = 0;
    std::vector<int> members;
    std::vector<FrontierPoint> points;
};

struct EsCurvePoint {
    int m = 0;
    std::vector<int> members;
    Eigen::VectorXd weights;
    double es = 0.0;
};

struct EsCurve {
    PortfolioMode mode;
    CentralityMethod method;
    std::vector<EsCurvePoint> points;
};

struct BacktestReport {
    ExperimentConfig config;
    bool out_of_sample = false;
    int n_stocks = 0;
    long n_obs = 0;
    std::vector<TopologyRow> topology;
    CentralityRanking temporal;
    CentralityRanking aggregated;
    std::vector<FrontierCurve> frontiers; // method-major, then mode
    std::vector<EsCurve> es_curves;
    std::vector<std::string> warnings;
};

/// Selection, optimization and evaluation all on the full panel.
BacktestReport run_insample(const ReturnPanel& panel,
                            const ExperimentConfig& config);

/// Selection on the first estimation_len observations; optimization and ES
/// evaluation strictly on the following evaluation_len observations.
BacktestReport run_outofsample(const ReturnPanel& panel,
                               const ExperimentConfig& config);

std::vector<EsCurve> es_vs_size(const ReturnPanel& panel,
                                const ExperimentConfig& config,
                                bool out_of_sample);

} // namespace tempnet
