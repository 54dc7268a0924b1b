#include "tempnet/backtest.hpp"

#include "tempnet/errors.hpp"
#include "tempnet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>

namespace tempnet {

namespace {

constexpr PortfolioMode kModes[] = {PortfolioMode::central,
                                    PortfolioMode::peripheral};
constexpr CentralityMethod kMethods[] = {CentralityMethod::temporal,
                                         CentralityMethod::aggregated};

std::vector<TopologyRow> topology_rows(const CorrelationSequence& corr,
                                       const std::vector<PlanarGraph>& pmfgs) {
    const auto reports = topology_series(pmfgs);
    std::vector<TopologyRow> rows(reports.size());
    for (size_t t = 0; t < reports.size(); ++t) {
        rows[t].window_end = corr.anchors[t];
        rows[t].clustering = reports[t].clustering;
        rows[t].path_length = reports[t].path_length;
        rows[t].heterogeneity = reports[t].heterogeneity;
        rows[t].jaccard = reports[t].jaccard_prev;
    }
    return rows;
}

} // namespace

const char* to_string(CentralityMethod method) {
    return method == CentralityMethod::temporal ? "temporal" : "aggregated";
}

void ExperimentConfig::validate(int n_stocks, long n_obs,
                                bool out_of_sample) const {
    if (sizes.empty()) throw ValidationError("portfolio size list is empty");
    for (int m : sizes)
        if (m < 1 || m > n_stocks)
            throw ValidationError("portfolio size " + std::to_string(m) +
                                  " outside [1, " + std::to_string(n_stocks) + "]");
    if (frontier_m < 1 || frontier_m > n_stocks)
        throw ValidationError("frontier portfolio size " +
                              std::to_string(frontier_m) + " outside [1, " +
                              std::to_string(n_stocks) + "]");
    if (!(tail_prob > 0.0) || !(tail_prob < 1.0))
        throw ValidationError("tail probability must lie in (0, 1)");
    if (q_grid.empty()) throw ValidationError("empty risk-tolerance grid");
    for (double q : q_grid)
        if (!(q >= 0.0) || !std::isfinite(q))
            throw ValidationError("risk tolerances must be finite and >= 0");

    if (out_of_sample) {
        if (estimation_len < 1 || evaluation_len < 1)
            throw ValidationError(
                "out-of-sample runs need estimation and evaluation lengths");
        if (estimation_len + evaluation_len > n_obs)
            throw ValidationError(
                "estimation plus evaluation length " +
                std::to_string(estimation_len + evaluation_len) +
                " exceeds the " + std::to_string(n_obs) +
                " available return observations");
        if (evaluation_len < 2)
            throw ValidationError("evaluation slice needs at least 2 observations");
        window.validate(estimation_len);
    } else {
        window.validate(n_obs);
    }
}

std::vector<TopologyRow> run_topology(const ReturnPanel& panel,
                                      const WindowConfig& config) {
    const CorrelationSequence corr = rolling_correlations(panel, config);
    const std::vector<PlanarGraph> pmfgs = pmfg_sequence(corr);
    return topology_rows(corr, pmfgs);
}

NetworkAnalysis analyze_network(const ReturnPanel& panel,
                                const WindowConfig& config,
                                bool absolute_centrality) {
    NetworkAnalysis na;
    na.corr = rolling_correlations(panel, config);
    na.pmfgs = pmfg_sequence(na.corr);
    na.topology = topology_rows(na.corr, na.pmfgs);

    const StrengthSeries strengths = strength_series(na.corr);
    na.fits = fit_arima_batch(strengths.values);

    const std::vector<Graph> layers = layer_graphs(na.pmfgs);
    na.supra = build_supra(layers, na.fits);
    const Eigenpair pair = leading_eigenpair(na.supra);
    na.temporal = temporal_centrality(pair, na.supra.n, na.supra.t,
                                      absolute_centrality);
    na.aggregated = hybrid_centrality(aggregate_network(layers));
    return na;
}

namespace {

BacktestReport run_core(const ReturnPanel& panel, const ExperimentConfig& config,
                        bool out_of_sample) {
    panel.validate();
    config.validate(panel.n_stocks(), panel.n_obs(), out_of_sample);

    const ReturnPanel selection_slice =
        out_of_sample
            ? slice_returns(panel, 0, static_cast<int>(config.estimation_len))
            : panel;
    const ReturnPanel eval_slice =
        out_of_sample
            ? slice_returns(panel, static_cast<int>(config.estimation_len),
                            static_cast<int>(config.evaluation_len))
            : panel;
    const bool fit_on_est = out_of_sample && config.fit_on_estimation;
    const ReturnPanel& fit_slice = fit_on_est ? selection_slice : eval_slice;

    const NetworkAnalysis na = analyze_network(selection_slice, config.window,
                                               config.absolute_centrality);

    BacktestReport report;
    report.config = config;
    report.out_of_sample = out_of_sample;
    report.n_stocks = panel.n_stocks();
    report.n_obs = panel.n_obs();
    report.topology = na.topology;
    report.temporal = na.temporal;
    report.aggregated = na.aggregated;
    report.warnings = na.corr.warnings;

    const Eigen::VectorXd eval_mean = sample_mean(eval_slice.returns);
    const Eigen::MatrixXd eval_cov = sample_covariance(eval_slice.returns);

    for (CentralityMethod method : kMethods) {
        const CentralityRanking& ranking =
            method == CentralityMethod::temporal ? na.temporal : na.aggregated;
        for (PortfolioMode mode : kModes) {
            FrontierCurve curve;
            curve.mode = mode;
            curve.method = method;
            curve.m = config.frontier_m;
            curve.members = select_portfolio(ranking, config.frontier_m, mode);

            const ReturnPanel sub_fit = select_stocks(fit_slice, curve.members);
            curve.points = efficient_frontier(sub_fit.returns, config.q_grid,
                                              config.long_only);
            if (fit_on_est) {
                // Weights come from the estimation slice; report their
                // realized moments on the evaluation slice.
                for (FrontierPoint& pt : curve.points) {
                    Eigen::VectorXd full = Eigen::VectorXd::Zero(panel.n_stocks());
                    for (size_t k = 0; k < curve.members.size(); ++k)
                        full(curve.members[k]) = pt.weights(k);
                    pt.risk = full.dot(eval_cov * full);
                    pt.ret = eval_mean.dot(full);
                }
            }
            report.frontiers.push_back(std::move(curve));
        }
    }

    // ES jobs over (method, mode, m) are independent; run them as one flat
    // parallel batch and reassemble in fixed order.
    struct EsJob {
        CentralityMethod method;
        PortfolioMode mode;
        int m;
    };
    std::vector<EsJob> jobs;
    for (CentralityMethod method : kMethods)
        for (PortfolioMode mode : kModes)
            for (int m : config.sizes) jobs.push_back({method, mode, m});

    std::vector<EsCurvePoint> results(jobs.size());
    parallel_for_indexed(static_cast<int>(jobs.size()), [&](int k) {
        const EsJob& job = jobs[k];
        const CentralityRanking& ranking = job.method == CentralityMethod::temporal
                                               ? na.temporal
                                               : na.aggregated;
        EsCurvePoint point;
        point.m = job.m;
        point.members = select_portfolio(ranking, job.m, job.mode);
        const ReturnPanel sub_fit = select_stocks(fit_slice, point.members);
        const Portfolio opt = minimize_es(sub_fit.returns, config.tail_prob);
        point.weights = opt.weights;

        const ReturnPanel sub_eval = select_stocks(eval_slice, point.members);
        const Eigen::VectorXd pnl = sub_eval.returns.transpose() * opt.weights;
        point.es = expected_shortfall(
                       std::span<const double>(pnl.data(), pnl.size()),
                       config.tail_prob)
                       .es;
        results[k] = std::move(point);
    });

    size_t cursor = 0;
    for (CentralityMethod method : kMethods)
        for (PortfolioMode mode : kModes) {
            EsCurve curve;
            curve.mode = mode;
            curve.method = method;
            for (size_t i = 0; i < config.sizes.size(); ++i)
                curve.points.push_back(std::move(results[cursor++]));
            report.es_curves.push_back(std::move(curve));
        }
    return report;
}

} // namespace

BacktestReport run_insample(const ReturnPanel& panel,
                            const ExperimentConfig& config) {
    return run_core(panel, config, false);
}

BacktestReport run_outofsample(const ReturnPanel& panel,
                               const ExperimentConfig& config) {
    return run_core(panel, config, true);
}

std::vector<EsCurve> es_vs_size(const ReturnPanel& panel,
                                const ExperimentConfig& config,
                                bool out_of_sample) {
    return run_core(panel, config, out_of_sample).es_curves;
}

} // namespace tempnet
