#include "tempnet/backtest.hpp"
#include "tempnet/errors.hpp"
#include "tempnet/panel.hpp"
#include "tempnet/report.hpp"
#include "tempnet/version.hpp"

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace tempnet;

struct SynthOptions {
    std::string out;
    int stocks = 50;
    int days = 2000;
    std::uint64_t seed = 0;
    double beta_min = 0.5;
    double beta_max = 1.5;
    std::vector<double> betas;
    double factor_vol = 0.01;
    double idio_vol = 0.01;
};

struct PipelineOptions {
    std::string input;
    std::string out;
    double min_coverage = 0.9;
    int delta = 500;
    int step = 25;
    std::string dump_corr;
    std::string dump_edges;
    std::string dump_supra;
    std::string method = "temporal";
    bool absolute = false;
};

struct RunOptions {
    std::string input;
    std::string out_dir = ".";
    std::string run_id;
    double min_coverage = 0.9;
    bool out_of_sample = false;
    long est = 0;
    long eval = 0;
    int delta = 500;
    int step = 25;
    int m = 0; // 0: default derived from the universe
    std::vector<int> sizes;
    bool single_size = false; // default --sizes to {frontier_m}
    std::vector<double> q_grid;
    double tail_prob = 0.05;
    bool allow_short = false;
    bool absolute = false;
    bool fit_on_estimation = false;
    std::uint64_t seed = 0;
};

ReturnPanel load_returns(const std::string& path, double min_coverage) {
    AlignmentPolicy policy;
    policy.min_coverage = min_coverage;
    const PricePanel prices = load_prices_file(path, policy);
    return log_returns(prices);
}

void run_synth(const SynthOptions& opt) {
    FactorSpec spec;
    spec.n_stocks = opt.stocks;
    spec.n_days = opt.days;
    spec.seed = opt.seed;
    spec.factor_vol = opt.factor_vol;
    spec.idio_vol = opt.idio_vol;
    if (!opt.betas.empty()) {
        spec.betas = opt.betas;
    } else {
        spec.betas.resize(opt.stocks);
        for (int i = 0; i < opt.stocks; ++i)
            spec.betas[i] =
                opt.stocks == 1
                    ? opt.beta_min
                    : opt.beta_min + (opt.beta_max - opt.beta_min) * i /
                                         (opt.stocks - 1.0);
    }
    const PricePanel panel = synth_one_factor(spec);
    std::ofstream out(opt.out, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + opt.out + " for writing");
    write_wide_csv(panel, out);
}

void run_topology_cmd(const PipelineOptions& opt) {
    const ReturnPanel returns = load_returns(opt.input, opt.min_coverage);
    WindowConfig window{opt.delta, opt.step};
    const CorrelationSequence corr = rolling_correlations(returns, window);
    const std::vector<PlanarGraph> pmfgs = pmfg_sequence(corr);
    const std::vector<TopologyReport> reports = topology_series(pmfgs);

    std::vector<TopologyRow> rows(reports.size());
    for (size_t t = 0; t < reports.size(); ++t) {
        rows[t].window_end = corr.anchors[t];
        rows[t].clustering = reports[t].clustering;
        rows[t].path_length = reports[t].path_length;
        rows[t].heterogeneity = reports[t].heterogeneity;
        rows[t].jaccard = reports[t].jaccard_prev;
    }
    write_topology_csv(opt.out, rows);

    if (!opt.dump_corr.empty()) {
        fs::create_directories(opt.dump_corr);
        for (int t = 0; t < corr.n_windows(); ++t)
            write_corr_csv(fs::path(opt.dump_corr) /
                               ("corr_" + corr.anchors[t] + ".csv"),
                           returns.tickers, corr.windows[t]);
    }
    if (!opt.dump_edges.empty()) {
        fs::create_directories(opt.dump_edges);
        for (int t = 0; t < corr.n_windows(); ++t)
            write_edges_csv(fs::path(opt.dump_edges) /
                                ("edges_" + corr.anchors[t] + ".csv"),
                            returns.tickers, pmfgs[t].graph);
    }
    for (const auto& warning : corr.warnings)
        std::cerr << "warning: " << warning << "\n";
}

void run_centrality_cmd(const PipelineOptions& opt) {
    const ReturnPanel returns = load_returns(opt.input, opt.min_coverage);
    WindowConfig window{opt.delta, opt.step};
    const NetworkAnalysis na = analyze_network(returns, window, opt.absolute);
    const CentralityRanking& ranking =
        opt.method == "temporal" ? na.temporal : na.aggregated;
    write_centrality_csv(opt.out, returns.tickers, ranking);
    if (!opt.dump_supra.empty()) write_supra_csv(opt.dump_supra, na.supra);
}

void run_experiment_cmd(const RunOptions& opt) {
    const ReturnPanel returns = load_returns(opt.input, opt.min_coverage);
    const int n = returns.n_stocks();

    ExperimentConfig config;
    config.window = WindowConfig{opt.delta, opt.step};
    config.estimation_len = opt.est;
    config.evaluation_len = opt.eval;
    config.tail_prob = opt.tail_prob;
    config.long_only = !opt.allow_short;
    config.absolute_centrality = opt.absolute;
    config.fit_on_estimation = opt.fit_on_estimation;
    config.seed = opt.seed;
    if (!opt.q_grid.empty()) config.q_grid = opt.q_grid;

    config.frontier_m = opt.m > 0 ? opt.m : std::min(30, n);
    if (!opt.sizes.empty()) {
        config.sizes = opt.sizes;
    } else if (opt.single_size) {
        config.sizes = {config.frontier_m};
    } else {
        // Default grid 5,10,...,60 trimmed to the universe.
        config.sizes.clear();
        for (int m = 5; m <= 60; m += 5)
            if (m <= n) config.sizes.push_back(m);
        if (config.sizes.empty()) config.sizes = {n};
    }

    const BacktestReport report = opt.out_of_sample
                                      ? run_outofsample(returns, config)
                                      : run_insample(returns, config);
    const fs::path dir =
        write_report(report, returns.tickers, opt.out_dir, opt.run_id);
    std::cout << dir.string() << "\n";
    for (const auto& warning : report.warnings)
        std::cerr << "warning: " << warning << "\n";
}

void add_window_flags(CLI::App* cmd, PipelineOptions& opt) {
    cmd->add_option("--input", opt.input, "Price CSV (wide or long layout)")
        ->required();
    cmd->add_option("--min-coverage", opt.min_coverage,
                    "Drop stocks present on fewer than this fraction of dates");
    cmd->add_option("--delta", opt.delta, "Correlation window length in days");
    cmd->add_option("--step", opt.step, "Days between consecutive windows");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal correlation-network portfolio engine"};
    app.set_version_flag("--version", tempnet::kVersion);
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads,
                   "OpenMP thread count (0 keeps the runtime default)");
    app.fallthrough();

    SynthOptions synth_opt;
    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a synthetic one-factor price panel");
    synth->set_config("--config");
    synth->add_option("--out", synth_opt.out, "Output wide CSV path")->required();
    synth->add_option("--stocks", synth_opt.stocks, "Number of stocks");
    synth->add_option("--days", synth_opt.days, "Number of price dates");
    synth->add_option("--seed", synth_opt.seed, "Generator seed");
    synth->add_option("--beta-min", synth_opt.beta_min,
                      "Smallest factor loading of the linear ramp");
    synth->add_option("--beta-max", synth_opt.beta_max,
                      "Largest factor loading of the linear ramp");
    synth->add_option("--betas", synth_opt.betas,
                      "Explicit per-stock factor loadings")
        ->delimiter(',');
    synth->add_option("--factor-vol", synth_opt.factor_vol,
                      "Common factor volatility");
    synth->add_option("--idio-vol", synth_opt.idio_vol,
                      "Idiosyncratic volatility");

    PipelineOptions topo_opt;
    CLI::App* topology =
        app.add_subcommand("topology", "Rolling PMFG topology time series");
    topology->set_config("--config");
    add_window_flags(topology, topo_opt);
    topology->add_option("--out", topo_opt.out, "Topology CSV path")->required();
    topology->add_option("--dump-corr", topo_opt.dump_corr,
                         "Directory for per-window correlation matrices");
    topology->add_option("--dump-edges", topo_opt.dump_edges,
                         "Directory for per-window PMFG edge lists");

    PipelineOptions cent_opt;
    CLI::App* centrality =
        app.add_subcommand("centrality", "Stock centrality ranking");
    centrality->set_config("--config");
    add_window_flags(centrality, cent_opt);
    centrality->add_option("--out", cent_opt.out, "Centrality CSV path")
        ->required();
    centrality
        ->add_option("--method", cent_opt.method,
                     "Ranking method: temporal or aggregated")
        ->check(CLI::IsMember({"temporal", "aggregated"}));
    centrality->add_flag("--absolute", cent_opt.absolute,
                         "Sum absolute eigenvector entries across layers");
    centrality->add_option("--dump-supra", cent_opt.dump_supra,
                           "Write the supra matrix as triplet CSV");

    auto add_run_flags = [](CLI::App* cmd, RunOptions& opt) {
        cmd->set_config("--config");
        cmd->add_option("--input", opt.input, "Price CSV (wide or long layout)")
            ->required();
        cmd->add_option("--out-dir", opt.out_dir,
                        "Directory that receives the run directory");
        cmd->add_option("--run-id", opt.run_id,
                        "Pin the run directory name (default: UTC timestamp)");
        cmd->add_option("--min-coverage", opt.min_coverage,
                        "Drop stocks present on fewer than this fraction of dates");
        cmd->add_option("--delta", opt.delta, "Correlation window length in days");
        cmd->add_option("--step", opt.step, "Days between consecutive windows");
        const auto insample =
            cmd->add_flag("--in-sample", "Select, optimize and evaluate on the whole panel");
        cmd->add_flag("--out-of-sample", opt.out_of_sample,
                      "Select on the first --est observations, evaluate on the next --eval")
            ->excludes(insample);
        cmd->add_option("--est", opt.est,
                        "Estimation length in return observations");
        cmd->add_option("--eval", opt.eval,
                        "Evaluation length in return observations");
        cmd->add_option("--tail-prob", opt.tail_prob,
                        "Expected-shortfall tail probability");
        cmd->add_option("--q-grid", opt.q_grid,
                        "Comma-separated risk tolerances for the frontier")
            ->delimiter(',');
        cmd->add_flag("--allow-short", opt.allow_short,
                      "Drop the long-only constraint in mean-variance weights");
        cmd->add_flag("--absolute", opt.absolute,
                      "Sum absolute eigenvector entries across layers");
        cmd->add_flag("--fit-on-estimation", opt.fit_on_estimation,
                      "Out-of-sample: fit weights on the estimation slice");
        cmd->add_option("--seed", opt.seed, "Seed echoed into provenance");
    };

    RunOptions frontier_opt;
    CLI::App* frontier =
        app.add_subcommand("frontier", "Efficient frontiers per selection");
    add_run_flags(frontier, frontier_opt);
    frontier
        ->add_option("--m", frontier_opt.m,
                     "Portfolio size for the frontier curves")
        ->check(CLI::Range(1, 1000000));

    RunOptions es_opt;
    CLI::App* es = app.add_subcommand("es", "Expected shortfall vs portfolio size");
    add_run_flags(es, es_opt);
    es->add_option("--sizes", es_opt.sizes, "Comma-separated portfolio sizes")
        ->delimiter(',');
    CLI::Option* es_m =
        es->add_option("--m", "Single portfolio size (shorthand for --sizes)");
    es_m->check(CLI::Range(1, 1000000));
    es_m->excludes("--sizes");

    RunOptions back_opt;
    CLI::App* backtest =
        app.add_subcommand("backtest", "Full topology + frontier + ES experiment");
    add_run_flags(backtest, back_opt);
    backtest
        ->add_option("--m", back_opt.m,
                     "Portfolio size for the frontier curves")
        ->check(CLI::Range(1, 1000000));
    backtest->add_option("--sizes", back_opt.sizes,
                         "Comma-separated portfolio sizes")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(threads);
#endif
        if (synth->parsed()) {
            run_synth(synth_opt);
        } else if (topology->parsed()) {
            run_topology_cmd(topo_opt);
        } else if (centrality->parsed()) {
            run_centrality_cmd(cent_opt);
        } else if (frontier->parsed()) {
            frontier_opt.single_size = true;
            run_experiment_cmd(frontier_opt);
        } else if (es->parsed()) {
            if (es_m->count() > 0) {
                const int m = es_m->as<int>();
                es_opt.sizes = {m};
                es_opt.m = m;
            }
            run_experiment_cmd(es_opt);
        } else if (backtest->parsed()) {
            run_experiment_cmd(back_opt);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
