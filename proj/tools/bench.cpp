#include "tempnet/backtest.hpp"
#include "tempnet/panel.hpp"
#include "tempnet/portfolio.hpp"
#include "tempnet/reference.hpp"
#include "tempnet/temporal.hpp"

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

namespace {

using namespace tempnet;
using Clock = std::chrono::steady_clock;

double time_once(const std::function<void()>& fn) {
    const auto start = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double time_best(int repeat, const std::function<void()>& fn) {
    double best = time_once(fn);
    for (int r = 1; r < repeat; ++r) best = std::min(best, time_once(fn));
    return best;
}

void report(const char* name, double parallel_s, double serial_s) {
    std::printf("%-22s %10.3fs %10.3fs %8.2fx\n", name, parallel_s, serial_s,
                serial_s / parallel_s);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Timing of parallel kernels against the serial reference"};
    int stocks = 100;
    int days = 1500;
    int delta = 250;
    int step = 25;
    int repeat = 3;
    int threads = 0;
    app.add_option("--stocks", stocks, "Synthetic universe size");
    app.add_option("--days", days, "Synthetic price dates");
    app.add_option("--delta", delta, "Correlation window length");
    app.add_option("--step", step, "Window step");
    app.add_option("--repeat", repeat, "Repetitions, best time wins");
    app.add_option("--threads", threads, "OpenMP thread count (0 keeps default)");
    CLI11_PARSE(app, argc, argv);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    FactorSpec spec;
    spec.n_stocks = stocks;
    spec.n_days = days;
    spec.seed = 42;
    spec.betas.resize(stocks);
    for (int i = 0; i < stocks; ++i)
        spec.betas[i] = 0.5 + i / (stocks - 1.0);
    const ReturnPanel returns = log_returns(synth_one_factor(spec));
    const WindowConfig window{delta, step};

    std::printf("%d stocks, %ld windows of %d days\n", returns.n_stocks(),
                window_count(returns.n_obs(), window.delta, window.step), delta);
    std::printf("%-22s %11s %11s %9s\n", "kernel", "parallel", "serial",
                "speedup");

    CorrelationSequence corr;
    const double corr_par =
        time_best(repeat, [&] { corr = rolling_correlations(returns, window); });
    const double corr_ser = time_best(
        repeat, [&] { reference::rolling_correlations(returns, window); });
    report("rolling correlations", corr_par, corr_ser);

    std::vector<PlanarGraph> pmfgs;
    const double pmfg_par = time_best(repeat, [&] { pmfgs = pmfg_sequence(corr); });
    const double pmfg_ser =
        time_best(repeat, [&] { reference::pmfg_sequence(corr); });
    report("pmfg filtering", pmfg_par, pmfg_ser);

    const StrengthSeries strengths = strength_series(corr);
    std::vector<ArimaFit> fits;
    const double arima_par =
        time_best(repeat, [&] { fits = fit_arima_batch(strengths.values); });
    const double arima_ser = time_best(
        repeat, [&] { reference::fit_arima_batch(strengths.values); });
    report("strength arima", arima_par, arima_ser);

    std::vector<Graph> layers;
    layers.reserve(pmfgs.size());
    for (const auto& p : pmfgs) layers.push_back(p.graph);
    const SupraEvolutionMatrix supra = build_supra(layers, fits);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(supra.dim());
    x /= std::sqrt(double(supra.dim()));
    Eigen::VectorXd y(supra.dim());
    const int mults = 200;
    const double mult_par = time_best(repeat, [&] {
        for (int k = 0; k < mults; ++k) supra.multiply(x, y);
    });
    const double mult_ser = time_best(repeat, [&] {
        for (int k = 0; k < mults; ++k) reference::supra_multiply(supra, x, y);
    });
    report("supra multiply x200", mult_par, mult_ser);

    const Eigen::MatrixXd scenarios = returns.returns;
    const std::vector<double> qs = default_q_grid();
    const double front_par = time_best(
        repeat, [&] { efficient_frontier(scenarios, qs, true); });
    const double front_ser = time_best(
        repeat, [&] { reference::efficient_frontier(scenarios, qs, true); });
    report("efficient frontier", front_par, front_ser);

    return 0;
}
