#include <doctest.h>

#include "oracles.hpp"
#include "tempnet/backtest.hpp"
#include "tempnet/csv.hpp"
#include "tempnet/errors.hpp"
#include "tempnet/panel.hpp"
#include "tempnet/portfolio.hpp"
#include "tempnet/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using doctest::Approx;
namespace fs = std::filesystem;

namespace {

tempnet::ReturnPanel factor_panel(int n_stocks, int n_days,
                                  std::uint64_t seed) {
    tempnet::FactorSpec spec;
    spec.n_stocks = n_stocks;
    spec.n_days = n_days;
    spec.betas.resize(n_stocks);
    for (int i = 0; i < n_stocks; ++i)
        spec.betas[i] = 0.5 + 1.0 * i / std::max(1, n_stocks - 1);
    spec.seed = seed;
    return tempnet::log_returns(tempnet::synth_one_factor(spec));
}

tempnet::ExperimentConfig small_config() {
    tempnet::ExperimentConfig config;
    config.window.delta = 60;
    config.window.step = 10;
    config.sizes = {4, 8};
    config.frontier_m = 6;
    config.q_grid = {0.0, 0.5, 2.0};
    return config;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<int> all_members(const tempnet::BacktestReport& report) {
    std::vector<int> flat;
    for (const auto& curve : report.frontiers)
        flat.insert(flat.end(), curve.members.begin(), curve.members.end());
    for (const auto& curve : report.es_curves)
        for (const auto& pt : curve.points)
            flat.insert(flat.end(), pt.members.begin(), pt.members.end());
    return flat;
}

} // namespace

TEST_CASE("experiment config validation") {
    const tempnet::ExperimentConfig base = small_config();
    constexpr int n_stocks = 16;
    constexpr long n_obs = 240;

    CHECK_NOTHROW(base.validate(n_stocks, n_obs, false));

    auto cfg = base;
    cfg.sizes.clear();
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, false),
                    tempnet::ValidationError);

    cfg = base;
    cfg.sizes = {0};
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, false),
                    tempnet::ValidationError);

    cfg = base;
    cfg.sizes = {n_stocks + 1};
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, false),
                    tempnet::ValidationError);

    cfg = base;
    cfg.frontier_m = 0;
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, false),
                    tempnet::ValidationError);

    cfg = base;
    cfg.frontier_m = n_stocks + 1;
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, false),
                    tempnet::ValidationError);

    cfg = base;
    cfg.tail_prob = 0.0;
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, false),
                    tempnet::ValidationError);
    cfg.tail_prob = 1.0;
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, false),
                    tempnet::ValidationError);

    cfg = base;
    cfg.q_grid.clear();
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, false),
                    tempnet::ValidationError);
    cfg.q_grid = {-0.1};
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, false),
                    tempnet::ValidationError);
    cfg.q_grid = {std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, false),
                    tempnet::ValidationError);

    cfg = base;
    cfg.window.delta = static_cast<long>(n_obs) + 1;
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, false),
                    tempnet::ValidationError);
}

TEST_CASE("out-of-sample config validation uses the estimation slice") {
    const tempnet::ExperimentConfig base = small_config();
    constexpr int n_stocks = 16;
    constexpr long n_obs = 300;

    auto cfg = base;
    cfg.estimation_len = 240;
    cfg.evaluation_len = 60;
    CHECK_NOTHROW(cfg.validate(n_stocks, n_obs, true));

    cfg.estimation_len = 0;
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, true),
                    tempnet::ValidationError);

    cfg.estimation_len = 260;
    cfg.evaluation_len = 60;
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, true),
                    tempnet::ValidationError);

    cfg.estimation_len = 240;
    cfg.evaluation_len = 1;
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, true),
                    tempnet::ValidationError);

    // Windows must fit inside the estimation slice, not the whole panel.
    cfg.estimation_len = 100;
    cfg.evaluation_len = 100;
    cfg.window.delta = 150;
    CHECK_THROWS_AS(cfg.validate(n_stocks, n_obs, true),
                    tempnet::ValidationError);
}

TEST_CASE("in-sample report shape") {
    const tempnet::ReturnPanel panel = factor_panel(16, 241, 7);
    const tempnet::ExperimentConfig config = small_config();
    const tempnet::BacktestReport report = tempnet::run_insample(panel, config);

    CHECK(report.out_of_sample == false);
    CHECK(report.n_stocks == 16);
    CHECK(report.n_obs == 240);

    const long windows = tempnet::window_count(240, 60, 10);
    CHECK(static_cast<long>(report.topology.size()) == windows);
    CHECK_FALSE(report.topology.front().jaccard.has_value());
    for (size_t t = 1; t < report.topology.size(); ++t)
        CHECK(report.topology[t].jaccard.has_value());

    CHECK(report.temporal.method == "temporal");
    CHECK(report.aggregated.method == "aggregated-hybrid");
    CHECK(report.temporal.order.size() == 16);

    REQUIRE(report.frontiers.size() == 4);
    using Method = tempnet::CentralityMethod;
    using Mode = tempnet::PortfolioMode;
    const Method want_method[] = {Method::temporal, Method::temporal,
                                  Method::aggregated, Method::aggregated};
    const Mode want_mode[] = {Mode::central, Mode::peripheral, Mode::central,
                              Mode::peripheral};
    for (int k = 0; k < 4; ++k) {
        const auto& curve = report.frontiers[k];
        CHECK(curve.method == want_method[k]);
        CHECK(curve.mode == want_mode[k]);
        CHECK(curve.m == 6);
        CHECK(curve.members.size() == 6);
        CHECK(std::is_sorted(curve.members.begin(), curve.members.end()));
        REQUIRE(curve.points.size() == 3);
        for (size_t p = 1; p < curve.points.size(); ++p)
            CHECK(curve.points[p].q > curve.points[p - 1].q);
        for (const auto& pt : curve.points) {
            CHECK(pt.weights.size() == 6);
            CHECK(pt.weights.sum() == Approx(1.0).epsilon(1e-9));
            CHECK(pt.weights.minCoeff() >= -1e-10);
        }
    }

    REQUIRE(report.es_curves.size() == 4);
    for (int k = 0; k < 4; ++k) {
        const auto& curve = report.es_curves[k];
        CHECK(curve.method == want_method[k]);
        CHECK(curve.mode == want_mode[k]);
        REQUIRE(curve.points.size() == 2);
        CHECK(curve.points[0].m == 4);
        CHECK(curve.points[1].m == 8);
        for (const auto& pt : curve.points) {
            CHECK(static_cast<int>(pt.members.size()) == pt.m);
            CHECK(pt.weights.sum() == Approx(1.0).epsilon(1e-9));
            // Reported ES must match an independent tail average of the
            // realized portfolio returns.
            const tempnet::ReturnPanel sub =
                tempnet::select_stocks(panel, pt.members);
            const Eigen::VectorXd pnl = sub.returns.transpose() * pt.weights;
            const double want = oracle::expected_shortfall(
                std::vector<double>(pnl.data(), pnl.data() + pnl.size()),
                config.tail_prob);
            CHECK(pt.es == Approx(want).epsilon(1e-10));
        }
    }

    // The member sets reuse the published rankings.
    for (int k = 0; k < 4; ++k) {
        const auto& ranking = (k < 2) ? report.temporal : report.aggregated;
        const auto want = tempnet::select_portfolio(ranking, 6, want_mode[k]);
        CHECK(report.frontiers[k].members == want);
    }

    // es_vs_size is the same computation, exposed without the frontiers.
    const auto curves = tempnet::es_vs_size(panel, config, false);
    REQUIRE(curves.size() == 4);
    for (int k = 0; k < 4; ++k)
        for (size_t p = 0; p < curves[k].points.size(); ++p)
            CHECK(curves[k].points[p].es == report.es_curves[k].points[p].es);
}

TEST_CASE("out-of-sample selection ignores the evaluation slice") {
    constexpr int est = 240;
    constexpr int eval = 60;
    const tempnet::ReturnPanel panel = factor_panel(16, est + eval + 1, 11);
    auto config = small_config();
    config.estimation_len = est;
    config.evaluation_len = eval;

    const tempnet::BacktestReport clean = tempnet::run_outofsample(panel, config);

    tempnet::ReturnPanel poisoned = panel;
    for (int i = 0; i < poisoned.n_stocks(); ++i)
        for (long t = est; t < est + eval; ++t)
            poisoned.returns(i, t) =
                -2.0 * poisoned.returns(i, t) + 0.001 * ((i + t) % 7 - 3);
    const tempnet::BacktestReport dirty =
        tempnet::run_outofsample(poisoned, config);

    // Networks, rankings and member sets come from the estimation slice only.
    CHECK(clean.temporal.order == dirty.temporal.order);
    CHECK(clean.aggregated.order == dirty.aggregated.order);
    CHECK(all_members(clean) == all_members(dirty));
    REQUIRE(clean.topology.size() == dirty.topology.size());
    for (size_t t = 0; t < clean.topology.size(); ++t) {
        CHECK(clean.topology[t].window_end == dirty.topology[t].window_end);
        CHECK(clean.topology[t].clustering == dirty.topology[t].clustering);
        CHECK(clean.topology[t].heterogeneity ==
              dirty.topology[t].heterogeneity);
    }

    // The evaluation numbers do depend on the evaluation slice.
    bool es_changed = false;
    for (size_t k = 0; k < clean.es_curves.size(); ++k)
        for (size_t p = 0; p < clean.es_curves[k].points.size(); ++p)
            if (clean.es_curves[k].points[p].es !=
                dirty.es_curves[k].points[p].es)
                es_changed = true;
    CHECK(es_changed);
}

TEST_CASE("out-of-sample weight fitting switch") {
    constexpr int est = 240;
    constexpr int eval = 60;
    const tempnet::ReturnPanel panel = factor_panel(16, est + eval + 1, 13);
    const tempnet::ReturnPanel est_slice = tempnet::slice_returns(panel, 0, est);
    const tempnet::ReturnPanel eval_slice =
        tempnet::slice_returns(panel, est, eval);

    auto config = small_config();
    config.estimation_len = est;
    config.evaluation_len = eval;

    SUBCASE("default fits weights on the evaluation slice") {
        const auto report = tempnet::run_outofsample(panel, config);
        for (const auto& curve : report.es_curves)
            for (const auto& pt : curve.points) {
                const auto sub = tempnet::select_stocks(eval_slice, pt.members);
                const auto direct =
                    tempnet::minimize_es(sub.returns, config.tail_prob);
                REQUIRE(direct.weights.size() == pt.weights.size());
                CHECK((pt.weights - direct.weights).cwiseAbs().maxCoeff() <=
                      1e-12);
            }
    }

    SUBCASE("fit_on_estimation fits weights upstream, reports downstream") {
        config.fit_on_estimation = true;
        const auto report = tempnet::run_outofsample(panel, config);

        for (const auto& curve : report.es_curves)
            for (const auto& pt : curve.points) {
                const auto sub = tempnet::select_stocks(est_slice, pt.members);
                const auto direct =
                    tempnet::minimize_es(sub.returns, config.tail_prob);
                CHECK((pt.weights - direct.weights).cwiseAbs().maxCoeff() <=
                      1e-12);

                // ES is still scored on the held-out slice.
                const auto sub_eval =
                    tempnet::select_stocks(eval_slice, pt.members);
                const Eigen::VectorXd pnl =
                    sub_eval.returns.transpose() * pt.weights;
                const double want = oracle::expected_shortfall(
                    std::vector<double>(pnl.data(), pnl.data() + pnl.size()),
                    config.tail_prob);
                CHECK(pt.es == Approx(want).epsilon(1e-10));
            }

        // Frontier weights solve the estimation-slice problem; risk and
        // return are restated against evaluation-slice moments.
        const Eigen::VectorXd eval_mean =
            tempnet::sample_mean(eval_slice.returns);
        const Eigen::MatrixXd eval_cov =
            tempnet::sample_covariance(eval_slice.returns);
        for (const auto& curve : report.frontiers) {
            const auto sub = tempnet::select_stocks(est_slice, curve.members);
            const auto direct = tempnet::efficient_frontier(
                sub.returns, config.q_grid, config.long_only);
            REQUIRE(direct.size() == curve.points.size());
            for (size_t p = 0; p < curve.points.size(); ++p) {
                const auto& pt = curve.points[p];
                CHECK((pt.weights - direct[p].weights).cwiseAbs().maxCoeff() <=
                      1e-12);
                Eigen::VectorXd full = Eigen::VectorXd::Zero(panel.n_stocks());
                for (size_t k = 0; k < curve.members.size(); ++k)
                    full(curve.members[k]) = pt.weights(static_cast<long>(k));
                CHECK(pt.risk == Approx(full.dot(eval_cov * full)).epsilon(1e-12));
                CHECK(pt.ret == Approx(eval_mean.dot(full)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("report directory layout and manifest") {
    const tempnet::ReturnPanel panel = factor_panel(12, 241, 17);
    auto config = small_config();
    config.sizes = {3, 5};
    config.frontier_m = 4;
    const tempnet::BacktestReport report = tempnet::run_insample(panel, config);

    const fs::path root =
        fs::temp_directory_path() / "tempnet_report_layout_test";
    fs::remove_all(root);
    const fs::path dir =
        tempnet::write_report(report, panel.tickers, root, "fixed");

    const std::string hash = tempnet::config_hash(config);
    CHECK(hash.size() == 16);
    for (char ch : hash)
        CHECK((std::isdigit(static_cast<unsigned char>(ch)) ||
               (ch >= 'a' && ch <= 'f')));
    CHECK(dir.filename().string() == "run_fixed_" + hash);

    std::set<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        files.insert(entry.path().filename().string());
    const std::set<std::string> want = {
        "report.json",
        "topology.csv",
        "centrality_temporal.csv",
        "centrality_aggregated-hybrid.csv",
        "frontier_central_temporal.csv",
        "frontier_peripheral_temporal.csv",
        "frontier_central_aggregated.csv",
        "frontier_peripheral_aggregated.csv",
        "es_central_temporal.csv",
        "es_peripheral_temporal.csv",
        "es_central_aggregated.csv",
        "es_peripheral_aggregated.csv",
    };
    CHECK(files == want);

    const auto manifest = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(manifest["topology"] == "topology.csv");
    REQUIRE(manifest["centrality"].size() == 2);
    CHECK(manifest["centrality"][0] == "centrality_temporal.csv");
    CHECK(manifest["centrality"][1] == "centrality_aggregated-hybrid.csv");
    REQUIRE(manifest["frontiers"].size() == 4);
    CHECK(manifest["frontiers"][0] == "frontier_central_temporal.csv");
    REQUIRE(manifest["es_curves"].size() == 4);
    CHECK(manifest["config"]["delta"] == 60);
    CHECK(manifest["config"]["sizes"] == nlohmann::json({3, 5}));
    CHECK(manifest["provenance"]["config_hash"] == hash);
    CHECK(manifest["provenance"]["sample"] == "in-sample");
    CHECK(manifest["provenance"]["stocks"] == 12);
    // No wall-clock anywhere, so pinned run ids reproduce byte for byte.
    for (const auto& [key, value] : manifest["provenance"].items())
        CHECK(value.dump().find("202") == std::string::npos);

    const std::string first = slurp(dir / "report.json");
    const fs::path again =
        tempnet::write_report(report, panel.tickers, root, "fixed");
    CHECK(again == dir);
    CHECK(slurp(dir / "report.json") == first);

    fs::remove_all(root);
}

TEST_CASE("artifact csv contents") {
    const tempnet::ReturnPanel panel = factor_panel(12, 241, 17);
    auto config = small_config();
    config.sizes = {3, 5};
    config.frontier_m = 4;
    const tempnet::BacktestReport report = tempnet::run_insample(panel, config);

    const fs::path root = fs::temp_directory_path() / "tempnet_report_csv_test";
    fs::remove_all(root);
    const fs::path dir =
        tempnet::write_report(report, panel.tickers, root, "csv");

    SUBCASE("topology") {
        std::ifstream in(dir / "topology.csv", std::ios::binary);
        const auto rows = tempnet::csv::read_rows(in);
        REQUIRE(rows.size() == report.topology.size() + 1);
        CHECK(rows[0].cells ==
              std::vector<std::string>{"window_end", "C", "L", "gamma",
                                       "jaccard"});
        CHECK(rows[1].cells[4].empty()); // no previous window to compare with
        CHECK(rows[1].cells[0] == report.topology[0].window_end);
        CHECK(tempnet::csv::parse_double(rows[1].cells[1], 2, 2) ==
              Approx(report.topology[0].clustering).epsilon(1e-12));
    }

    SUBCASE("centrality") {
        std::ifstream in(dir / "centrality_temporal.csv", std::ios::binary);
        const auto rows = tempnet::csv::read_rows(in);
        REQUIRE(rows.size() == 13);
        CHECK(rows[0].cells ==
              std::vector<std::string>{"ticker", "score", "rank", "method"});
        double prev = std::numeric_limits<double>::infinity();
        for (size_t r = 1; r < rows.size(); ++r) {
            CHECK(rows[r].cells[2] == std::to_string(r));
            CHECK(rows[r].cells[3] == "temporal");
            const double score =
                tempnet::csv::parse_double(rows[r].cells[1], 0, 0);
            CHECK(score <= prev + 1e-15);
            prev = score;
        }
    }

    SUBCASE("frontier weights parse as json keyed by ticker") {
        std::ifstream in(dir / "frontier_central_temporal.csv",
                         std::ios::binary);
        const auto rows = tempnet::csv::read_rows(in);
        REQUIRE(rows.size() == 4); // header + one per q
        CHECK(rows[0].cells ==
              std::vector<std::string>{"q", "risk", "return", "weights_json"});
        const auto& curve = report.frontiers[0];
        for (size_t r = 1; r < rows.size(); ++r) {
            const auto weights = nlohmann::json::parse(rows[r].cells[3]);
            REQUIRE(weights.size() == curve.members.size());
            double sum = 0.0;
            for (size_t k = 0; k < curve.members.size(); ++k) {
                const std::string& ticker = panel.tickers[curve.members[k]];
                REQUIRE(weights.contains(ticker));
                sum += weights[ticker].get<double>();
            }
            CHECK(sum == Approx(1.0).epsilon(1e-9));
        }
    }

    SUBCASE("es curve") {
        std::ifstream in(dir / "es_peripheral_aggregated.csv",
                         std::ios::binary);
        const auto rows = tempnet::csv::read_rows(in);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].cells ==
              std::vector<std::string>{"m", "mode", "method", "es"});
        CHECK(rows[1].cells[0] == "3");
        CHECK(rows[2].cells[0] == "5");
        CHECK(rows[1].cells[1] == "peripheral");
        CHECK(rows[1].cells[2] == "aggregated");
    }

    fs::remove_all(root);
}

TEST_CASE("config hash is stable and input sensitive") {
    const auto config = small_config();
    const std::string h1 = tempnet::config_hash(config);
    CHECK(h1 == tempnet::config_hash(config));

    auto other = config;
    other.tail_prob = 0.01;
    CHECK(tempnet::config_hash(other) != h1);

    other = config;
    other.seed = 42;
    CHECK(tempnet::config_hash(other) != h1);
}

TEST_CASE("report writer rejects a mismatched ticker list") {
    const tempnet::ReturnPanel panel = factor_panel(12, 241, 17);
    auto config = small_config();
    config.sizes = {3};
    config.frontier_m = 4;
    const auto report = tempnet::run_insample(panel, config);
    std::vector<std::string> short_list(panel.tickers.begin(),
                                        panel.tickers.end() - 1);
    CHECK_THROWS_AS(tempnet::write_report(report, short_list,
                                          fs::temp_directory_path(), "bad"),
                    tempnet::ValidationError);
}
