#include "tempnet/report.hpp"

#include "tempnet/csv.hpp"
#include "tempnet/errors.hpp"
#include "tempnet/version.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <utility>

namespace tempnet {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

std::string fmt(double v) { return csv::format_double(v); }

std::string weights_json(const std::vector<std::string>& tickers,
                         const std::vector<int>& members,
                         const Eigen::VectorXd& weights) {
    ordered_json obj = ordered_json::object();
    for (size_t k = 0; k < members.size(); ++k)
        obj[tickers[members[k]]] = weights(static_cast<long>(k));
    return obj.dump();
}

ordered_json config_json(const ExperimentConfig& config) {
    ordered_json j = ordered_json::object();
    j["delta"] = config.window.delta;
    j["step"] = config.window.step;
    j["estimation_len"] = config.estimation_len;
    j["evaluation_len"] = config.evaluation_len;
    j["sizes"] = config.sizes;
    j["frontier_m"] = config.frontier_m;
    j["tail_prob"] = config.tail_prob;
    j["q_grid"] = config.q_grid;
    j["long_only"] = config.long_only;
    j["absolute_centrality"] = config.absolute_centrality;
    j["fit_on_estimation"] = config.fit_on_estimation;
    j["seed"] = config.seed;
    return j;
}

std::string utc_timestamp() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

std::string curve_stem(const char* kind, const FrontierCurve& curve) {
    return std::string(kind) + "_" + to_string(curve.mode) + "_" +
           to_string(curve.method);
}

std::string curve_stem(const char* kind, const EsCurve& curve) {
    return std::string(kind) + "_" + to_string(curve.mode) + "_" +
           to_string(curve.method);
}

} // namespace

void write_topology_csv(const std::filesystem::path& path,
                        const std::vector<TopologyRow>& rows) {
    auto out = open_out(path);
    out << "window_end,C,L,gamma,jaccard\n";
    for (const auto& row : rows) {
        out << row.window_end << ',' << fmt(row.clustering) << ','
            << fmt(row.path_length) << ',' << fmt(row.heterogeneity) << ',';
        if (row.jaccard) out << fmt(*row.jaccard);
        out << '\n';
    }
}

void write_centrality_csv(const std::filesystem::path& path,
                          const std::vector<std::string>& tickers,
                          const CentralityRanking& ranking) {
    auto out = open_out(path);
    out << "ticker,score,rank,method\n";
    for (size_t pos = 0; pos < ranking.order.size(); ++pos) {
        const int stock = ranking.order[pos];
        out << tickers[stock] << ',' << fmt(ranking.scores(stock)) << ','
            << pos + 1 << ',' << ranking.method << '\n';
    }
}

void write_frontier_csv(const std::filesystem::path& path,
                        const std::vector<std::string>& tickers,
                        const FrontierCurve& curve) {
    auto out = open_out(path);
    out << "q,risk,return,weights_json\n";
    for (const auto& pt : curve.points) {
        out << fmt(pt.q) << ',' << fmt(pt.risk) << ',' << fmt(pt.ret) << ','
            << csv::quote(weights_json(tickers, curve.members, pt.weights))
            << '\n';
    }
}

void write_es_csv(const std::filesystem::path& path, const EsCurve& curve) {
    auto out = open_out(path);
    out << "m,mode,method,es\n";
    for (const auto& pt : curve.points)
        out << pt.m << ',' << to_string(curve.mode) << ','
            << to_string(curve.method) << ',' << fmt(pt.es) << '\n';
}

void write_corr_csv(const std::filesystem::path& path,
                    const std::vector<std::string>& tickers,
                    const Eigen::MatrixXd& corr) {
    auto out = open_out(path);
    out << "ticker";
    for (const auto& t : tickers) out << ',' << t;
    out << '\n';
    for (long i = 0; i < corr.rows(); ++i) {
        out << tickers[i];
        for (long j = 0; j < corr.cols(); ++j) out << ',' << fmt(corr(i, j));
        out << '\n';
    }
}

void write_edges_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& tickers, const Graph& g) {
    auto out = open_out(path);
    out << "u,v,weight\n";
    for (const auto& e : g.edges)
        out << tickers[e.u] << ',' << tickers[e.v] << ',' << fmt(e.w) << '\n';
}

void write_supra_csv(const std::filesystem::path& path,
                     const SupraEvolutionMatrix& supra) {
    auto out = open_out(path);
    out << "row,col,value\n";
    for (const auto& trip : supra.to_triplets())
        out << trip.row << ',' << trip.col << ',' << fmt(trip.value) << '\n';
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string canon = config_json(config).dump();
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char ch : canon) {
        hash ^= ch;
        hash *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(hash));
    return buf;
}

std::filesystem::path write_report(const BacktestReport& report,
                                   const std::vector<std::string>& tickers,
                                   const std::filesystem::path& out_root,
                                   const std::string& run_id) {
    if (static_cast<int>(tickers.size()) != report.n_stocks)
        throw ValidationError("ticker list does not match the report universe");
    const std::string stamp = run_id.empty() ? utc_timestamp() : run_id;
    const std::filesystem::path dir =
        out_root / ("run_" + stamp + "_" + config_hash(report.config));
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create run directory " + dir.string());

    ordered_json j = ordered_json::object();
    j["config"] = config_json(report.config);

    write_topology_csv(dir / "topology.csv", report.topology);
    j["topology"] = "topology.csv";

    j["centrality"] = ordered_json::array();
    for (const CentralityRanking* ranking : {&report.temporal, &report.aggregated}) {
        const std::string name = "centrality_" + ranking->method + ".csv";
        write_centrality_csv(dir / name, tickers, *ranking);
        j["centrality"].push_back(name);
    }

    j["frontiers"] = ordered_json::array();
    for (const auto& curve : report.frontiers) {
        const std::string name = curve_stem("frontier", curve) + ".csv";
        write_frontier_csv(dir / name, tickers, curve);
        j["frontiers"].push_back(name);
    }

    j["es_curves"] = ordered_json::array();
    for (const auto& curve : report.es_curves) {
        const std::string name = curve_stem("es", curve) + ".csv";
        write_es_csv(dir / name, curve);
        j["es_curves"].push_back(name);
    }

    ordered_json prov = ordered_json::object();
    prov["engine_version"] = kVersion;
    prov["config_hash"] = config_hash(report.config);
    prov["seed"] = report.config.seed;
    prov["sample"] = report.out_of_sample ? "out-of-sample" : "in-sample";
    prov["stocks"] = report.n_stocks;
    prov["observations"] = report.n_obs;
    if (!report.warnings.empty()) prov["warnings"] = report.warnings;
    j["provenance"] = prov;

    auto out = open_out(dir / "report.json");
    out << j.dump(2) << '\n';
    return dir;
}

} // namespace tempnet
