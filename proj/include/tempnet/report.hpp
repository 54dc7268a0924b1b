#pragma once

#include "tempnet/backtest.hpp"
#include "tempnet/pmfg.hpp"
#include "tempnet/temporal.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tempnet {

void write_topology_csv(const std::filesystem::path& path,
                        const std::vector<TopologyRow>& rows);

/// Rows in rank order: ticker,score,rank,method.
void write_centrality_csv(const std::filesystem::path& path,
                          const std::vector<std::string>& tickers,
                          const CentralityRanking& ranking);

/// q,risk,return,weights_json with weights keyed by ticker.
void write_frontier_csv(const std::filesystem::path& path,
                        const std::vector<std::string>& tickers,
                        const FrontierCurve& curve);

void write_es_csv(const std::filesystem::path& path, const EsCurve& curve);

/// Square matrix dump with ticker row/column labels.
void write_corr_csv(const std::filesystem::path& path,
                    const std::vector<std::string>& tickers,
                    const Eigen::MatrixXd& corr);

/// Edge list u,v,weight using ticker names, one row per PMFG edge.
void write_edges_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& tickers, const Graph& g);

/// Coordinate triplets row,col,value in layer-major indexing.
void write_supra_csv(const std::filesystem::path& path,
                     const SupraEvolutionMatrix& supra);

/// 16-hex-digit FNV-1a hash of the canonical config serialization.
std::string config_hash(const ExperimentConfig& config);

/// Creates `run_<run_id>_<confighash>` under out_root (run_id defaults to a
/// UTC timestamp), writes every artifact plus report.json, and returns the
/// directory. Existing files are overwritten, so a pinned run_id is
/// reproducible byte for byte.
std::filesystem::path write_report(const BacktestReport& report,
                                   const std::vector<std::string>& tickers,
                                   const std::filesystem::path& out_root,
                                   const std::string& run_id = "");

} // namespace tempnet
