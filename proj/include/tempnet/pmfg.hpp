#pragma once

#include "tempnet/corr.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace tempnet {

struct Edge {
    int u;
    int v;
    double w;
};

/// Simple undirected graph. Edges are stored once with u < v.
struct Graph {
    int n = 0;
    std::vector<Edge> edges;

    std::vector<std::vector<int>> adjacency() const;
    std::vector<int> degrees() const;
    bool has_edge(int u, int v) const;
};

/// Combinatorial embedding: neighbors of each vertex in rotation order.
/// Serves as the planarity certificate; validated with Euler's formula.
struct PlanarEmbedding {
    std::vector<std::vector<int>> order;
};

struct PlanarGraph {
    Graph graph;
    PlanarEmbedding embedding;
};

struct PlanarityResult {
    bool planar = false;
    PlanarEmbedding embedding; // meaningful only when planar
};

PlanarityResult is_planar(const Graph& g);

/// Checks V - E + F = 1 + C by tracing faces of the rotation system.
bool verify_embedding(const Graph& g, const PlanarEmbedding& embedding);

/// Greedy planar filter: edges inserted in descending weight order, kept iff
/// the graph stays planar, stopping at 3(n-2) edges. Ties broken by
/// (min(i,j), max(i,j)) ascending.
PlanarGraph build_pmfg(const Eigen::MatrixXd& corr);

/// Maximum-weight spanning tree under the same ordering as build_pmfg.
Graph build_mst(const Eigen::MatrixXd& corr);

/// Mean local clustering over all vertices; degree <= 1 contributes 0.
double clustering_coefficient(const Graph& g);

/// Mean BFS distance over unordered vertex pairs; errors when disconnected.
double avg_shortest_path(const Graph& g);

/// Degree-based heterogeneity index in [0, 1]: 0 for regular graphs,
/// 1 for the star. Errors on isolated vertices.
double heterogeneity(const Graph& g);

/// Edge-set overlap |E1 ∩ E2| / |E1 ∪ E2|; requires the same vertex set.
double jaccard(const Graph& g1, const Graph& g2);

struct TopologyReport {
    double clustering = 0.0;
    double path_length = 0.0;
    double heterogeneity = 0.0;
    std::optional<double> jaccard_prev; // absent for the first window
};

/// One PMFG per correlation window; windows are processed in parallel.
std::vector<PlanarGraph> pmfg_sequence(const CorrelationSequence& seq);

std::vector<TopologyReport> topology_series(const std::vector<PlanarGraph>& graphs);

} // namespace tempnet
