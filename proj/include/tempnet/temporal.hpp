#pragma once

#include "tempnet/arima.hpp"
#include "tempnet/corr.hpp"
#include "tempnet/pmfg.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace tempnet {

/// Correlation strengths s_{i,t}: row sums of each window matrix, unit
/// diagonal included.
struct StrengthSeries {
    Eigen::MatrixXd values; // N x T
};

StrengthSeries strength_series(const CorrelationSequence& seq);

/// Block matrix of size NT x NT in layer-major order (index = t*N + i).
/// Diagonal blocks are the layer adjacencies; subdiagonal blocks W_{t,t-l}
/// are diagonal with the per-stock AR coefficients phi_{i,l}, identical for
/// every valid t. Everything above the diagonal blocks is zero.
struct SupraEvolutionMatrix {
    int n = 0; // stocks
    int t = 0; // layers
    std::vector<std::vector<std::vector<int>>> adj; // per layer, per vertex
    std::vector<Eigen::VectorXd> couplings;         // lag l-1 -> phi_{i,l}

    long dim() const { return static_cast<long>(n) * t; }

    /// y = M x; rows are filled in parallel, each by a sequential sum.
    void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

    struct Triplet {
        long row;
        long col;
        double value;
    };
    /// All nonzero entries, sorted by (row, col).
    std::vector<Triplet> to_triplets() const;
    Eigen::MatrixXd dense() const;
};

SupraEvolutionMatrix build_supra(const std::vector<Graph>& layers,
                                 const std::vector<ArimaFit>& fits);

struct Eigenpair {
    double lambda1 = 0.0;
    Eigen::VectorXd vec; // unit L2 norm, entry sum >= 0
};

/// Leading eigenpair by power iteration; on non-convergence falls back to a
/// direct method that solves layer by layer from the one holding the largest
/// adjacency eigenvalue. Throws NumericError when the leading eigenvalue is
/// shared by several layers (degenerate spectrum).
Eigenpair leading_eigenpair(const SupraEvolutionMatrix& supra,
                            double tol = 1e-10, long max_iter = 100000);

struct CentralityRanking {
    Eigen::VectorXd scores;     // per stock
    Eigen::VectorXd components; // nu entries, layer-major; empty for hybrid
    double lambda1 = 0.0;
    std::string method;
    std::vector<int> order; // stock indices, most central first
};

/// c_i = sum over layers of nu_i^t (signed; absolute sums optional).
/// Ranking sorts c_i descending, ties broken by stock index.
CentralityRanking temporal_centrality(const Eigenpair& pair, int n, int t,
                                      bool absolute = false);

/// Unweighted union of the layers' edge sets.
Graph aggregate_network(const std::vector<Graph>& layers);

/// Average fractional ranks of degree, eigenvector centrality, closeness and
/// eccentricity on one graph, rescaled so higher score = more central.
/// Requires a connected graph.
CentralityRanking hybrid_centrality(const Graph& g);

std::vector<Graph> layer_graphs(const std::vector<PlanarGraph>& pmfgs);

} // namespace tempnet
