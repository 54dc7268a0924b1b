#include "tempnet/temporal.hpp"

#include "tempnet/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <string>

namespace tempnet {

namespace {

void fix_sign(Eigen::VectorXd& v) {
    double sum = v.sum();
    if (sum < 0.0) {
        v = -v;
        return;
    }
    if (sum == 0.0) {
        for (long k = 0; k < v.size(); ++k) {
            if (v(k) != 0.0) {
                if (v(k) < 0.0) v = -v;
                return;
            }
        }
    }
}

Eigen::MatrixXd layer_dense(const SupraEvolutionMatrix& supra, int t) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(supra.n, supra.n);
    for (int i = 0; i < supra.n; ++i)
        for (int j : supra.adj[t][i]) a(i, j) = 1.0;
    return a;
}

std::vector<int> order_by_score(const Eigen::VectorXd& scores) {
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores(a) != scores(b)) return scores(a) > scores(b);
        return a < b;
    });
    return order;
}

/// Values within 1e-9 relative of a tie group's anchor count as tied; the
/// eigenvector measure carries solver noise that exact comparison would split.
bool near_tie(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Rank 1 = most central; tied values share the average of their positions.
std::vector<double> fractional_ranks(const std::vector<double>& values,
                                     bool higher_better) {
    const int n = static_cast<int>(values.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (values[a] != values[b])
            return higher_better ? values[a] > values[b] : values[a] < values[b];
        return a < b;
    });
    std::vector<double> ranks(n, 0.0);
    int start = 0;
    while (start < n) {
        int stop = start;
        while (stop + 1 < n && near_tie(values[idx[stop + 1]], values[idx[start]]))
            ++stop;
        const double mean_rank = (start + stop) / 2.0 + 1.0;
        for (int k = start; k <= stop; ++k) ranks[idx[k]] = mean_rank;
        start = stop + 1;
    }
    return ranks;
}

std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int s) {
    std::vector<int> dist(adj.size(), -1);
    dist[s] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : adj[u])
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    return dist;
}

} // namespace

StrengthSeries strength_series(const CorrelationSequence& seq) {
    const int n = seq.n_stocks();
    const int t = seq.n_windows();
    if (n == 0 || t == 0) throw ValidationError("empty correlation sequence");
    StrengthSeries out;
    out.values.resize(n, t);
    for (int w = 0; w < t; ++w) out.values.col(w) = seq.windows[w].rowwise().sum();
    return out;
}

void SupraEvolutionMatrix::multiply(const Eigen::VectorXd& x,
                                    Eigen::VectorXd& y) const {
    const long d = dim();
    if (x.size() != d) throw ValidationError("vector length mismatch");
    y.resize(d);
    const int lags = static_cast<int>(couplings.size());
#pragma omp parallel for schedule(static)
    for (long r = 0; r < d; ++r) {
        const int layer = static_cast<int>(r / n);
        const int i = static_cast<int>(r % n);
        const long base = static_cast<long>(layer) * n;
        double acc = 0.0;
        for (int j : adj[layer][i]) acc += x(base + j);
        for (int l = 1; l <= lags && l <= layer; ++l)
            acc += couplings[l - 1](i) * x(base - static_cast<long>(l) * n + i);
        y(r) = acc;
    }
}

std::vector<SupraEvolutionMatrix::Triplet> SupraEvolutionMatrix::to_triplets() const {
    std::vector<Triplet> trips;
    const int lags = static_cast<int>(couplings.size());
    for (int layer = 0; layer < t; ++layer) {
        const long base = static_cast<long>(layer) * n;
        for (int i = 0; i < n; ++i) {
            for (int j : adj[layer][i]) trips.push_back({base + i, base + j, 1.0});
            for (int l = 1; l <= lags && l <= layer; ++l) {
                const double phi = couplings[l - 1](i);
                if (phi != 0.0)
                    trips.push_back({base + i, base - static_cast<long>(l) * n + i, phi});
            }
        }
    }
    std::sort(trips.begin(), trips.end(), [](const Triplet& a, const Triplet& b) {
        if (a.row != b.row) return a.row < b.row;
        return a.col < b.col;
    });
    return trips;
}

Eigen::MatrixXd SupraEvolutionMatrix::dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim(), dim());
    for (const auto& trip : to_triplets()) m(trip.row, trip.col) = trip.value;
    return m;
}

SupraEvolutionMatrix build_supra(const std::vector<Graph>& layers,
                                 const std::vector<ArimaFit>& fits) {
    if (layers.empty()) throw ValidationError("supra matrix needs at least one layer");
    const int n = layers.front().n;
    for (const auto& g : layers)
        if (g.n != n)
            throw ValidationError("layers disagree on vertex count: " +
                                  std::to_string(g.n) + " vs " + std::to_string(n));
    if (static_cast<int>(fits.size()) != n)
        throw ValidationError("expected " + std::to_string(n) + " ARIMA fits, got " +
                              std::to_string(fits.size()));

    SupraEvolutionMatrix supra;
    supra.n = n;
    supra.t = static_cast<int>(layers.size());
    supra.adj.reserve(layers.size());
    for (const auto& g : layers) supra.adj.push_back(g.adjacency());

    int max_p = 0;
    for (const auto& f : fits) max_p = std::max(max_p, f.p);
    supra.couplings.assign(max_p, Eigen::VectorXd::Zero(n));
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < fits[i].p; ++l)
            supra.couplings[l](i) = fits[i].phi[l];
    return supra;
}

Eigenpair leading_eigenpair(const SupraEvolutionMatrix& supra, double tol,
                            long max_iter) {
    if (supra.n < 1 || supra.t < 1) throw ValidationError("empty supra matrix");
    const long d = supra.dim();

    // The spectrum is the union of the layer spectra (the matrix is block
    // lower triangular), so a leading eigenvalue shared between layers is
    // detectable before iterating. Without this gate, power iteration on a
    // degenerate instance can converge to an arbitrary eigenspace mixture.
    std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>> solvers;
    solvers.reserve(supra.t);
    for (int layer = 0; layer < supra.t; ++layer)
        solvers.emplace_back(layer_dense(supra, layer));

    int t_star = 0;
    double lambda1 = -std::numeric_limits<double>::infinity();
    for (int layer = 0; layer < supra.t; ++layer) {
        const double top = solvers[layer].eigenvalues()(supra.n - 1);
        if (top > lambda1) {
            lambda1 = top;
            t_star = layer;
        }
    }

    const double sep = 1e-10 * std::max(1.0, std::abs(lambda1));
    std::vector<int> tied;
    for (int layer = 0; layer < supra.t; ++layer) {
        const auto& evs = solvers[layer].eigenvalues();
        const int top_idx = (layer == t_star) ? supra.n - 1 : supra.n;
        for (int k = 0; k < supra.n; ++k)
            if (k != top_idx && std::abs(evs(k) - lambda1) <= sep) {
                tied.push_back(layer);
                break;
            }
    }
    if (!tied.empty()) {
        std::string msg = "degenerate spectrum: leading eigenvalue of layer " +
                          std::to_string(t_star) + " recurs in layer(s)";
        for (int layer : tied) msg += " " + std::to_string(layer);
        throw NumericError(msg);
    }

    Eigen::VectorXd v = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(double(d)));
    Eigen::VectorXd u(d);
    for (long iter = 0; iter < max_iter; ++iter) {
        supra.multiply(v, u);
        const double lambda = v.dot(u);
        if ((u - lambda * v).norm() <= tol) {
            if (lambda < 0.0) break; // dominant eigenvalue must be the largest
            fix_sign(v); // Rayleigh quotient is invariant under the flip
            return {lambda, v};
        }
        const double norm = u.norm();
        if (norm == 0.0) break;
        v = u / norm;
    }

    // Direct path: the leading eigenvalue lives in the layer maximizing
    // lambda_max(A^t). The eigenvector is zero before that layer and follows
    // by forward substitution after it.

    Eigen::VectorXd vec = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd prev = solvers[t_star].eigenvectors().col(supra.n - 1);
    fix_sign(prev);
    vec.segment(static_cast<long>(t_star) * supra.n, supra.n) = prev;
    const int lags = static_cast<int>(supra.couplings.size());
    for (int layer = t_star + 1; layer < supra.t; ++layer) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(supra.n);
        for (int l = 1; l <= lags && l <= layer; ++l) {
            const long src = static_cast<long>(layer - l) * supra.n;
            rhs += supra.couplings[l - 1].cwiseProduct(Eigen::VectorXd(
                vec.segment(src, supra.n)));
        }
        if (rhs.isZero(0.0)) continue;
        // (lambda1 I - A) x = rhs via the spectral factorization of A.
        const auto& es = solvers[layer];
        Eigen::VectorXd coef = es.eigenvectors().transpose() * rhs;
        for (int k = 0; k < supra.n; ++k) coef(k) /= lambda1 - es.eigenvalues()(k);
        vec.segment(static_cast<long>(layer) * supra.n, supra.n) =
            es.eigenvectors() * coef;
    }

    vec /= vec.norm();
    fix_sign(vec);
    supra.multiply(vec, u);
    if ((u - lambda1 * vec).norm() > 1e-8)
        throw NumericError("leading eigenpair residual above tolerance");
    return {lambda1, vec};
}

CentralityRanking temporal_centrality(const Eigenpair& pair, int n, int t,
                                      bool absolute) {
    if (static_cast<long>(n) * t != pair.vec.size())
        throw ValidationError("eigenvector length does not match n*t");
    CentralityRanking rank;
    rank.components = pair.vec;
    rank.lambda1 = pair.lambda1;
    rank.method = "temporal";
    rank.scores = Eigen::VectorXd::Zero(n);
    for (int layer = 0; layer < t; ++layer)
        for (int i = 0; i < n; ++i) {
            const double entry = pair.vec(static_cast<long>(layer) * n + i);
            rank.scores(i) += absolute ? std::abs(entry) : entry;
        }
    rank.order = order_by_score(rank.scores);
    return rank;
}

Graph aggregate_network(const std::vector<Graph>& layers) {
    if (layers.empty()) throw ValidationError("no layers to aggregate");
    const int n = layers.front().n;
    std::set<std::pair<int, int>> edges;
    for (const auto& g : layers) {
        if (g.n != n) throw ValidationError("layers disagree on vertex count");
        for (const auto& e : g.edges)
            edges.emplace(std::min(e.u, e.v), std::max(e.u, e.v));
    }
    Graph out;
    out.n = n;
    for (const auto& [u, v] : edges) out.edges.push_back({u, v, 1.0});
    return out;
}

CentralityRanking hybrid_centrality(const Graph& g) {
    if (g.n < 2) throw ValidationError("hybrid centrality needs at least 2 vertices");
    const auto adj = g.adjacency();

    std::vector<double> degree(g.n), closeness(g.n), eccentricity(g.n);
    for (int s = 0; s < g.n; ++s) {
        degree[s] = static_cast<double>(adj[s].size());
        const auto dist = bfs_distances(adj, s);
        long total = 0;
        int ecc = 0;
        for (int v = 0; v < g.n; ++v) {
            if (dist[v] < 0)
                throw ValidationError("hybrid centrality requires a connected graph");
            total += dist[v];
            ecc = std::max(ecc, dist[v]);
        }
        closeness[s] = static_cast<double>(g.n - 1) / static_cast<double>(total);
        eccentricity[s] = ecc;
    }

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n, g.n);
    for (const auto& e : g.edges) {
        a(e.u, e.v) = 1.0;
        a(e.v, e.u) = 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    Eigen::VectorXd perron = es.eigenvectors().col(g.n - 1);
    fix_sign(perron);
    std::vector<double> eig(perron.data(), perron.data() + g.n);

    const auto r_deg = fractional_ranks(degree, true);
    const auto r_eig = fractional_ranks(eig, true);
    const auto r_clo = fractional_ranks(closeness, true);
    const auto r_ecc = fractional_ranks(eccentricity, false);

    CentralityRanking rank;
    rank.lambda1 = es.eigenvalues()(g.n - 1);
    rank.method = "aggregated-hybrid";
    rank.scores = Eigen::VectorXd(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double avg = (r_deg[i] + r_eig[i] + r_clo[i] + r_ecc[i]) / 4.0;
        rank.scores(i) = (g.n - avg) / (g.n - 1.0);
    }
    rank.order = order_by_score(rank.scores);
    return rank;
}

std::vector<Graph> layer_graphs(const std::vector<PlanarGraph>& pmfgs) {
    std::vector<Graph> out;
    out.reserve(pmfgs.size());
    for (const auto& pg : pmfgs) out.push_back(pg.graph);
    return out;
}

} // namespace tempnet
