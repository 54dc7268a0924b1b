#include "tempnet/pmfg.hpp"

#include "tempnet/errors.hpp"
#include "tempnet/parallel.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace tempnet {

namespace {

using BoostGraph =
    boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                          boost::no_property,
                          boost::property<boost::edge_index_t, int>>;

struct CandidateEdge {
    int u;
    int v;
    double w;
};

// Descending weight, ties by (u, v) ascending. Exact float comparison keeps
// the order reproducible.
bool candidate_before(const CandidateEdge& a, const CandidateEdge& b) {
    if (a.w != b.w) return a.w > b.w;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
}

std::vector<CandidateEdge> sorted_candidates(const Eigen::MatrixXd& corr) {
    const int n = static_cast<int>(corr.rows());
    if (corr.cols() != n) throw ValidationError("correlation matrix not square");
    std::vector<CandidateEdge> cands;
    cands.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double w = corr(i, j);
            if (!std::isfinite(w) || !std::isfinite(corr(j, i)))
                throw ValidationError("correlation matrix has non-finite entries");
            if (std::abs(w - corr(j, i)) > 1e-9)
                throw ValidationError("correlation matrix not symmetric at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            cands.push_back({i, j, w});
        }
    }
    std::sort(cands.begin(), cands.end(), candidate_before);
    return cands;
}

PlanarEmbedding extract_embedding(const Graph& g) {
    BoostGraph bg(g.n);
    for (const auto& e : g.edges) boost::add_edge(e.u, e.v, bg);
    int idx = 0;
    for (auto [ei, eend] = boost::edges(bg); ei != eend; ++ei)
        boost::put(boost::edge_index, bg, *ei, idx++);

    using EdgeDesc = boost::graph_traits<BoostGraph>::edge_descriptor;
    std::vector<std::vector<EdgeDesc>> storage(boost::num_vertices(bg));
    const bool planar = boost::boyer_myrvold_planarity_test(
        boost::boyer_myrvold_params::graph = bg,
        boost::boyer_myrvold_params::embedding = storage.data());
    if (!planar) throw NumericError("embedding requested for a non-planar graph");

    PlanarEmbedding embedding;
    embedding.order.resize(g.n);
    for (int u = 0; u < g.n; ++u)
        for (const auto& e : storage[u]) {
            const int s = static_cast<int>(boost::source(e, bg));
            const int t = static_cast<int>(boost::target(e, bg));
            embedding.order[u].push_back(s == u ? t : s);
        }
    return embedding;
}

std::vector<int> component_labels(const Graph& g, int* n_components) {
    std::vector<int> label(g.n, -1);
    const auto adj = g.adjacency();
    int comp = 0;
    for (int s = 0; s < g.n; ++s) {
        if (label[s] >= 0) continue;
        std::deque<int> queue{s};
        label[s] = comp;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v : adj[u])
                if (label[v] < 0) {
                    label[v] = comp;
                    queue.push_back(v);
                }
        }
        ++comp;
    }
    *n_components = comp;
    return label;
}

std::set<std::pair<int, int>> edge_set(const Graph& g) {
    std::set<std::pair<int, int>> s;
    for (const auto& e : g.edges)
        s.emplace(std::min(e.u, e.v), std::max(e.u, e.v));
    return s;
}

} // namespace

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(n, 0);
    for (const auto& e : edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

bool Graph::has_edge(int u, int v) const {
    for (const auto& e : edges)
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return true;
    return false;
}

PlanarityResult is_planar(const Graph& g) {
    for (const auto& e : g.edges)
        if (e.u == e.v || e.u < 0 || e.v < 0 || e.u >= g.n || e.v >= g.n)
            throw ValidationError("graph has a self-loop or vertex out of range");
    // Euler bound: a simple planar graph has at most 3n - 6 edges.
    if (g.n >= 3 && static_cast<long>(g.edges.size()) > 3L * g.n - 6)
        return {false, {}};
    BoostGraph bg(std::max(g.n, 1));
    for (const auto& e : g.edges) boost::add_edge(e.u, e.v, bg);
    if (!boost::boyer_myrvold_planarity_test(bg)) return {false, {}};
    return {true, extract_embedding(g)};
}

bool verify_embedding(const Graph& g, const PlanarEmbedding& embedding) {
    if (static_cast<int>(embedding.order.size()) != g.n) return false;
    const auto adj = g.adjacency();
    for (int u = 0; u < g.n; ++u) {
        std::vector<int> rot = embedding.order[u];
        std::sort(rot.begin(), rot.end());
        if (rot != adj[u]) return false; // rotation must permute the neighbors
    }

    // Trace faces of the rotation system: dart (u,v) -> (v, w) where w
    // follows u in v's rotation. Planar iff V - E + F = 2 per component.
    std::vector<std::vector<int>> pos(g.n);
    for (int u = 0; u < g.n; ++u) {
        pos[u].assign(g.n, -1);
        for (size_t k = 0; k < embedding.order[u].size(); ++k)
            pos[u][embedding.order[u][k]] = static_cast<int>(k);
    }
    std::map<std::pair<int, int>, char> visited;
    for (const auto& e : g.edges) {
        visited[{e.u, e.v}] = 0;
        visited[{e.v, e.u}] = 0;
    }
    long faces = 0;
    for (auto& [dart, seen] : visited) {
        if (seen) continue;
        ++faces;
        int u = dart.first, v = dart.second;
        while (!visited[{u, v}]) {
            visited[{u, v}] = 1;
            const int k = pos[v][u];
            const int w =
                embedding.order[v][(k + 1) % embedding.order[v].size()];
            u = v;
            v = w;
        }
    }

    int n_components = 0;
    const auto label = component_labels(g, &n_components);
    std::vector<long> comp_vertices(n_components, 0), comp_edges(n_components, 0);
    for (int u = 0; u < g.n; ++u) ++comp_vertices[label[u]];
    for (const auto& e : g.edges) ++comp_edges[label[e.u]];
    long expected = 0;
    for (int c = 0; c < n_components; ++c)
        if (comp_edges[c] > 0) expected += 2 - comp_vertices[c] + comp_edges[c];
    return faces == expected;
}

PlanarGraph build_pmfg(const Eigen::MatrixXd& corr) {
    const int n = static_cast<int>(corr.rows());
    if (n < 3) throw ValidationError("PMFG needs at least 3 vertices, got " +
                                     std::to_string(n));
    const auto cands = sorted_candidates(corr);
    const long target = 3L * (n - 2);

    PlanarGraph out;
    out.graph.n = n;
    BoostGraph bg(n);
    for (const auto& c : cands) {
        if (static_cast<long>(out.graph.edges.size()) == target) break;
        const auto [edge, added] = boost::add_edge(c.u, c.v, bg);
        if (boost::boyer_myrvold_planarity_test(bg)) {
            out.graph.edges.push_back({c.u, c.v, c.w});
        } else {
            boost::remove_edge(edge, bg);
        }
    }
    out.embedding = extract_embedding(out.graph);
    return out;
}

Graph build_mst(const Eigen::MatrixXd& corr) {
    const int n = static_cast<int>(corr.rows());
    if (n < 2) throw ValidationError("spanning tree needs at least 2 vertices");
    const auto cands = sorted_candidates(corr);

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    Graph tree;
    tree.n = n;
    for (const auto& c : cands) {
        const int ru = find(c.u), rv = find(c.v);
        if (ru == rv) continue;
        parent[ru] = rv;
        tree.edges.push_back({c.u, c.v, c.w});
        if (static_cast<int>(tree.edges.size()) == n - 1) break;
    }
    return tree;
}

double clustering_coefficient(const Graph& g) {
    if (g.n == 0) throw ValidationError("clustering of empty graph");
    const auto adj = g.adjacency();
    double total = 0.0;
    for (int u = 0; u < g.n; ++u) {
        const auto& nbrs = adj[u];
        const size_t k = nbrs.size();
        if (k < 2) continue; // contributes 0
        long links = 0;
        for (size_t a = 0; a < k; ++a)
            for (size_t b = a + 1; b < k; ++b)
                if (std::binary_search(adj[nbrs[a]].begin(), adj[nbrs[a]].end(),
                                       nbrs[b]))
                    ++links;
        total += 2.0 * static_cast<double>(links) / (static_cast<double>(k) * (k - 1));
    }
    return total / g.n;
}

double avg_shortest_path(const Graph& g) {
    if (g.n < 2) throw ValidationError("path length needs at least 2 vertices");
    int n_components = 0;
    const auto label = component_labels(g, &n_components);
    if (n_components > 1) {
        std::vector<long> sizes(n_components, 0);
        for (int u = 0; u < g.n; ++u) ++sizes[label[u]];
        std::string msg = "graph disconnected; component sizes:";
        for (long s : sizes) msg += " " + std::to_string(s);
        throw ValidationError(msg);
    }

    const auto adj = g.adjacency();
    long long total = 0;
    std::vector<int> dist(g.n);
    for (int s = 0; s < g.n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
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
        for (int v = s + 1; v < g.n; ++v) total += dist[v];
    }
    const double pairs = static_cast<double>(g.n) * (g.n - 1) / 2.0;
    return static_cast<double>(total) / pairs;
}

double heterogeneity(const Graph& g) {
    if (g.n < 2) throw ValidationError("heterogeneity needs at least 2 vertices");
    const auto deg = g.degrees();
    for (int u = 0; u < g.n; ++u)
        if (deg[u] == 0)
            throw ValidationError("heterogeneity undefined: vertex " +
                                  std::to_string(u) + " is isolated");
    double sum = 0.0;
    for (const auto& e : g.edges)
        sum += 1.0 / std::sqrt(static_cast<double>(deg[e.u]) * deg[e.v]);
    const double numerator = g.n - 2.0 * sum;
    const double denominator = g.n - 2.0 * std::sqrt(static_cast<double>(g.n) - 1.0);
    if (denominator == 0.0) // n = 2: only K2, which is regular
        return 0.0;
    return numerator / denominator;
}

double jaccard(const Graph& g1, const Graph& g2) {
    if (g1.n != g2.n)
        throw ValidationError("jaccard requires graphs on the same vertex set");
    const auto e1 = edge_set(g1);
    const auto e2 = edge_set(g2);
    long inter = 0;
    for (const auto& e : e1) inter += e2.count(e);
    const long uni = static_cast<long>(e1.size() + e2.size()) - inter;
    if (uni == 0) return 1.0; // identical empty edge sets
    return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<PlanarGraph> pmfg_sequence(const CorrelationSequence& seq) {
    std::vector<PlanarGraph> graphs(seq.n_windows());
    parallel_for_indexed(seq.n_windows(),
                         [&](int t) { graphs[t] = build_pmfg(seq.windows[t]); });
    return graphs;
}

std::vector<TopologyReport> topology_series(const std::vector<PlanarGraph>& graphs) {
    std::vector<TopologyReport> out(graphs.size());
    parallel_for_indexed(static_cast<int>(graphs.size()), [&](int t) {
        out[t].clustering = clustering_coefficient(graphs[t].graph);
        out[t].path_length = avg_shortest_path(graphs[t].graph);
        out[t].heterogeneity = heterogeneity(graphs[t].graph);
        if (t > 0)
            out[t].jaccard_prev = jaccard(graphs[t - 1].graph, graphs[t].graph);
    });
    return out;
}

} // namespace tempnet
