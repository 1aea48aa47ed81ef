#include "chronogram/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

#include <fmt/format.h>

namespace chronogram {

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw std::invalid_argument(fmt::format("cosine: dimension mismatch {} vs {}", u.size(), v.size()));
    double dot = 0.0, uu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) throw ZeroVector("cosine of a zero vector is undefined");
    return dot / (std::sqrt(uu) * std::sqrt(vv));
}

std::vector<std::vector<int>> SliceGraph::adjacency() const {
    std::vector<std::vector<int>> adj(nodes.size());
    for (const auto& e : edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());
    return adj;
}

void compute_components(SliceGraph& graph) {
    const int n = static_cast<int>(graph.nodes.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& e : graph.edges) {
        int ra = find(e.a), rb = find(e.b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    graph.components.clear();
    graph.component_of.assign(n, -1);
    std::vector<int> root_to_comp(n, -1);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (root_to_comp[r] < 0) {
            root_to_comp[r] = static_cast<int>(graph.components.size());
            graph.components.emplace_back();
        }
        graph.component_of[i] = root_to_comp[r];
        graph.components[root_to_comp[r]].push_back(i);
    }
}

SliceGraph build_slice_graph(const IncidenceMatrix& matrix, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw std::invalid_argument(fmt::format("threshold {} outside [0, 1]", threshold));
    SliceGraph g;
    g.window = matrix.window;
    g.nodes = matrix.attributes;

    std::vector<std::vector<double>> columns;
    columns.reserve(matrix.cols());
    for (std::size_t c = 0; c < matrix.cols(); ++c) columns.push_back(matrix.column(c));

    const int n = static_cast<int>(g.nodes.size());
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double cs = cosine(columns[a], columns[b]);
            if (cs >= threshold) g.edges.push_back({a, b, cs});
        }
    }
    compute_components(g);
    return g;
}

DistanceTable target_distances(const SliceGraph& graph) {
    DistanceTable table;
    table.node_count = graph.nodes.size();

    // adjacency with floored lengths
    std::vector<std::vector<std::pair<int, double>>> adj(graph.nodes.size());
    for (const auto& e : graph.edges) {
        const double len = std::max(1.0 - e.weight, kMinEdgeLength);
        adj[e.a].emplace_back(e.b, len);
        adj[e.b].emplace_back(e.a, len);
    }

    std::vector<int> local(graph.nodes.size(), -1);
    for (const auto& comp : graph.components) {
        ComponentDistances cd;
        cd.nodes = comp;
        const std::size_t k = comp.size();
        for (std::size_t i = 0; i < k; ++i) local[comp[i]] = static_cast<int>(i);
        cd.dist.assign(k * k, 0.0);
        cd.weight.assign(k * k, 0.0);

        using Item = std::pair<double, int>;
        for (std::size_t s = 0; s < k; ++s) {
            std::vector<double> best(k, std::numeric_limits<double>::infinity());
            std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
            best[s] = 0.0;
            pq.emplace(0.0, static_cast<int>(s));
            while (!pq.empty()) {
                auto [du, u] = pq.top();
                pq.pop();
                if (du > best[u]) continue;
                for (auto [v_global, len] : adj[comp[u]]) {
                    const int v = local[v_global];
                    if (du + len < best[v]) {
                        best[v] = du + len;
                        pq.emplace(best[v], v);
                    }
                }
            }
            for (std::size_t t = 0; t < k; ++t) {
                cd.dist[s * k + t] = best[t];
                cd.weight[s * k + t] = t == s ? 0.0 : 1.0 / (best[t] * best[t]);
            }
        }
        // Dijkstra in floating point can differ in the last ulp between the
        // two directions; keep the table exactly symmetric.
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                cd.dist[j * k + i] = cd.dist[i * k + j];
                cd.weight[j * k + i] = cd.weight[i * k + j];
            }
        table.components.push_back(std::move(cd));
    }
    return table;
}

std::string write_edge_tsv(const SliceGraph& graph) {
    std::string out;
    for (const auto& e : graph.edges)
        out += fmt::format("{}\t{}\t{:.6f}\n", graph.nodes[e.a].key(), graph.nodes[e.b].key(), e.weight);
    return out;
}

}  // namespace chronogram
