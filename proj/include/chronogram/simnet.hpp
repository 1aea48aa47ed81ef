#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chronogram/windowing.hpp"

namespace chronogram {

class ZeroVector : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Salton's cosine of two nonnegative vectors. Summation runs in index
/// order so cosine(u, v) and cosine(v, u) agree bit-for-bit.
double cosine(std::span<const double> u, std::span<const double> v);

struct Edge {
    int a = 0;  // a < b, indices into SliceGraph::nodes
    int b = 0;
    double weight = 0.0;

    bool operator==(const Edge&) const = default;
};

struct SliceGraph {
    TimeWindow window;
    std::vector<Attribute> nodes;
    std::vector<Edge> edges;                  // sorted by (a, b)
    std::vector<std::vector<int>> components;  // each sorted; ordered by first node
    std::vector<int> component_of;            // node -> component index

    std::size_t size() const { return nodes.size(); }
    bool empty() const { return nodes.empty(); }
    std::vector<std::vector<int>> adjacency() const;
};

/// All-pairs cosine over attribute columns; an edge is kept when
/// cosine >= threshold. Isolated nodes become singleton components.
SliceGraph build_slice_graph(const IncidenceMatrix& matrix, double threshold);

/// Union-find over the edge list; fills `components` and `component_of`.
void compute_components(SliceGraph& graph);

inline constexpr double kMinEdgeLength = 0.05;

/// Shortest-path targets inside one connected component. `nodes` are
/// slice-graph indices; `dist` and `weight` are dense k x k.
struct ComponentDistances {
    std::vector<int> nodes;
    std::vector<double> dist;
    std::vector<double> weight;

    std::size_t size() const { return nodes.size(); }
    double d(std::size_t i, std::size_t j) const { return dist[i * nodes.size() + j]; }
    double w(std::size_t i, std::size_t j) const { return weight[i * nodes.size() + j]; }
};

struct DistanceTable {
    std::vector<ComponentDistances> components;  // aligned with SliceGraph::components
    std::size_t node_count = 0;
};

/// Edge length max(1 - cosine, kMinEdgeLength); d = Dijkstra distance
/// inside each component, w = d^-2. Cross-component pairs get no term.
DistanceTable target_distances(const SliceGraph& graph);

/// TSV dump: `kind:label<TAB>kind:label<TAB>cosine`.
std::string write_edge_tsv(const SliceGraph& graph);

}  // namespace chronogram
