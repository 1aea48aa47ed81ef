#include "chronogram/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

namespace chronogram {

namespace {

struct Box {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void add(const Point& p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    bool valid() const { return min_x <= max_x; }
    double width() const { return valid() ? max_x - min_x : 0.0; }
    double height() const { return valid() ? max_y - min_y : 0.0; }
    double extent() const { return std::max(width(), height()); }
};

Box bounding_box(std::span<const Point> pts) {
    Box b;
    for (const auto& p : pts) b.add(p);
    return b;
}

/// Locates every slice node inside the distance table.
struct NodeIndex {
    std::vector<int> component;
    std::vector<int> local;

    explicit NodeIndex(const DistanceTable& table)
        : component(table.node_count, -1), local(table.node_count, -1) {
        for (std::size_t c = 0; c < table.components.size(); ++c) {
            const auto& nodes = table.components[c].nodes;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                component[nodes[i]] = static_cast<int>(c);
                local[nodes[i]] = static_cast<int>(i);
            }
        }
    }
};

void check_positions(std::span<const Point> positions, const DistanceTable& table) {
    if (positions.size() != table.node_count)
        throw std::invalid_argument(
            fmt::format("layout has {} positions for {} nodes", positions.size(), table.node_count));
}

DistanceTable local_table(const ComponentDistances& comp) {
    DistanceTable t;
    ComponentDistances local = comp;
    std::iota(local.nodes.begin(), local.nodes.end(), 0);
    t.node_count = comp.size();
    t.components.push_back(std::move(local));
    return t;
}

void center(std::vector<Point>& pts) {
    if (pts.empty()) return;
    Point c;
    for (const auto& p : pts) {
        c.x += p.x;
        c.y += p.y;
    }
    c.x /= static_cast<double>(pts.size());
    c.y /= static_cast<double>(pts.size());
    for (auto& p : pts) {
        p.x -= c.x;
        p.y -= c.y;
    }
}

/// Independent layouts for the listed components, packed; indexed like
/// the concatenation of their node lists.
std::vector<std::vector<Point>> layout_components(const DistanceTable& table, std::span<const int> comps,
                                                  const StressParams& params, std::uint64_t seed) {
    std::vector<std::vector<Point>> layouts;
    layouts.reserve(comps.size());
    for (int c : comps) {
        const auto& comp = table.components[c];
        std::vector<Point> local = classical_init(comp, seed);
        const DistanceTable sub = local_table(comp);
        separate_coincident(local, sub, seed);
        MajorizeResult res = majorize(std::move(local), sub, {}, params.max_iters, params.rel_tol);
        center(res.positions);
        layouts.push_back(std::move(res.positions));
    }
    return pack_components(layouts);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void remove_mean(std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (auto& x : v) x -= m;
}

bool normalize(std::vector<double>& v) {
    const double n = std::sqrt(dot(v, v));
    if (!(n > 1e-300)) return false;
    for (auto& x : v) x /= n;
    return true;
}

}  // namespace

std::optional<Point> LayoutSlice::position_of(const Attribute& a) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), a);
    if (it == nodes.end() || *it != a) {
        // nodes are canonical-sorted in practice; fall back to a scan otherwise
        it = std::find(nodes.begin(), nodes.end(), a);
        if (it == nodes.end()) return std::nullopt;
    }
    return positions[static_cast<std::size_t>(it - nodes.begin())];
}

SeededRng::SeededRng(std::uint64_t seed) : state_(seed) {}

std::uint64_t SeededRng::next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SeededRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t slice_seed(std::uint64_t seed, int window_index) {
    SeededRng rng(seed ^ (0xA24BAED4963EE407ULL * static_cast<std::uint64_t>(window_index + 1)));
    return rng.next();
}

std::vector<Point> classical_init(const ComponentDistances& component, std::uint64_t seed) {
    const std::size_t n = component.size();
    if (n == 0) return {};
    if (n == 1) return {Point{0.0, 0.0}};
    if (n == 2) {
        const double d = component.d(0, 1);
        return {Point{-d / 2, 0.0}, Point{d / 2, 0.0}};
    }

    // Double-centered squared distances.
    std::vector<double> b(n * n);
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double d2 = component.d(i, j) * component.d(i, j);
            b[i * n + j] = d2;
            row_mean[i] += d2;
        }
    for (auto& m : row_mean) {
        grand += m;
        m /= static_cast<double>(n);
    }
    grand /= static_cast<double>(n * n);
    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double& v = b[i * n + j];
            v = -0.5 * (v - row_mean[i] - row_mean[j] + grand);
            frob += v * v;
        }
    // Shift by an upper bound on the spectral radius so the iteration
    // targets the largest algebraic eigenvalues.
    const double shift = std::sqrt(frob);

    auto apply_b = [&](const std::vector<double>& v) {
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += b[i * n + j] * v[j];
            out[i] = s;
        }
        return out;
    };

    SeededRng rng(seed);
    auto random_vector = [&] {
        std::vector<double> v(n);
        for (auto& x : v) x = rng.uniform() - 0.5;
        remove_mean(v);
        return v;
    };
    auto orthonormalize = [&](std::vector<double>& v1, std::vector<double>& v2) {
        remove_mean(v1);
        remove_mean(v2);
        while (!normalize(v1)) v1 = random_vector();
        auto proj = dot(v1, v2);
        for (std::size_t i = 0; i < n; ++i) v2[i] -= proj * v1[i];
        while (!normalize(v2)) {
            v2 = random_vector();
            proj = dot(v1, v2);
            for (std::size_t i = 0; i < n; ++i) v2[i] -= proj * v1[i];
        }
    };

    std::vector<double> v1 = random_vector();
    std::vector<double> v2 = random_vector();
    orthonormalize(v1, v2);

    constexpr int kMaxIters = 1000;
    constexpr double kTol = 1e-11;
    for (int it = 0; it < kMaxIters; ++it) {
        std::vector<double> w1 = apply_b(v1);
        std::vector<double> w2 = apply_b(v2);
        for (std::size_t i = 0; i < n; ++i) {
            w1[i] += shift * v1[i];
            w2[i] += shift * v2[i];
        }
        orthonormalize(w1, w2);
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            change = std::max({change, std::abs(w1[i] - v1[i]), std::abs(w2[i] - v2[i])});
        v1 = std::move(w1);
        v2 = std::move(w2);
        if (change < kTol) break;
    }

    // Rayleigh-Ritz on the converged plane.
    const auto bv1 = apply_b(v1);
    const auto bv2 = apply_b(v2);
    const double h11 = dot(v1, bv1), h12 = dot(v1, bv2), h22 = dot(v2, bv2);
    const double phi = 0.5 * std::atan2(2.0 * h12, h11 - h22);
    const double c = std::cos(phi), s = std::sin(phi);
    double lambda1 = c * c * h11 + 2 * c * s * h12 + s * s * h22;
    double lambda2 = s * s * h11 - 2 * c * s * h12 + c * c * h22;
    std::vector<double> e1(n), e2(n);
    for (std::size_t i = 0; i < n; ++i) {
        e1[i] = c * v1[i] + s * v2[i];
        e2[i] = -s * v1[i] + c * v2[i];
    }
    if (lambda2 > lambda1) {
        std::swap(lambda1, lambda2);
        std::swap(e1, e2);
    }
    const double s1 = std::sqrt(std::max(lambda1, 0.0));
    const double s2 = std::sqrt(std::max(lambda2, 0.0));
    std::vector<Point> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = Point{e1[i] * s1, e2[i] * s2};
    return out;
}

double slice_stress(std::span<const Point> positions, const DistanceTable& table,
                    std::span<const StressAnchor> anchors) {
    check_positions(positions, table);
    double stress = 0.0;
    for (const auto& comp : table.components) {
        const std::size_t k = comp.size();
        for (std::size_t i = 0; i < k; ++i) {
            const Point& pi = positions[comp.nodes[i]];
            for (std::size_t j = i + 1; j < k; ++j) {
                const Point& pj = positions[comp.nodes[j]];
                const double r = std::hypot(pi.x - pj.x, pi.y - pj.y) - comp.d(i, j);
                stress += comp.w(i, j) * r * r;
            }
        }
    }
    for (const auto& a : anchors) {
        const Point& p = positions[a.node];
        const double dx = p.x - a.target.x, dy = p.y - a.target.y;
        stress += a.coefficient * (dx * dx + dy * dy);
    }
    return stress;
}

std::vector<Point> stress_gradient(std::span<const Point> positions, const DistanceTable& table,
                                   std::span<const StressAnchor> anchors) {
    check_positions(positions, table);
    std::vector<Point> grad(positions.size());
    for (const auto& comp : table.components) {
        const std::size_t k = comp.size();
        for (std::size_t i = 0; i < k; ++i) {
            const int ni = comp.nodes[i];
            for (std::size_t j = i + 1; j < k; ++j) {
                const int nj = comp.nodes[j];
                const double dx = positions[ni].x - positions[nj].x;
                const double dy = positions[ni].y - positions[nj].y;
                const double r = std::hypot(dx, dy);
                if (r == 0.0) continue;
                const double f = 2.0 * comp.w(i, j) * (r - comp.d(i, j)) / r;
                grad[ni].x += f * dx;
                grad[ni].y += f * dy;
                grad[nj].x -= f * dx;
                grad[nj].y -= f * dy;
            }
        }
    }
    for (const auto& a : anchors) {
        grad[a.node].x += 2.0 * a.coefficient * (positions[a.node].x - a.target.x);
        grad[a.node].y += 2.0 * a.coefficient * (positions[a.node].y - a.target.y);
    }
    return grad;
}

std::vector<Point> majorize_sweep(std::span<const Point> positions, const DistanceTable& table,
                                  std::span<const StressAnchor> anchors) {
    check_positions(positions, table);
    std::vector<Point> x(positions.begin(), positions.end());
    const NodeIndex index(table);

    std::vector<double> anchor_weight(x.size(), 0.0);
    std::vector<Point> anchor_pull(x.size());
    for (const auto& a : anchors) {
        anchor_weight[a.node] += a.coefficient;
        anchor_pull[a.node].x += a.coefficient * a.target.x;
        anchor_pull[a.node].y += a.coefficient * a.target.y;
    }

    for (std::size_t node = 0; node < x.size(); ++node) {
        const int c = index.component[node];
        if (c < 0) continue;
        const auto& comp = table.components[c];
        const auto i = static_cast<std::size_t>(index.local[node]);
        double den = anchor_weight[node];
        Point num = anchor_pull[node];
        for (std::size_t j = 0; j < comp.size(); ++j) {
            if (j == i) continue;
            const Point& xj = x[comp.nodes[j]];
            const double w = comp.w(i, j);
            const double dx = x[node].x - xj.x, dy = x[node].y - xj.y;
            const double r = std::hypot(dx, dy);
            const double pull = r > 0.0 ? comp.d(i, j) / r : 0.0;
            num.x += w * (xj.x + pull * dx);
            num.y += w * (xj.y + pull * dy);
            den += w;
        }
        if (den > 0.0) x[node] = Point{num.x / den, num.y / den};
    }
    return x;
}

MajorizeResult majorize(std::vector<Point> positions, const DistanceTable& table,
                        std::span<const StressAnchor> anchors, int max_iters, double rel_tol) {
    MajorizeResult res;
    double prev = slice_stress(positions, table, anchors);
    while (res.iterations < max_iters && prev > 0.0) {
        positions = majorize_sweep(positions, table, anchors);
        ++res.iterations;
        const double cur = slice_stress(positions, table, anchors);
        const bool done = prev - cur <= rel_tol * prev;
        prev = cur;
        if (done) break;
    }
    res.positions = std::move(positions);
    res.stress = prev;
    return res;
}

void separate_coincident(std::vector<Point>& positions, const DistanceTable& table, std::uint64_t seed) {
    check_positions(positions, table);
    constexpr double kJitter = 1e-9;
    for (const auto& comp : table.components) {
        for (std::size_t i = 0; i < comp.size(); ++i) {
            for (std::size_t j = i + 1; j < comp.size(); ++j) {
                Point& pj = positions[comp.nodes[j]];
                if (positions[comp.nodes[i]] != pj) continue;
                SeededRng rng(seed ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(comp.nodes[j] + 1)));
                const double angle = 2.0 * std::numbers::pi * rng.uniform();
                pj.x += kJitter * std::cos(angle);
                pj.y += kJitter * std::sin(angle);
            }
        }
    }
}

std::vector<std::vector<Point>> pack_components(const std::vector<std::vector<Point>>& layouts) {
    const std::size_t k = layouts.size();
    std::vector<Box> boxes(k);
    double extent = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        boxes[i] = bounding_box(layouts[i]);
        extent = std::max(extent, boxes[i].extent());
    }
    const double unit = extent > 0.0 ? extent : 1.0;
    const double pitch = unit + 0.1 * unit;

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return layouts[a].size() > layouts[b].size(); });

    const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(k))));
    std::vector<std::vector<Point>> out(k);
    for (std::size_t rank = 0; rank < k; ++rank) {
        const std::size_t i = order[rank];
        out[i] = layouts[i];
        if (!boxes[i].valid()) continue;
        const double ox = static_cast<double>(rank % cols) * pitch - boxes[i].min_x;
        const double oy = static_cast<double>(rank / cols) * pitch - boxes[i].min_y;
        for (auto& p : out[i]) {
            p.x += ox;
            p.y += oy;
        }
    }
    return out;
}

std::vector<Point> solve_slice_independent(const SliceGraph& graph, const DistanceTable& table,
                                           const StressParams& params, std::uint64_t seed) {
    std::vector<Point> positions(graph.size());
    std::vector<int> comps(table.components.size());
    std::iota(comps.begin(), comps.end(), 0);
    const auto packed = layout_components(table, comps, params, seed);
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const auto& nodes = table.components[c].nodes;
        for (std::size_t i = 0; i < nodes.size(); ++i) positions[nodes[i]] = packed[c][i];
    }
    return positions;
}

namespace {

class TrajectorySolver {
public:
    TrajectorySolver(std::span<const SliceGraph> graphs, std::span<const DistanceTable> tables,
                     const StressParams& params)
        : graphs_(graphs), tables_(tables), params_(params), positions_(graphs.size()), solved_(graphs.size()) {
        for (const auto& g : graphs) {
            std::map<Attribute, int> idx;
            for (std::size_t i = 0; i < g.nodes.size(); ++i) idx.emplace(g.nodes[i], static_cast<int>(i));
            index_.push_back(std::move(idx));
        }
    }

    Trajectory run() {
        const std::size_t n = graphs_.size();
        Trajectory traj;
        const bool coupled = params_.alpha > 0.0 && params_.stability_window > 0;

        for (std::size_t t = 0; t < n; ++t) forward_init(t, coupled);
        traj.sweep_log.push_back(slice_stresses());

        if (coupled) {
            double objective = total_objective();
            for (int sweep = 2; sweep <= params_.sweeps; ++sweep) {
                for (std::size_t t = 0; t < n; ++t) relax(t);
                for (std::size_t t = n; t-- > 0;) relax(t);
                traj.sweep_log.push_back(slice_stresses());
                const double next = total_objective();
                const bool done = std::abs(objective - next) <= params_.rel_tol * objective;
                objective = next;
                if (done) break;
            }
        }

        for (std::size_t t = 0; t < n; ++t) {
            LayoutSlice s;
            s.window = graphs_[t].window;
            s.nodes = graphs_[t].nodes;
            s.positions = positions_[t];
            traj.slices.push_back(std::move(s));
        }
        traj.stress_log = traj.sweep_log.back();
        return traj;
    }

private:
    std::vector<StressAnchor> anchors_for(std::size_t t, bool include_future) const {
        std::vector<StressAnchor> anchors;
        const auto w = static_cast<std::ptrdiff_t>(params_.stability_window);
        const auto ti = static_cast<std::ptrdiff_t>(t);
        const auto last = include_future ? std::min<std::ptrdiff_t>(ti + w, static_cast<std::ptrdiff_t>(graphs_.size()) - 1)
                                         : ti - 1;
        for (std::ptrdiff_t other = std::max<std::ptrdiff_t>(0, ti - w); other <= last; ++other) {
            if (other == ti || !solved_[other]) continue;
            const auto& other_index = index_[other];
            for (std::size_t i = 0; i < graphs_[t].nodes.size(); ++i) {
                auto it = other_index.find(graphs_[t].nodes[i]);
                if (it == other_index.end()) continue;
                anchors.push_back({static_cast<int>(i), positions_[other][it->second], params_.alpha});
            }
        }
        return anchors;
    }

    void forward_init(std::size_t t, bool coupled) {
        const SliceGraph& g = graphs_[t];
        const DistanceTable& table = tables_[t];
        const std::uint64_t seed = slice_seed(params_.seed, g.window.index);
        solved_[t] = true;
        if (g.empty()) return;

        const auto anchors = coupled ? anchors_for(t, false) : std::vector<StressAnchor>{};
        if (anchors.empty()) {
            positions_[t] = solve_slice_independent(g, table, params_, seed);
            return;
        }

        std::vector<Point> pos(g.size());
        std::vector<bool> placed(g.size(), false);
        // Shared nodes start where they were last seen.
        const auto w = static_cast<std::ptrdiff_t>(params_.stability_window);
        for (std::size_t i = 0; i < g.size(); ++i) {
            for (auto other = static_cast<std::ptrdiff_t>(t) - 1; other >= 0 && other >= static_cast<std::ptrdiff_t>(t) - w;
                 --other) {
                auto it = index_[other].find(g.nodes[i]);
                if (it == index_[other].end()) continue;
                pos[i] = positions_[other][it->second];
                placed[i] = true;
                break;
            }
        }
        // New nodes go to the centroid of their placed neighbors.
        const auto adj = g.adjacency();
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (placed[i]) continue;
                Point sum;
                int count = 0;
                for (int j : adj[i]) {
                    if (!placed[j]) continue;
                    sum.x += pos[j].x;
                    sum.y += pos[j].y;
                    ++count;
                }
                if (count == 0) continue;
                pos[i] = Point{sum.x / count, sum.y / count};
                placed[i] = true;
                changed = true;
            }
        }
        // Components with no history are laid out on their own and set
        // beside the warm part.
        std::vector<int> fresh;
        Box warm;
        for (std::size_t c = 0; c < g.components.size(); ++c) {
            if (placed[g.components[c].front()]) {
                for (int i : g.components[c]) warm.add(pos[i]);
            } else {
                fresh.push_back(static_cast<int>(c));
            }
        }
        if (!fresh.empty()) {
            const auto packed = layout_components(table, fresh, params_, seed);
            Box block;
            for (const auto& layout : packed)
                for (const auto& p : layout) block.add(p);
            const double unit = std::max(warm.extent(), block.extent());
            const double gap = 0.1 * (unit > 0.0 ? unit : 1.0);
            const double ox = warm.max_x + gap - block.min_x;
            const double oy = warm.min_y - block.min_y;
            for (std::size_t f = 0; f < fresh.size(); ++f) {
                const auto& nodes = table.components[fresh[f]].nodes;
                for (std::size_t i = 0; i < nodes.size(); ++i)
                    pos[nodes[i]] = Point{packed[f][i].x + ox, packed[f][i].y + oy};
            }
        }

        separate_coincident(pos, table, seed);
        positions_[t] = majorize(std::move(pos), table, anchors, params_.max_iters, params_.rel_tol).positions;
    }

    void relax(std::size_t t) {
        if (graphs_[t].empty()) return;
        const auto anchors = anchors_for(t, true);
        if (anchors.empty()) return;
        positions_[t] = majorize(std::move(positions_[t]), tables_[t], anchors, params_.max_iters, params_.rel_tol)
                            .positions;
    }

    std::vector<double> slice_stresses() const {
        std::vector<double> out(graphs_.size(), 0.0);
        for (std::size_t t = 0; t < graphs_.size(); ++t)
            if (!graphs_[t].empty()) out[t] = slice_stress(positions_[t], tables_[t]);
        return out;
    }

    double total_objective() const {
        double total = 0.0;
        for (std::size_t t = 0; t < graphs_.size(); ++t)
            if (!graphs_[t].empty()) total += slice_stress(positions_[t], tables_[t], anchors_for(t, true));
        return total;
    }

    std::span<const SliceGraph> graphs_;
    std::span<const DistanceTable> tables_;
    StressParams params_;
    std::vector<std::vector<Point>> positions_;
    std::vector<bool> solved_;
    std::vector<std::map<Attribute, int>> index_;
};

}  // namespace

Trajectory solve_trajectory(std::span<const SliceGraph> graphs, std::span<const DistanceTable> tables,
                            const StressParams& params) {
    if (graphs.size() != tables.size())
        throw std::invalid_argument(fmt::format("{} graphs but {} distance tables", graphs.size(), tables.size()));
    for (std::size_t t = 0; t < graphs.size(); ++t)
        if (tables[t].node_count != graphs[t].size())
            throw std::invalid_argument(fmt::format("distance table {} does not match its graph", t));
    return TrajectorySolver(graphs, tables, params).run();
}

}  // namespace chronogram
