#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chronogram/simnet.hpp"

namespace chronogram {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

/// Quadratic pull c * |x_node - target|^2 toward a position in another slice.
struct StressAnchor {
    int node = 0;
    Point target;
    double coefficient = 0.0;
};

struct StressParams {
    double alpha = 1.0;        // inter-slice stability coefficient
    int stability_window = 4;  // neighboring slices that contribute anchors
    int max_iters = 1000;      // majorization sweeps per slice solve
    double rel_tol = 1e-6;     // relative objective change that ends a solve
    int sweeps = 3;            // global passes over the slice sequence
    std::uint64_t seed = 1;
};

struct LayoutSlice {
    TimeWindow window;
    std::vector<Attribute> nodes;
    std::vector<Point> positions;  // aligned with nodes

    std::optional<Point> position_of(const Attribute& a) const;
};

struct Trajectory {
    std::vector<LayoutSlice> slices;
    std::vector<double> stress_log;               // final stress per slice, anchors excluded
    std::vector<std::vector<double>> sweep_log;   // [sweep][slice] stress after that sweep
};

/// Deterministic uniform doubles in [0, 1) from a 64-bit seed.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed);
    std::uint64_t next();
    double uniform();

private:
    std::uint64_t state_;
};

/// Seed used for the independent solve of the slice with this window index.
std::uint64_t slice_seed(std::uint64_t seed, int window_index);

/// Classical (Torgerson) scaling of one component, top two eigenvectors
/// found by seeded subspace iteration. Result is centered on the origin and
/// indexed like `component.nodes`.
std::vector<Point> classical_init(const ComponentDistances& component, std::uint64_t seed);

/// sum_{i<j} w_ij (|x_i - x_j| - d_ij)^2 + sum_anchors c |x - target|^2.
/// Positions are indexed by slice-graph node.
double slice_stress(std::span<const Point> positions, const DistanceTable& table,
                    std::span<const StressAnchor> anchors = {});

/// Analytic gradient of slice_stress. Coincident pairs contribute nothing.
std::vector<Point> stress_gradient(std::span<const Point> positions, const DistanceTable& table,
                                   std::span<const StressAnchor> anchors = {});

/// One Gauss-Seidel pass of the localized majorization update in node
/// order. Never increases slice_stress (up to rounding).
std::vector<Point> majorize_sweep(std::span<const Point> positions, const DistanceTable& table,
                                  std::span<const StressAnchor> anchors = {});

struct MajorizeResult {
    std::vector<Point> positions;
    double stress = 0.0;
    int iterations = 0;
};

/// Repeats majorize_sweep until the relative objective change drops
/// below `rel_tol` or `max_iters` passes have run.
MajorizeResult majorize(std::vector<Point> positions, const DistanceTable& table,
                        std::span<const StressAnchor> anchors, int max_iters, double rel_tol);

/// Nudges the later node of every exactly coincident same-component pair
/// by a seeded offset of magnitude 1e-9.
void separate_coincident(std::vector<Point>& positions, const DistanceTable& table, std::uint64_t seed);

/// Places component layouts on a row-major grid, largest first.
/// Output is in input order.
std::vector<std::vector<Point>> pack_components(const std::vector<std::vector<Point>>& layouts);

/// Single slice without temporal coupling: classical init and
/// majorization per component, then packing.
std::vector<Point> solve_slice_independent(const SliceGraph& graph, const DistanceTable& table,
                                           const StressParams& params, std::uint64_t seed);

/// Temporally coupled layout of a slice sequence.
Trajectory solve_trajectory(std::span<const SliceGraph> graphs, std::span<const DistanceTable> tables,
                            const StressParams& params);

}  // namespace chronogram
