#pragma once

#include <span>
#include <string>
#include <vector>

#include "chronogram/pajek.hpp"

namespace chronogram {

struct FrameNode {
    Attribute attribute;
    Point position;  // normalized, inside [0.05, 0.95]^2
    double opacity = 1.0;

    bool operator==(const FrameNode&) const = default;
};

struct FrameEdge {
    Attribute a;  // a < b
    Attribute b;
    double weight = 0.0;
    double opacity = 1.0;

    bool operator==(const FrameEdge&) const = default;
};

/// One drawable picture. Nodes and edges are kept in canonical order.
struct Frame {
    std::string label;
    std::vector<FrameNode> nodes;
    std::vector<FrameEdge> edges;

    bool operator==(const Frame&) const = default;
};

Frame make_frame(const SliceGraph& graph, const LayoutSlice& layout, const Normalizer& normalizer);

/// Shared nodes and edges move linearly; the rest fade out (only in `a`)
/// or in (only in `b`). Elements with zero opacity are dropped, so s = 0
/// and s = 1 return the endpoints exactly.
Frame interpolate(const Frame& a, const Frame& b, double s);

/// keys + (keys - 1) * transition_frames
std::size_t animation_frame_count(std::size_t keys, int transition_frames);

/// Key frames with `transition_frames` interpolated frames between each pair.
std::vector<Frame> animation_sequence(std::span<const Frame> keys, int transition_frames);

struct Canvas {
    int width = 800;
    int height = 800;
};

std::string render_svg_frame(const Frame& frame, const StyleMap& style = default_style(), Canvas canvas = {});

/// Single offline HTML page: frame geometry as embedded JSON plus a small
/// player script that interpolates between key frames at `fps`.
std::string write_animation_html(std::span<const Frame> keys, const StyleMap& style, double fps,
                                 int transition_frames, Canvas canvas = {});

/// Per-window summary table (CSV, LF line endings).
std::string write_stats(const Trajectory& trajectory, std::span<const SliceGraph> graphs,
                        std::span<const IncidenceMatrix> matrices);

}  // namespace chronogram
