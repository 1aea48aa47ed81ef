#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chronogram/layout.hpp"
#include "chronogram/style.hpp"

namespace chronogram {

/// Isotropic map of layout coordinates into [0.05, 0.95]^2, centered.
class Normalizer {
public:
    Normalizer() = default;
    static Normalizer fit(std::span<const Point> points);
    /// One box over every slice, so motion between slices stays comparable.
    static Normalizer fit(const Trajectory& trajectory);

    Point apply(const Point& p) const;
    double scale() const { return scale_; }

private:
    double center_x_ = 0.0;
    double center_y_ = 0.0;
    double scale_ = 0.0;
};

struct PajekVertex {
    std::string label;
    double x = 0.0;
    double y = 0.0;
    double z = 0.5;
    std::string shape = "ellipse";
    std::string color;

    bool operator==(const PajekVertex&) const = default;
};

struct PajekEdge {
    int a = 0;  // 1-based vertex ids
    int b = 0;
    double weight = 1.0;

    bool operator==(const PajekEdge&) const = default;
};

struct PajekNetwork {
    std::vector<PajekVertex> vertices;
    std::vector<PajekEdge> edges;

    bool operator==(const PajekNetwork&) const = default;
};

class PajekParseError : public std::runtime_error {
public:
    PajekParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

PajekNetwork to_pajek(const SliceGraph& graph, const LayoutSlice& layout, const Normalizer& normalizer,
                      const StyleMap& style = default_style());

std::string format_pajek_net(const PajekNetwork& net);
PajekNetwork read_pajek_net(std::string_view text);

/// .net text for one slice; coordinates normalized over this slice alone.
std::string write_pajek_net(const SliceGraph& graph, const LayoutSlice& layout);
std::string write_pajek_net(const SliceGraph& graph, const LayoutSlice& layout, const Normalizer& normalizer,
                            const StyleMap& style = default_style());

/// `*Network <label>` blocks, one per slice, using a shared normalizer.
std::string write_pajek_project(const Trajectory& trajectory, std::span<const SliceGraph> graphs);
std::string write_pajek_project(const Trajectory& trajectory, std::span<const SliceGraph> graphs,
                                const Normalizer& normalizer, const StyleMap& style = default_style());

std::vector<std::pair<std::string, PajekNetwork>> read_pajek_project(std::string_view text);

}  // namespace chronogram
