#include "chronogram/pajek.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include <fmt/format.h>

namespace chronogram {

StyleMap::StyleMap() {
    of(AttributeKind::Word) = {"ellipse", "Green", "green"};
    of(AttributeKind::Author) = {"ellipse", "Red", "red"};
    of(AttributeKind::Journal) = {"diamond", "Blue", "blue"};
    of(AttributeKind::Anchor) = {"ellipse", "Red", "red"};
}

PajekParseError::PajekParseError(std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

Normalizer Normalizer::fit(std::span<const Point> points) {
    Normalizer n;
    if (points.empty()) return n;
    double min_x = points[0].x, max_x = points[0].x, min_y = points[0].y, max_y = points[0].y;
    for (const auto& p : points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    n.center_x_ = 0.5 * (min_x + max_x);
    n.center_y_ = 0.5 * (min_y + max_y);
    const double extent = std::max(max_x - min_x, max_y - min_y);
    n.scale_ = extent > 0.0 ? 0.9 / extent : 0.0;
    return n;
}

Normalizer Normalizer::fit(const Trajectory& trajectory) {
    std::vector<Point> all;
    for (const auto& s : trajectory.slices) all.insert(all.end(), s.positions.begin(), s.positions.end());
    return fit(all);
}

Point Normalizer::apply(const Point& p) const {
    auto map = [&](double v, double c) { return std::clamp(0.5 + (v - c) * scale_, 0.05, 0.95); };
    return Point{map(p.x, center_x_), map(p.y, center_y_)};
}

namespace {

std::string sanitize_label(std::string_view s) {
    std::string out(s);
    std::replace(out.begin(), out.end(), '"', '\'');
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<int> to_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Whitespace tokens; a double-quoted run is one token (quotes stripped).
std::vector<std::string> tokens(std::string_view line, std::size_t lineno) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '"') {
            const std::size_t close = line.find('"', i + 1);
            if (close == std::string_view::npos) throw PajekParseError(lineno, "unterminated quoted label");
            out.emplace_back(line.substr(i + 1, close - i - 1));
            i = close + 1;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view l = text.substr(pos, nl - pos);
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
        lines.push_back(l);
        pos = nl + 1;
    }
    return lines;
}

PajekNetwork parse_net_lines(std::span<const std::string_view> lines, std::size_t first_lineno) {
    enum class Section { None, Vertices, Edges };
    PajekNetwork net;
    Section section = Section::None;
    std::size_t declared = 0;

    for (std::size_t k = 0; k < lines.size(); ++k) {
        const std::size_t lineno = first_lineno + k;
        const auto toks = tokens(lines[k], lineno);
        if (toks.empty() || (!toks[0].empty() && toks[0].front() == '%')) continue;

        if (!toks[0].empty() && toks[0].front() == '*') {
            const std::string directive = lower(toks[0]);
            if (directive == "*vertices") {
                if (toks.size() < 2) throw PajekParseError(lineno, "*Vertices needs a count");
                auto n = to_int(toks[1]);
                if (!n || *n < 0) throw PajekParseError(lineno, fmt::format("bad vertex count '{}'", toks[1]));
                declared = static_cast<std::size_t>(*n);
                section = Section::Vertices;
            } else if (directive == "*edges") {
                if (net.vertices.size() != declared)
                    throw PajekParseError(lineno, fmt::format("expected {} vertices, read {}", declared,
                                                              net.vertices.size()));
                section = Section::Edges;
            } else {
                throw PajekParseError(lineno, fmt::format("unknown directive '{}'", toks[0]));
            }
            continue;
        }

        if (section == Section::Vertices) {
            auto id = to_int(toks[0]);
            if (!id || *id != static_cast<int>(net.vertices.size()) + 1)
                throw PajekParseError(lineno, fmt::format("expected vertex id {}", net.vertices.size() + 1));
            PajekVertex v;
            v.label = toks.size() > 1 ? toks[1] : toks[0];
            std::size_t t = 2;
            std::vector<double> coords;
            while (t < toks.size() && coords.size() < 3) {
                auto d = to_double(toks[t]);
                if (!d) break;
                coords.push_back(*d);
                ++t;
            }
            if (coords.size() == 1) throw PajekParseError(lineno, "vertex has a single coordinate");
            if (coords.size() >= 2) {
                v.x = coords[0];
                v.y = coords[1];
            }
            if (coords.size() == 3) v.z = coords[2];
            if (t < toks.size() && lower(toks[t]) != "ic") v.shape = toks[t++];
            if (t + 1 < toks.size() && lower(toks[t]) == "ic") {
                v.color = toks[t + 1];
                t += 2;
            }
            if (t != toks.size()) throw PajekParseError(lineno, fmt::format("unexpected token '{}'", toks[t]));
            net.vertices.push_back(std::move(v));
        } else if (section == Section::Edges) {
            if (toks.size() < 2 || toks.size() > 3) throw PajekParseError(lineno, "edge line needs 2 or 3 fields");
            auto a = to_int(toks[0]);
            auto b = to_int(toks[1]);
            const auto n = static_cast<int>(net.vertices.size());
            if (!a || !b || *a < 1 || *b < 1 || *a > n || *b > n)
                throw PajekParseError(lineno, "edge refers to an unknown vertex");
            PajekEdge e{*a, *b, 1.0};
            if (toks.size() == 3) {
                auto w = to_double(toks[2]);
                if (!w) throw PajekParseError(lineno, fmt::format("bad edge weight '{}'", toks[2]));
                e.weight = *w;
            }
            net.edges.push_back(e);
        } else {
            throw PajekParseError(lineno, "data before *Vertices");
        }
    }
    if (section == Section::Vertices && net.vertices.size() != declared)
        throw PajekParseError(first_lineno + lines.size(),
                              fmt::format("expected {} vertices, read {}", declared, net.vertices.size()));
    return net;
}

}  // namespace

PajekNetwork to_pajek(const SliceGraph& graph, const LayoutSlice& layout, const Normalizer& normalizer,
                      const StyleMap& style) {
    if (layout.positions.size() != graph.nodes.size())
        throw std::invalid_argument("layout does not cover the graph");
    PajekNetwork net;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        const Attribute& a = graph.nodes[i];
        const NodeStyle& s = style.of(a.kind);
        const Point p = normalizer.apply(layout.positions[i]);
        net.vertices.push_back({sanitize_label(a.key()), p.x, p.y, 0.5, s.shape, s.pajek_color});
    }
    for (const auto& e : graph.edges) net.edges.push_back({e.a + 1, e.b + 1, e.weight});
    return net;
}

std::string format_pajek_net(const PajekNetwork& net) {
    std::string out = fmt::format("*Vertices {}\n", net.vertices.size());
    for (std::size_t i = 0; i < net.vertices.size(); ++i) {
        const auto& v = net.vertices[i];
        out += fmt::format("{} \"{}\" {:.6f} {:.6f} {}", i + 1, v.label, v.x, v.y, v.z);
        if (!v.shape.empty()) out += " " + v.shape;
        if (!v.color.empty()) out += " ic " + v.color;
        out += "\n";
    }
    out += "*Edges\n";
    for (const auto& e : net.edges) out += fmt::format("{} {} {:.6f}\n", e.a, e.b, e.weight);
    return out;
}

PajekNetwork read_pajek_net(std::string_view text) {
    const auto lines = lines_of(text);
    return parse_net_lines(lines, 1);
}

std::string write_pajek_net(const SliceGraph& graph, const LayoutSlice& layout) {
    return write_pajek_net(graph, layout, Normalizer::fit(layout.positions));
}

std::string write_pajek_net(const SliceGraph& graph, const LayoutSlice& layout, const Normalizer& normalizer,
                            const StyleMap& style) {
    return format_pajek_net(to_pajek(graph, layout, normalizer, style));
}

std::string write_pajek_project(const Trajectory& trajectory, std::span<const SliceGraph> graphs) {
    return write_pajek_project(trajectory, graphs, Normalizer::fit(trajectory));
}

std::string write_pajek_project(const Trajectory& trajectory, std::span<const SliceGraph> graphs,
                                const Normalizer& normalizer, const StyleMap& style) {
    if (trajectory.slices.size() != graphs.size())
        throw std::invalid_argument("trajectory and graphs are not aligned");
    std::string out;
    for (std::size_t t = 0; t < graphs.size(); ++t) {
        out += fmt::format("*Network {}\n", graphs[t].window.label);
        out += write_pajek_net(graphs[t], trajectory.slices[t], normalizer, style);
    }
    return out;
}

std::vector<std::pair<std::string, PajekNetwork>> read_pajek_project(std::string_view text) {
    const auto lines = lines_of(text);
    std::vector<std::size_t> headers;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lower(lines[i].substr(0, 8)) == "*network") {
            headers.push_back(i);
        } else if (headers.empty() && !tokens(lines[i], i + 1).empty()) {
            throw PajekParseError(i + 1, "project data before the first *Network");
        }
    }
    std::vector<std::pair<std::string, PajekNetwork>> out;
    for (std::size_t k = 0; k < headers.size(); ++k) {
        const std::size_t h = headers[k];
        const std::size_t end = k + 1 < headers.size() ? headers[k + 1] : lines.size();
        std::string label(lines[h].size() > 9 ? lines[h].substr(9) : std::string_view{});
        std::span<const std::string_view> block(lines.data() + h + 1, end - h - 1);
        out.emplace_back(std::move(label), parse_net_lines(block, h + 2));
    }
    return out;
}

}  // namespace chronogram
