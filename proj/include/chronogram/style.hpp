#pragma once

#include <array>
#include <string>

#include "chronogram/windowing.hpp"

namespace chronogram {

struct NodeStyle {
    std::string shape;        // "ellipse" or "diamond"
    std::string pajek_color;  // Pajek color name
    std::string svg_fill;
};

/// Authors and the anchor in red, words in green (both ellipses),
/// journals as blue diamonds.
class StyleMap {
public:
    StyleMap();
    const NodeStyle& of(AttributeKind kind) const { return styles_[static_cast<std::size_t>(kind)]; }
    NodeStyle& of(AttributeKind kind) { return styles_[static_cast<std::size_t>(kind)]; }

private:
    std::array<NodeStyle, 4> styles_;
};

inline const StyleMap& default_style() {
    static const StyleMap style;
    return style;
}

}  // namespace chronogram
