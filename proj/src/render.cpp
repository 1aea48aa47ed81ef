#include "chronogram/render.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

namespace chronogram {

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

double lerp(double a, double b, double s) { return (1.0 - s) * a + s * b; }

constexpr const char* kPlayerScript = R"js(
(function () {
  var data = JSON.parse(document.getElementById('chronogram-data').textContent);
  var canvas = document.getElementById('view');
  var ctx = canvas.getContext('2d');
  var caption = document.getElementById('caption');
  var frames = data.frames;
  var step = data.transition_frames + 1;

  function key(n) { return n.kind + ':' + n.label; }
  function lerp(a, b, s) { return (1 - s) * a + s * b; }
  function index(list, f) { var m = {}; list.forEach(function (x) { m[f(x)] = x; }); return m; }
  function edgeKey(e) { return e.a + '|' + e.b; }

  function mix(fa, fb, s) {
    var out = { label: s < 0.5 ? fa.label : fb.label, nodes: [], edges: [] };
    var na = index(fa.nodes, key), nb = index(fb.nodes, key);
    fa.nodes.forEach(function (n) {
      var m = nb[key(n)];
      if (m) out.nodes.push({ kind: n.kind, label: n.label, x: lerp(n.x, m.x, s), y: lerp(n.y, m.y, s), o: 1 });
      else if (s < 1) out.nodes.push({ kind: n.kind, label: n.label, x: n.x, y: n.y, o: 1 - s });
    });
    fb.nodes.forEach(function (m) {
      if (!na[key(m)] && s > 0) out.nodes.push({ kind: m.kind, label: m.label, x: m.x, y: m.y, o: s });
    });
    var ea = index(fa.edges, edgeKey), eb = index(fb.edges, edgeKey);
    fa.edges.forEach(function (e) {
      var f = eb[edgeKey(e)];
      if (f) out.edges.push({ a: e.a, b: e.b, w: lerp(e.w, f.w, s), o: 1 });
      else if (s < 1) out.edges.push({ a: e.a, b: e.b, w: e.w, o: 1 - s });
    });
    fb.edges.forEach(function (f) {
      if (!ea[edgeKey(f)] && s > 0) out.edges.push({ a: f.a, b: f.b, w: f.w, o: s });
    });
    return out;
  }

  function frameAt(i) {
    var k = Math.floor(i / step), r = i % step;
    if (r === 0 || k + 1 >= frames.length) return frames[k];
    return mix(frames[k], frames[k + 1], r / step);
  }

  function draw(f) {
    var w = canvas.width, h = canvas.height;
    ctx.fillStyle = 'white';
    ctx.fillRect(0, 0, w, h);
    var pos = index(f.nodes, key);
    f.edges.forEach(function (e) {
      var a = pos[e.a], b = pos[e.b];
      if (!a || !b) return;
      ctx.globalAlpha = (e.o === undefined ? 1 : e.o) * (0.25 + 0.75 * e.w);
      ctx.strokeStyle = '#888888';
      ctx.lineWidth = 0.5 + 3 * e.w;
      ctx.beginPath();
      ctx.moveTo(a.x * w, a.y * h);
      ctx.lineTo(b.x * w, b.y * h);
      ctx.stroke();
    });
    f.nodes.forEach(function (n) {
      var st = data.styles[n.kind], x = n.x * w, y = n.y * h;
      ctx.globalAlpha = n.o === undefined ? 1 : n.o;
      ctx.fillStyle = st.fill;
      ctx.beginPath();
      if (st.shape === 'diamond') {
        ctx.moveTo(x, y - 8); ctx.lineTo(x + 8, y); ctx.lineTo(x, y + 8); ctx.lineTo(x - 8, y);
        ctx.closePath();
      } else {
        ctx.ellipse(x, y, 6, 6, 0, 0, 2 * Math.PI);
      }
      ctx.fill();
      ctx.fillStyle = '#222222';
      ctx.font = '10px sans-serif';
      ctx.fillText(n.label, x + 9, y + 3);
    });
    ctx.globalAlpha = 1;
    caption.textContent = f.label;
  }

  var i = 0;
  draw(frameAt(0));
  if (data.total_frames > 1) {
    setInterval(function () { i = (i + 1) % data.total_frames; draw(frameAt(i)); }, 1000 / data.fps);
  }
})();
)js";

}  // namespace

Frame make_frame(const SliceGraph& graph, const LayoutSlice& layout, const Normalizer& normalizer) {
    if (layout.positions.size() != graph.nodes.size())
        throw std::invalid_argument("layout does not cover the graph");
    Frame f;
    f.label = graph.window.label;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
        f.nodes.push_back({graph.nodes[i], normalizer.apply(layout.positions[i]), 1.0});
    for (const auto& e : graph.edges) {
        Attribute a = graph.nodes[e.a], b = graph.nodes[e.b];
        if (b < a) std::swap(a, b);
        f.edges.push_back({std::move(a), std::move(b), e.weight, 1.0});
    }
    std::sort(f.nodes.begin(), f.nodes.end(),
              [](const FrameNode& x, const FrameNode& y) { return x.attribute < y.attribute; });
    std::sort(f.edges.begin(), f.edges.end(), [](const FrameEdge& x, const FrameEdge& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    return f;
}

Frame interpolate(const Frame& a, const Frame& b, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument(fmt::format("interpolation parameter {} outside [0, 1]", s));
    Frame out;
    out.label = s < 0.5 ? a.label : b.label;

    std::map<Attribute, const FrameNode*> in_a, in_b;
    for (const auto& n : a.nodes) in_a.emplace(n.attribute, &n);
    for (const auto& n : b.nodes) in_b.emplace(n.attribute, &n);
    for (const auto& n : a.nodes) {
        if (auto it = in_b.find(n.attribute); it != in_b.end()) {
            const FrameNode& m = *it->second;
            out.nodes.push_back({n.attribute,
                                 Point{lerp(n.position.x, m.position.x, s), lerp(n.position.y, m.position.y, s)},
                                 lerp(n.opacity, m.opacity, s)});
        } else if (const double o = (1.0 - s) * n.opacity; o > 0.0) {
            out.nodes.push_back({n.attribute, n.position, o});
        }
    }
    for (const auto& m : b.nodes)
        if (!in_a.count(m.attribute))
            if (const double o = s * m.opacity; o > 0.0) out.nodes.push_back({m.attribute, m.position, o});

    using EdgeKey = std::pair<Attribute, Attribute>;
    std::map<EdgeKey, const FrameEdge*> ea, eb;
    for (const auto& e : a.edges) ea.emplace(EdgeKey{e.a, e.b}, &e);
    for (const auto& e : b.edges) eb.emplace(EdgeKey{e.a, e.b}, &e);
    for (const auto& e : a.edges) {
        if (auto it = eb.find({e.a, e.b}); it != eb.end()) {
            const FrameEdge& f = *it->second;
            out.edges.push_back({e.a, e.b, lerp(e.weight, f.weight, s), lerp(e.opacity, f.opacity, s)});
        } else if (const double o = (1.0 - s) * e.opacity; o > 0.0) {
            out.edges.push_back({e.a, e.b, e.weight, o});
        }
    }
    for (const auto& f : b.edges)
        if (!ea.count({f.a, f.b}))
            if (const double o = s * f.opacity; o > 0.0) out.edges.push_back({f.a, f.b, f.weight, o});

    std::sort(out.nodes.begin(), out.nodes.end(),
              [](const FrameNode& x, const FrameNode& y) { return x.attribute < y.attribute; });
    std::sort(out.edges.begin(), out.edges.end(), [](const FrameEdge& x, const FrameEdge& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    return out;
}

std::size_t animation_frame_count(std::size_t keys, int transition_frames) {
    if (keys == 0) return 0;
    return keys + (keys - 1) * static_cast<std::size_t>(std::max(transition_frames, 0));
}

std::vector<Frame> animation_sequence(std::span<const Frame> keys, int transition_frames) {
    std::vector<Frame> out;
    const int t = std::max(transition_frames, 0);
    out.reserve(animation_frame_count(keys.size(), t));
    for (std::size_t k = 0; k < keys.size(); ++k) {
        out.push_back(keys[k]);
        if (k + 1 == keys.size()) break;
        for (int r = 1; r <= t; ++r) out.push_back(interpolate(keys[k], keys[k + 1], double(r) / double(t + 1)));
    }
    return out;
}

std::string render_svg_frame(const Frame& frame, const StyleMap& style, Canvas canvas) {
    const double w = canvas.width, h = canvas.height;
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        canvas.width, canvas.height, canvas.width, canvas.height);
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    std::map<Attribute, Point> pos;
    for (const auto& n : frame.nodes) pos.emplace(n.attribute, n.position);

    out += "<g class=\"edges\" stroke=\"#888888\">\n";
    for (const auto& e : frame.edges) {
        auto pa = pos.find(e.a), pb = pos.find(e.b);
        if (pa == pos.end() || pb == pos.end()) continue;
        out += fmt::format(
            "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke-width=\"{:.2f}\" "
            "stroke-opacity=\"{:.3f}\"/>\n",
            pa->second.x * w, pa->second.y * h, pb->second.x * w, pb->second.y * h, 0.5 + 3.0 * e.weight,
            e.opacity * (0.25 + 0.75 * e.weight));
    }
    out += "</g>\n<g class=\"nodes\" font-family=\"sans-serif\" font-size=\"10\">\n";
    for (const auto& n : frame.nodes) {
        const NodeStyle& st = style.of(n.attribute.kind);
        const double x = n.position.x * w, y = n.position.y * h;
        if (st.shape == "diamond") {
            out += fmt::format(
                "<path class=\"diamond\" d=\"M {:.2f} {:.2f} L {:.2f} {:.2f} L {:.2f} {:.2f} L {:.2f} {:.2f} Z\" "
                "fill=\"{}\" fill-opacity=\"{:.3f}\"/>\n",
                x, y - 8, x + 8, y, x, y + 8, x - 8, y, st.svg_fill, n.opacity);
        } else {
            out += fmt::format(
                "<ellipse class=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" rx=\"6\" ry=\"6\" fill=\"{}\" "
                "fill-opacity=\"{:.3f}\"/>\n",
                xml_escape(st.shape), x, y, st.svg_fill, n.opacity);
        }
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" fill-opacity=\"{:.3f}\">{}</text>\n", x + 9, y + 3,
                           n.opacity, xml_escape(n.attribute.label));
    }
    out += "</g>\n";
    out += fmt::format(
        "<text class=\"caption\" x=\"{:.2f}\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"18\">{}</text>\n",
        w / 2, xml_escape(frame.label));
    out += "</svg>\n";
    return out;
}

std::string write_animation_html(std::span<const Frame> keys, const StyleMap& style, double fps,
                                 int transition_frames, Canvas canvas) {
    if (keys.empty()) throw std::invalid_argument("animation needs at least one frame");
    if (!(fps > 0.0)) throw std::invalid_argument("fps must be positive");
    const int t = std::max(transition_frames, 0);

    nlohmann::json data;
    data["fps"] = fps;
    data["transition_frames"] = t;
    data["total_frames"] = animation_frame_count(keys.size(), t);
    data["canvas"] = {{"width", canvas.width}, {"height", canvas.height}};
    for (auto kind : {AttributeKind::Word, AttributeKind::Author, AttributeKind::Journal, AttributeKind::Anchor}) {
        const auto& st = style.of(kind);
        data["styles"][std::string(kind_name(kind))] = {{"shape", st.shape}, {"fill", st.svg_fill}};
    }
    data["frames"] = nlohmann::json::array();
    for (const auto& f : keys) {
        nlohmann::json jf;
        jf["label"] = f.label;
        jf["nodes"] = nlohmann::json::array();
        for (const auto& n : f.nodes)
            jf["nodes"].push_back({{"kind", std::string(kind_name(n.attribute.kind))},
                                   {"label", n.attribute.label},
                                   {"x", n.position.x},
                                   {"y", n.position.y}});
        jf["edges"] = nlohmann::json::array();
        for (const auto& e : f.edges) jf["edges"].push_back({{"a", e.a.key()}, {"b", e.b.key()}, {"w", e.weight}});
        data["frames"].push_back(std::move(jf));
    }
    std::string json = data.dump();
    // keep the payload from closing its <script> element
    for (std::size_t pos = 0; (pos = json.find("</", pos)) != std::string::npos; pos += 3) json.replace(pos, 2, "<\\/");

    std::string out = "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
    out += "<title>chronogram</title>\n";
    out += "<style>body{font-family:sans-serif;margin:1em;background:#fafafa}"
           "#caption{font-size:20px;margin-bottom:.5em}canvas{border:1px solid #ccc;background:white}</style>\n";
    out += "</head>\n<body>\n<div id=\"caption\"></div>\n";
    out += fmt::format("<canvas id=\"view\" width=\"{}\" height=\"{}\"></canvas>\n", canvas.width, canvas.height);
    out += "<script id=\"chronogram-data\" type=\"application/json\">" + json + "</script>\n";
    out += "<script>";
    out += kPlayerScript;
    out += "</script>\n</body>\n</html>\n";
    return out;
}

std::string write_stats(const Trajectory& trajectory, std::span<const SliceGraph> graphs,
                        std::span<const IncidenceMatrix> matrices) {
    if (graphs.size() != matrices.size() || graphs.size() != trajectory.slices.size())
        throw std::invalid_argument("stats inputs are not aligned");
    std::string out = "window,documents,words,authors,journals,edges,mean_cosine,final_stress\n";
    for (std::size_t t = 0; t < graphs.size(); ++t) {
        std::size_t words = 0, authors = 0, journals = 0;
        for (const auto& a : graphs[t].nodes) {
            words += a.kind == AttributeKind::Word;
            authors += a.kind == AttributeKind::Author;
            journals += a.kind == AttributeKind::Journal;
        }
        double mean = 0.0;
        for (const auto& e : graphs[t].edges) mean += e.weight;
        if (!graphs[t].edges.empty()) mean /= static_cast<double>(graphs[t].edges.size());
        const double stress = t < trajectory.stress_log.size() ? trajectory.stress_log[t] : 0.0;
        out += fmt::format("{},{},{},{},{},{},{:.6f},{:.6f}\n", matrices[t].window.label, matrices[t].rows(), words,
                           authors, journals, graphs[t].edges.size(), mean, stress);
    }
    return out;
}

}  // namespace chronogram
