#pragma once

// Independent oracles and seeded generators shared by the unit tests and
// the acceptance binary.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "chronogram/ingest.hpp"
#include "chronogram/layout.hpp"
#include "chronogram/simnet.hpp"
#include "chronogram/windowing.hpp"

namespace testsupport {

using namespace chronogram;

inline std::string source_path(const std::string& relative) {
    return std::string(CHRONOGRAM_SOURCE_DIR) + "/" + relative;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline BiblioRecord record(std::string id, int year, std::string title, std::vector<std::string> authors,
                           std::string journal = "J") {
    return BiblioRecord{std::move(id), std::move(authors), std::move(title), std::move(journal), year};
}

// ---------------------------------------------------------------------------
// Incidence fixed point by exhaustive search over document subsets.

struct OracleMatrix {
    std::vector<std::string> documents;
    std::vector<Attribute> attributes;
    std::vector<int> counts;
};

/// For a subset S, keep attributes with document frequency >= min_occ in S.
/// S is stable when every member still holds a kept Word/Author attribute.
/// Stable sets are closed under union, so the largest one is the answer.
inline OracleMatrix incidence_oracle(const std::vector<BiblioRecord>& docs, const StopwordSet& stopwords,
                                     int min_occ) {
    const std::size_t n = docs.size();
    std::vector<AttributeCounts> attrs;
    for (const auto& d : docs) attrs.push_back(extract_attributes(d, stopwords));

    auto kept = [&](std::uint32_t mask) {
        std::map<Attribute, int> df;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u)
                for (const auto& [a, c] : attrs[i]) ++df[a];
        std::set<Attribute> out;
        for (const auto& [a, f] : df)
            if (f >= min_occ) out.insert(a);
        return out;
    };

    std::uint32_t best = 0;
    int best_size = -1;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        const auto a = kept(mask);
        bool stable = true;
        for (std::size_t i = 0; i < n && stable; ++i) {
            if (!(mask >> i & 1u)) continue;
            bool held = false;
            for (const auto& [attr, c] : attrs[i])
                if ((attr.kind == AttributeKind::Word || attr.kind == AttributeKind::Author) && a.count(attr))
                    held = true;
            stable = held;
        }
        const int size = std::popcount(mask);
        if (stable && size > best_size) {
            best = mask;
            best_size = size;
        }
    }

    OracleMatrix m;
    const auto a = kept(best);
    m.attributes.assign(a.begin(), a.end());
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i)
        if (best >> i & 1u) rows.push_back(i);
    std::sort(rows.begin(), rows.end(), [&](auto x, auto y) { return docs[x].id < docs[y].id; });
    for (auto r : rows) {
        m.documents.push_back(docs[r].id);
        for (const auto& attr : m.attributes) {
            auto it = attrs[r].find(attr);
            m.counts.push_back(it == attrs[r].end() ? 0 : it->second);
        }
    }
    return m;
}

/// Small random window: titles drawn from a tiny vocabulary so that
/// cascades (a dropped document pushing a word below min_occ) are common.
inline std::vector<BiblioRecord> random_window(std::mt19937_64& rng, int docs) {
    static const std::vector<std::string> words = {"citation", "index", "science", "journal", "impact",
                                                   "factor",   "the",   "history", "map",     "network"};
    static const std::vector<std::string> people = {"Garfield, E.", "Small, H.", "Sher, I. H.", "Price, D."};
    static const std::vector<std::string> venues = {"SCIENCE", "NATURE", "CURRENT CONTENTS", ""};
    std::vector<BiblioRecord> out;
    for (int d = 0; d < docs; ++d) {
        std::string title;
        const int len = static_cast<int>(rng() % 4);
        for (int k = 0; k < len; ++k) title += (k ? " " : "") + words[rng() % words.size()];
        std::vector<std::string> authors;
        const int na = static_cast<int>(rng() % 3);
        for (int k = 0; k < na; ++k) authors.push_back(people[rng() % people.size()]);
        out.push_back(record(fmt::format("D{:02d}", docs - d), 1960, title, authors, venues[rng() % venues.size()]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shortest paths by Floyd-Warshall over the same edge-length rule.

inline std::vector<std::vector<double>> floyd_warshall(const SliceGraph& g) {
    const std::size_t n = g.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
    for (const auto& e : g.edges) {
        const double len = std::max(1.0 - e.weight, 0.05);
        d[e.a][e.b] = std::min(d[e.a][e.b], len);
        d[e.b][e.a] = std::min(d[e.b][e.a], len);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

// ---------------------------------------------------------------------------
// Random slices for layout and export tests.

inline SliceGraph random_graph(std::mt19937_64& rng, int nodes, double density, int window_index = 0) {
    SliceGraph g;
    g.window = window_of(1950 + 5 * window_index, 1950, 5);
    for (int i = 0; i < nodes; ++i) {
        const auto kind = static_cast<AttributeKind>(rng() % 4);
        g.nodes.push_back({kind, fmt::format("node {}", i)});
    }
    std::sort(g.nodes.begin(), g.nodes.end());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int a = 0; a < nodes; ++a)
        for (int b = a + 1; b < nodes; ++b)
            if (u(rng) < density) g.edges.push_back({a, b, std::round((0.2 + 0.8 * u(rng)) * 1e6) / 1e6});
    compute_components(g);
    return g;
}

inline std::vector<Point> random_positions(std::mt19937_64& rng, std::size_t n, double spread = 2.0) {
    std::uniform_real_distribution<double> u(-spread, spread);
    std::vector<Point> p(n);
    for (auto& q : p) q = {u(rng), u(rng)};
    return p;
}

/// One-component table built directly from a metric.
inline DistanceTable table_from_metric(const std::vector<std::vector<double>>& d) {
    DistanceTable t;
    t.node_count = d.size();
    ComponentDistances c;
    for (std::size_t i = 0; i < d.size(); ++i) c.nodes.push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) {
            c.dist.push_back(d[i][j]);
            c.weight.push_back(i == j ? 0.0 : 1.0 / (d[i][j] * d[i][j]));
        }
    t.components.push_back(std::move(c));
    return t;
}

inline std::vector<std::vector<double>> equilateral_metric() {
    return {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
}

inline std::vector<std::vector<double>> unit_square_metric() {
    const double r = std::sqrt(2.0);
    return {{0, 1, r, 1}, {1, 0, 1, r}, {r, 1, 0, 1}, {1, r, 1, 0}};
}

inline double pair_distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// ---------------------------------------------------------------------------
// Synthetic bibliography at roughly the scale of one scholar's oeuvre.

inline std::string synthetic_corpus(int documents, std::uint64_t seed, int first_year = 1950, int last_year = 2009) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> vocab;
    static const char* syll[] = {"ci", "ta", "tion", "in", "dex", "sci", "ence", "bib", "lio", "met",
                                 "ric", "jour", "nal", "im", "pact", "his", "to", "ry", "gra", "phy"};
    for (int i = 0; vocab.size() < 640; ++i) {
        std::string w = std::string(syll[i % 20]) + syll[(i / 20) % 20] + syll[(i / 400 + i * 7) % 20];
        if (std::find(vocab.begin(), vocab.end(), w) == vocab.end()) vocab.push_back(w);
    }
    std::vector<std::string> authors;
    for (int i = 0; i < 60; ++i) authors.push_back(fmt::format("Author{:02d}, {}.", i, static_cast<char>('A' + i % 26)));
    std::vector<std::string> journals;
    for (int i = 0; i < 12; ++i) journals.push_back(fmt::format("JOURNAL OF TOPIC {}", i));

    // Zipf-like draws keep a core of recurring terms.
    auto zipf = [&](std::size_t n) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        return static_cast<std::size_t>(std::pow(static_cast<double>(n), u(rng))) - 1;
    };
    std::string out = "FN Synthetic Export\nVR 1.0\n";
    for (int d = 0; d < documents; ++d) {
        const int year = first_year + static_cast<int>((static_cast<long>(d) * (last_year - first_year + 1)) / documents);
        out += "PT J\n";
        out += "AU Garfield, E.\n";
        const int extra = static_cast<int>(rng() % 3);
        for (int k = 0; k < extra; ++k) out += "   " + authors[zipf(authors.size())] + "\n";
        out += "TI";
        const int len = 4 + static_cast<int>(rng() % 6);
        for (int k = 0; k < len; ++k) out += " " + vocab[zipf(vocab.size())];
        out += "\nSO " + journals[zipf(journals.size())] + "\n";
        out += fmt::format("PY {}\nUT SYN:{:06d}\nER\n\n", year, d);
    }
    out += "EF\n";
    return out;
}

}  // namespace testsupport
