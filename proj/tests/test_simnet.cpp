#include <doctest.h>

#include "support.hpp"

using namespace chronogram;

namespace {

IncidenceMatrix matrix(std::vector<std::vector<int>> columns) {
    IncidenceMatrix m;
    m.window = window_of(1960, 1960, 5);
    const std::size_t rows = columns.empty() ? 0 : columns[0].size();
    for (std::size_t r = 0; r < rows; ++r) m.documents.push_back(fmt::format("d{}", r));
    for (std::size_t c = 0; c < columns.size(); ++c) m.attributes.push_back({AttributeKind::Word, fmt::format("w{}", c)});
    for (std::size_t r = 0; r < rows; ++r)
        for (const auto& col : columns) m.counts.push_back(col[r]);
    m.status = rows ? WindowStatus::Ok : WindowStatus::Empty;
    return m;
}

SliceGraph graph_of(int n, std::vector<Edge> edges) {
    SliceGraph g;
    g.window = window_of(1960, 1960, 5);
    for (int i = 0; i < n; ++i) g.nodes.push_back({AttributeKind::Word, fmt::format("n{}", i)});
    g.edges = std::move(edges);
    compute_components(g);
    return g;
}

double table_d(const DistanceTable& t, int a, int b) {
    for (const auto& c : t.components) {
        auto ia = std::find(c.nodes.begin(), c.nodes.end(), a);
        auto ib = std::find(c.nodes.begin(), c.nodes.end(), b);
        if (ia != c.nodes.end() && ib != c.nodes.end())
            return c.d(static_cast<std::size_t>(ia - c.nodes.begin()), static_cast<std::size_t>(ib - c.nodes.begin()));
    }
    return -1.0;
}

}  // namespace

TEST_CASE("cosine") {
    const std::vector<double> a{1, 1, 0}, b{1, 0, 1}, e1{1, 0}, e2{0, 1};
    CHECK(cosine(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine(e1, e2) == 0.0);
    CHECK(cosine(a, b) == doctest::Approx(0.5).epsilon(1e-15));
    const std::vector<double> zero{0, 0, 0};
    CHECK_THROWS_AS(cosine(a, zero), ZeroVector);
    CHECK_THROWS_AS(cosine(a, e1), std::invalid_argument);
}

TEST_CASE("cosine: symmetry and scale invariance") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 20;
        std::vector<double> u(n), v(n);
        for (auto& x : u) x = static_cast<double>(rng() % 6);
        for (auto& x : v) x = static_cast<double>(rng() % 6);
        u[0] += 1;
        v[n - 1] += 1;
        CHECK(cosine(u, v) == cosine(v, u));
        std::vector<double> ku = u;
        const double k = 0.5 + static_cast<double>(rng() % 100);
        for (auto& x : ku) x *= k;
        CHECK(std::abs(cosine(ku, v) - cosine(u, v)) <= 1e-12);
    }
}

TEST_CASE("build_slice_graph: threshold is inclusive") {
    // cos((1,0,...), (1,2,2,2,2,2,2)) = 1/5 exactly
    const auto m = matrix({{1, 0, 0, 0, 0, 0, 0}, {1, 2, 2, 2, 2, 2, 2}});
    REQUIRE(cosine(m.column(0), m.column(1)) == 0.2);
    auto g = build_slice_graph(m, 0.2);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].weight == 0.2);

    // 1/sqrt(27) ~ 0.19 is just under
    const auto below = matrix({{1, 0, 0}, {1, 1, 5}});
    REQUIRE(cosine(below.column(0), below.column(1)) < 0.2);
    REQUIRE(cosine(below.column(0), below.column(1)) > 0.19);
    g = build_slice_graph(below, 0.2);
    CHECK(g.edges.empty());
    CHECK(g.components.size() == 2);

    CHECK_THROWS_AS(build_slice_graph(m, 1.5), std::invalid_argument);
}

TEST_CASE("build_slice_graph: brute-force all-pairs oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t cols = 4 + trial % 5, rows = 3 + rng() % 6;
        std::vector<std::vector<int>> c(cols, std::vector<int>(rows));
        for (auto& col : c) {
            for (auto& x : col) x = static_cast<int>(rng() % 3);
            col[rng() % rows] += 1;
        }
        const auto m = matrix(c);
        for (double threshold : {0.0, 0.2, 0.5}) {
            const auto g = build_slice_graph(m, threshold);
            std::vector<std::pair<int, int>> expect, got;
            for (std::size_t a = 0; a < cols; ++a)
                for (std::size_t b = a + 1; b < cols; ++b) {
                    long double dot = 0, na = 0, nb = 0;
                    for (std::size_t r = 0; r < rows; ++r) {
                        dot += c[a][r] * c[b][r];
                        na += c[a][r] * c[a][r];
                        nb += c[b][r] * c[b][r];
                    }
                    const long double cs = dot / std::sqrt(na * nb);
                    // Stay clear of values that round across the threshold.
                    if (std::abs(cs - threshold) < 1e-12L) continue;
                    if (cs >= threshold) expect.emplace_back(static_cast<int>(a), static_cast<int>(b));
                }
            for (const auto& e : g.edges) {
                CHECK(e.a < e.b);
                CHECK(e.weight >= threshold);
                CHECK(e.weight <= 1.0 + 1e-12);
                const double cs = cosine(m.column(static_cast<std::size_t>(e.a)), m.column(static_cast<std::size_t>(e.b)));
                if (std::abs(cs - threshold) >= 1e-12) got.emplace_back(e.a, e.b);
            }
            CHECK(got == expect);
        }
        // Raising the threshold keeps a subset of the edges.
        const auto lo = build_slice_graph(m, 0.2), hi = build_slice_graph(m, 0.6);
        for (const auto& e : hi.edges) CHECK(std::find(lo.edges.begin(), lo.edges.end(), e) != lo.edges.end());
    }
}

TEST_CASE("components are consistent with edges") {
    const auto g = graph_of(6, {{0, 1, 0.5}, {1, 2, 0.5}, {3, 4, 0.9}});
    REQUIRE(g.components.size() == 3);
    CHECK(g.components[0] == std::vector<int>{0, 1, 2});
    CHECK(g.components[1] == std::vector<int>{3, 4});
    CHECK(g.components[2] == std::vector<int>{5});
    for (const auto& e : g.edges) CHECK(g.component_of[e.a] == g.component_of[e.b]);
}

TEST_CASE("target_distances: small cases") {
    SUBCASE("single edge") {
        const auto t = target_distances(graph_of(2, {{0, 1, 0.2}}));
        CHECK(table_d(t, 0, 1) == doctest::Approx(0.8).epsilon(1e-15));
        CHECK(t.components[0].w(0, 1) == doctest::Approx(1.0 / 0.64).epsilon(1e-14));
    }
    SUBCASE("floor for cosine 1") {
        const auto t = target_distances(graph_of(2, {{0, 1, 1.0}}));
        CHECK(table_d(t, 0, 1) == 0.05);
    }
    SUBCASE("path sums") {
        const auto t = target_distances(graph_of(3, {{0, 1, 0.5}, {1, 2, 0.5}}));
        CHECK(table_d(t, 0, 2) == 1.0);
    }
    SUBCASE("no cross-component pairs") {
        const auto t = target_distances(graph_of(4, {{0, 1, 0.5}, {2, 3, 0.5}}));
        CHECK(table_d(t, 0, 2) == -1.0);
        CHECK(t.components.size() == 2);
        CHECK(t.node_count == 4);
    }
}

TEST_CASE("target_distances: Floyd-Warshall oracle and metric laws") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 19);
        const auto g = testsupport::random_graph(rng, n, 0.25);
        const auto t = target_distances(g);
        const auto fw = testsupport::floyd_warshall(g);
        for (const auto& c : t.components) {
            for (std::size_t i = 0; i < c.size(); ++i)
                for (std::size_t j = 0; j < c.size(); ++j) {
                    const double expect = fw[c.nodes[i]][c.nodes[j]];
                    CHECK(std::abs(c.d(i, j) - expect) <= 1e-12);
                    CHECK(c.d(i, j) == c.d(j, i));
                    if (i != j) {
                        CHECK(c.d(i, j) > 0.0);
                        CHECK(c.w(i, j) == doctest::Approx(1.0 / (c.d(i, j) * c.d(i, j))).epsilon(1e-14));
                    }
                    for (std::size_t k = 0; k < c.size(); ++k) CHECK(c.d(i, k) <= c.d(i, j) + c.d(j, k) + 1e-9);
                }
        }
    }
}

TEST_CASE("anchor cosine equals sqrt(k/N) in binarize mode") {
    std::mt19937_64 rng(17);
    const auto stop = default_stopwords();
    static const std::vector<std::string> words = {"citation", "index", "science", "map", "history", "network"};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<BiblioRecord> docs;
        const int n = 3 + static_cast<int>(rng() % 8);
        for (int d = 0; d < n; ++d) {
            std::string title = words[rng() % words.size()] + " " + words[rng() % words.size()];
            docs.push_back(testsupport::record(fmt::format("d{}", d), 1960, title, {"Garfield, E."}));
        }
        IncidenceOptions opts;
        opts.anchor = "GARFIELD E";
        opts.binarize = true;
        const auto m = build_incidence(filter_corpus(docs, {}, {1900, 2100}), window_of(1960, 1960, 5), stop, opts);
        if (m.empty()) continue;
        const auto g = build_slice_graph(m, 0.0);
        const int anchor = static_cast<int>(m.cols()) - 1;
        REQUIRE(m.attributes[static_cast<std::size_t>(anchor)].kind == AttributeKind::Anchor);
        const double N = static_cast<double>(m.rows());
        for (const auto& e : g.edges) {
            if (e.b != anchor) continue;
            const double k = m.document_frequency(static_cast<std::size_t>(e.a));
            CHECK(std::abs(e.weight - std::sqrt(k / N)) <= 1e-12);
        }
    }
}

TEST_CASE("write_edge_tsv") {
    const auto g = graph_of(2, {{0, 1, 0.25}});
    CHECK(write_edge_tsv(g) == "word:n0\tword:n1\t0.250000\n");
}
