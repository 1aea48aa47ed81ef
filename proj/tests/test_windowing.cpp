#include <doctest.h>

#include "support.hpp"

using namespace chronogram;
using testsupport::record;

namespace {

Corpus corpus_of(std::vector<BiblioRecord> recs) { return filter_corpus(std::move(recs), {}, {1900, 2100}); }

const TimeWindow k1960 = window_of(1960, 1960, 5);

}  // namespace

TEST_CASE("window_of") {
    auto w = window_of(1952, 1950, 5);
    CHECK(w.index == 0);
    CHECK(w.label == "1950-1954");
    w = window_of(2009, 1950, 5);
    CHECK(w.index == 11);
    CHECK(w.label == "2005-2009");
    CHECK(w.start_year == 2005);
    CHECK(w.end_year == 2009);
    w = window_of(1950, 1950, 1);
    CHECK(w.index == 0);
    CHECK(w.label == "1950-1950");
    CHECK_THROWS_AS(window_of(1949, 1950, 5), YearBeforeOrigin);
    CHECK_THROWS_AS(window_of(1950, 1950, 0), std::invalid_argument);
}

TEST_CASE("windows_for_range partitions the span") {
    const auto ws = windows_for_range(1950, 2009, 5);
    REQUIRE(ws.size() == 12);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        CHECK(ws[i].index == static_cast<int>(i));
        CHECK(ws[i].end_year == ws[i].start_year + 4);
        if (i) CHECK(ws[i].start_year == ws[i - 1].end_year + 1);
    }
    CHECK(windows_for_range(1950, 1949, 5).empty());
}

TEST_CASE("extract_attributes") {
    const auto stop = default_stopwords();
    REQUIRE(stop.contains("for"));
    REQUIRE(stop.contains("to"));

    SUBCASE("title words with stopwords removed") {
        const auto a = extract_attributes(record("x", 1955, "Citation Indexes for Science", {}, "(NONE)"), stop);
        AttributeCounts expect{{{AttributeKind::Word, "citation"}, 1},
                               {{AttributeKind::Word, "indexes"}, 1},
                               {{AttributeKind::Word, "science"}, 1}};
        CHECK(a == expect);
    }
    SUBCASE("stopword-only title keeps authors and journal") {
        const auto a = extract_attributes(record("x", 1955, "The Of And", {"GARFIELD E"}, "SCIENCE"), stop);
        AttributeCounts expect{{{AttributeKind::Author, "GARFIELD E"}, 1}, {{AttributeKind::Journal, "SCIENCE"}, 1}};
        CHECK(a == expect);
    }
    SUBCASE("multiplicity is preserved") {
        const auto a = extract_attributes(record("x", 1955, "DNA to DNA", {}, "(NONE)"), stop);
        AttributeCounts expect{{{AttributeKind::Word, "dna"}, 2}};
        CHECK(a == expect);
    }
    SUBCASE("hyphens split unless kept") {
        auto a = extract_attributes(record("x", 1955, "co-word maps x-ray", {}, "(NONE)"), stop);
        CHECK(a.count({AttributeKind::Word, "word"}) == 1);
        CHECK(a.count({AttributeKind::Word, "co"}) == 1);
        CHECK(a.count({AttributeKind::Word, "x"}) == 0);
        CHECK(a.count({AttributeKind::Word, "ray"}) == 1);
        a = extract_attributes(record("x", 1955, "co-word maps", {}, "(NONE)"), stop, {.keep_hyphens = true});
        CHECK(a.count({AttributeKind::Word, "co-word"}) == 1);
    }
    SUBCASE("repeated author counted once") {
        const auto a = extract_attributes(record("x", 1955, "", {"A B", "A B"}, "J"), stop);
        CHECK(a.at({AttributeKind::Author, "A B"}) == 1);
    }
}

TEST_CASE("build_incidence: min_occ boundary") {
    const auto stop = default_stopwords();
    const auto corpus = corpus_of({record("d1", 1960, "citation index", {"A"}),
                                   record("d2", 1961, "citation analysis", {"B"}),
                                   record("d3", 1962, "unrelated words here", {"C"})});
    const auto m = build_incidence(corpus, k1960, stop);
    const Attribute citation{AttributeKind::Word, "citation"};
    auto it = std::find(m.attributes.begin(), m.attributes.end(), citation);
    REQUIRE(it != m.attributes.end());
    CHECK(m.document_frequency(static_cast<std::size_t>(it - m.attributes.begin())) == 2);
    CHECK(std::find(m.attributes.begin(), m.attributes.end(), Attribute{AttributeKind::Word, "index"}) ==
          m.attributes.end());
    // The journal "J" is shared by all three but does not keep d3 alive.
    CHECK(m.documents == std::vector<std::string>{"d1", "d2"});
}

TEST_CASE("build_incidence: df counts documents, not tokens") {
    const auto m = build_incidence(corpus_of({record("d1", 1960, "dna to dna", {}), record("d2", 1960, "rna", {})}),
                                   k1960, default_stopwords());
    CHECK(m.empty());
    CHECK(m.attributes.empty());
}

TEST_CASE("build_incidence: cascade matches the exhaustive oracle") {
    // d4 holds no repeated word and falls out, leaving J2 with a single
    // document, so the J2 column goes in the second round. Same for J3.
    const std::vector<BiblioRecord> docs = {
        record("d1", 1960, "alpha beta", {}, "J1"), record("d2", 1960, "alpha", {}, "J1"),
        record("d3", 1960, "beta", {}, "J2"),       record("d4", 1960, "omega", {}, "J2"),
        record("d5", 1960, "gamma", {}, "J3"),      record("d6", 1960, "delta", {}, "J3"),
    };
    const auto stop = default_stopwords();
    const auto m = build_incidence(corpus_of(docs), k1960, stop);
    const auto o = testsupport::incidence_oracle(docs, stop, 2);
    CHECK(m.documents == o.documents);
    CHECK(m.attributes == o.attributes);
    CHECK(m.counts == o.counts);
    CHECK(m.documents == std::vector<std::string>{"d1", "d2", "d3"});
    CHECK(m.attributes == std::vector<Attribute>{{AttributeKind::Word, "alpha"},
                                                 {AttributeKind::Word, "beta"},
                                                 {AttributeKind::Journal, "J1"}});
}

TEST_CASE("build_incidence: random small windows match the exhaustive oracle") {
    std::mt19937_64 rng(20240601);
    const auto stop = default_stopwords();
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const auto docs = testsupport::random_window(rng, n);
        for (int min_occ : {1, 2, 3}) {
            IncidenceOptions opts;
            opts.min_occ = min_occ;
            const auto m = build_incidence(corpus_of(docs), k1960, stop, opts);
            const auto o = testsupport::incidence_oracle(docs, stop, min_occ);
            CHECK(m.documents == o.documents);
            CHECK(m.attributes == o.attributes);
            CHECK(m.counts == o.counts);
        }
    }
}

TEST_CASE("build_incidence: fixed point and monotonicity") {
    std::mt19937_64 rng(7);
    const auto stop = default_stopwords();
    for (int trial = 0; trial < 100; ++trial) {
        const auto docs = testsupport::random_window(rng, 2 + static_cast<int>(rng() % 7));
        std::size_t previous = std::numeric_limits<std::size_t>::max();
        for (int min_occ = 1; min_occ <= 4; ++min_occ) {
            IncidenceOptions opts;
            opts.min_occ = min_occ;
            const auto m = build_incidence(corpus_of(docs), k1960, stop, opts);
            CHECK(m.attributes.size() <= previous);
            previous = m.attributes.size();
            for (std::size_t c = 0; c < m.cols(); ++c) CHECK(m.document_frequency(c) >= min_occ);
            for (std::size_t r = 0; r < m.rows(); ++r) {
                bool held = false;
                for (std::size_t c = 0; c < m.cols(); ++c)
                    held = held || (m.at(r, c) > 0 && (m.attributes[c].kind == AttributeKind::Word ||
                                                       m.attributes[c].kind == AttributeKind::Author));
                CHECK(held);
            }
            // Re-running on the surviving documents changes nothing.
            std::vector<BiblioRecord> kept;
            for (const auto& d : docs)
                if (std::find(m.documents.begin(), m.documents.end(), d.id) != m.documents.end()) kept.push_back(d);
            const auto again = build_incidence(corpus_of(kept), k1960, stop, opts);
            CHECK(again.documents == m.documents);
            CHECK(again.attributes == m.attributes);
            CHECK(again.counts == m.counts);
        }
    }
}

TEST_CASE("build_incidence: anchor column") {
    const auto stop = default_stopwords();
    const auto corpus = corpus_of({record("d1", 1960, "citation index", {"Garfield, E.", "Small, H."}),
                                   record("d2", 1961, "citation analysis", {"Garfield, E."}),
                                   record("d3", 1962, "history maps", {"Garfield, E.", "Small, H."})});
    IncidenceOptions opts;
    opts.anchor = "Garfield, E.";
    opts.min_occ = 3;
    // Only the journal reaches df 3, and a journal alone holds no document.
    CHECK(build_incidence(corpus, k1960, stop, opts).empty());

    opts.min_occ = 2;
    const auto m2 = build_incidence(corpus, k1960, stop, opts);
    REQUIRE(m2.rows() == 3);
    REQUIRE(m2.attributes.back() == Attribute{AttributeKind::Anchor, "GARFIELD E"});
    CHECK(std::find(m2.attributes.begin(), m2.attributes.end(), Attribute{AttributeKind::Author, "GARFIELD E"}) ==
          m2.attributes.end());
    const std::size_t anchor = m2.cols() - 1;
    for (std::size_t r = 0; r < m2.rows(); ++r) CHECK(m2.at(r, anchor) == 1);
}

TEST_CASE("build_incidence: ordering is a function of content") {
    const auto stop = default_stopwords();
    std::vector<BiblioRecord> docs = {record("b", 1960, "citation maps", {"X"}), record("a", 1961, "citation maps", {"X"}),
                                      record("c", 1962, "maps", {"Y"})};
    const auto m1 = build_incidence(corpus_of(docs), k1960, stop);
    std::reverse(docs.begin(), docs.end());
    const auto m2 = build_incidence(corpus_of(docs), k1960, stop);
    CHECK(m1.documents == std::vector<std::string>{"a", "b", "c"});
    CHECK(m1.documents == m2.documents);
    CHECK(m1.attributes == m2.attributes);
    CHECK(m1.counts == m2.counts);
    CHECK(std::is_sorted(m1.attributes.begin(), m1.attributes.end()));
}

TEST_CASE("build_incidence: binarize") {
    IncidenceOptions opts;
    opts.binarize = true;
    const auto m = build_incidence(corpus_of({record("d1", 1960, "dna dna", {}), record("d2", 1960, "dna", {})}),
                                   k1960, default_stopwords(), opts);
    REQUIRE(m.rows() == 2);
    CHECK(std::all_of(m.counts.begin(), m.counts.end(), [](int c) { return c == 0 || c == 1; }));
}

TEST_CASE("write_incidence_tsv") {
    const auto m = build_incidence(corpus_of({record("d1", 1960, "dna", {}), record("d2", 1960, "dna", {})}), k1960,
                                   default_stopwords());
    CHECK(write_incidence_tsv(m) == "document\tword:dna\tjournal:J\nd1\t1\t1\nd2\t1\t1\n");
}
