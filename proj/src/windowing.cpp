#include "chronogram/windowing.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace chronogram {

TimeWindow window_of(int year, int origin, int length) {
    if (length < 1) throw std::invalid_argument(fmt::format("window length must be >= 1, got {}", length));
    if (year < origin) throw YearBeforeOrigin(fmt::format("year {} precedes origin {}", year, origin));
    TimeWindow w;
    w.index = (year - origin) / length;
    w.start_year = origin + w.index * length;
    w.end_year = w.start_year + length - 1;
    w.label = fmt::format("{}-{}", w.start_year, w.end_year);
    return w;
}

std::vector<TimeWindow> windows_for_range(int origin, int last_year, int length) {
    std::vector<TimeWindow> out;
    if (last_year < origin) return out;
    const int count = window_of(last_year, origin, length).index + 1;
    for (int i = 0; i < count; ++i) out.push_back(window_of(origin + i * length, origin, length));
    return out;
}

std::string_view kind_name(AttributeKind kind) {
    switch (kind) {
        case AttributeKind::Word: return "word";
        case AttributeKind::Author: return "author";
        case AttributeKind::Journal: return "journal";
        case AttributeKind::Anchor: return "anchor";
    }
    return "word";
}

std::optional<AttributeKind> parse_kind(std::string_view name) {
    for (auto k : {AttributeKind::Word, AttributeKind::Author, AttributeKind::Journal, AttributeKind::Anchor})
        if (kind_name(k) == name) return k;
    return std::nullopt;
}

std::string Attribute::key() const { return fmt::format("{}:{}", kind_name(kind), label); }

std::vector<std::string> tokenize_title(std::string_view title, TokenizeOptions opts) {
    auto word_char = [&](char c) {
        const auto u = static_cast<unsigned char>(c);
        return (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || u >= 0x80 ||
               (opts.keep_hyphens && c == '-');
    };
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (opts.keep_hyphens) {
            const auto first = cur.find_first_not_of('-');
            cur = first == std::string::npos ? std::string{} : cur.substr(first, cur.find_last_not_of('-') - first + 1);
        }
        if (!cur.empty()) tokens.push_back(cur);
        cur.clear();
    };
    for (char c : title) {
        if (word_char(c)) {
            cur.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

AttributeCounts extract_attributes(const BiblioRecord& record, const StopwordSet& stopwords, TokenizeOptions opts) {
    AttributeCounts out;
    for (auto& tok : tokenize_title(record.title, opts)) {
        if (tok.size() < 2 || stopwords.contains(tok)) continue;
        ++out[Attribute{AttributeKind::Word, std::move(tok)}];
    }
    for (const auto& a : record.authors) {
        std::string label = normalize_author(a);
        if (!label.empty()) out[Attribute{AttributeKind::Author, std::move(label)}] = 1;
    }
    std::string journal = normalize_journal(record.journal);
    if (!journal.empty() && journal != kNoJournal) out[Attribute{AttributeKind::Journal, std::move(journal)}] = 1;
    return out;
}

std::vector<double> IncidenceMatrix::column(std::size_t col) const {
    std::vector<double> v(rows());
    for (std::size_t r = 0; r < rows(); ++r) v[r] = at(r, col);
    return v;
}

int IncidenceMatrix::document_frequency(std::size_t col) const {
    int df = 0;
    for (std::size_t r = 0; r < rows(); ++r) df += at(r, col) != 0;
    return df;
}

IncidenceMatrix build_incidence(const Corpus& corpus, const TimeWindow& window, const StopwordSet& stopwords,
                                const IncidenceOptions& opts) {
    if (opts.min_occ < 1) throw std::invalid_argument("min_occ must be >= 1");

    struct Doc {
        const BiblioRecord* record;
        AttributeCounts attrs;
    };
    std::optional<std::string> anchor;
    if (opts.anchor) anchor = normalize_author(*opts.anchor);

    std::vector<Doc> docs;
    for (const auto& r : corpus.records) {
        if (r.year < window.start_year || r.year > window.end_year) continue;
        Doc d{&r, extract_attributes(r, stopwords, opts.tokenize)};
        if (anchor) d.attrs.erase(Attribute{AttributeKind::Author, *anchor});
        docs.push_back(std::move(d));
    }
    std::sort(docs.begin(), docs.end(), [](const Doc& a, const Doc& b) { return a.record->id < b.record->id; });

    std::vector<bool> alive(docs.size(), true);
    std::set<Attribute> surviving;
    while (true) {
        std::map<Attribute, int> df;
        for (std::size_t i = 0; i < docs.size(); ++i)
            if (alive[i])
                for (const auto& [a, n] : docs[i].attrs) ++df[a];
        surviving.clear();
        for (const auto& [a, n] : df)
            if (n >= opts.min_occ) surviving.insert(a);

        bool changed = false;
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (!alive[i]) continue;
            const bool retained = std::any_of(docs[i].attrs.begin(), docs[i].attrs.end(), [&](const auto& e) {
                return (e.first.kind == AttributeKind::Word || e.first.kind == AttributeKind::Author) &&
                       surviving.count(e.first);
            });
            if (!retained) {
                alive[i] = false;
                changed = true;
            }
        }
        if (!changed) break;
    }

    IncidenceMatrix m;
    m.window = window;
    for (std::size_t i = 0; i < docs.size(); ++i)
        if (alive[i]) m.documents.push_back(docs[i].record->id);
    if (m.documents.empty()) {
        m.status = WindowStatus::Empty;
        return m;
    }
    m.status = WindowStatus::Ok;
    m.attributes.assign(surviving.begin(), surviving.end());
    if (anchor) m.attributes.push_back(Attribute{AttributeKind::Anchor, *anchor});

    const std::size_t ncols = m.attributes.size();
    m.counts.assign(m.documents.size() * ncols, 0);
    std::size_t row = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (!alive[i]) continue;
        for (std::size_t c = 0; c < ncols; ++c) {
            const Attribute& a = m.attributes[c];
            int v = 0;
            if (a.kind == AttributeKind::Anchor) {
                v = 1;
            } else if (auto it = docs[i].attrs.find(a); it != docs[i].attrs.end()) {
                v = opts.binarize ? 1 : it->second;
            }
            m.counts[row * ncols + c] = v;
        }
        ++row;
    }
    return m;
}

std::string write_incidence_tsv(const IncidenceMatrix& m) {
    std::string out = "document";
    for (const auto& a : m.attributes) out += "\t" + a.key();
    out += "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out += m.documents[r];
        for (std::size_t c = 0; c < m.cols(); ++c) out += fmt::format("\t{}", m.at(r, c));
        out += "\n";
    }
    return out;
}

}  // namespace chronogram
