#include "chronogram/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

namespace chronogram {

MalformedRecord::MalformedRecord(std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

char ascii_upper(char c) { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c; }

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = nl + 1;
    }
    return lines;
}

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), is_space);
}

std::optional<int> parse_year(std::string_view s) {
    std::string norm = normalize_whitespace(s);
    int year = 0;
    const char* first = norm.data();
    const char* last = norm.data() + norm.size();
    auto [ptr, ec] = std::from_chars(first, last, year);
    if (norm.empty() || ec != std::errc{} || ptr != last || year <= 0) return std::nullopt;
    return year;
}

std::string default_id(std::size_t ordinal) { return fmt::format("R{:04d}", ordinal); }

struct PendingRecord {
    std::size_t ordinal = 0;
    std::vector<std::string> authors;
    std::string title;
    std::string journal;
    std::string id;
    std::optional<int> year;
};

BiblioRecord finish(PendingRecord&& p, std::size_t er_line) {
    if (!p.year) throw MalformedRecord(er_line, "record has no PY year");
    BiblioRecord r;
    for (auto& a : p.authors) {
        std::string n = normalize_author(a);
        if (!n.empty()) r.authors.push_back(std::move(n));
    }
    r.title = normalize_whitespace(p.title);
    r.journal = normalize_whitespace(p.journal);
    if (r.journal.empty()) r.journal = std::string(kNoJournal);
    r.year = *p.year;
    r.id = normalize_whitespace(p.id);
    if (r.id.empty()) r.id = default_id(p.ordinal);
    if (r.authors.empty() && r.title.empty())
        throw MalformedRecord(er_line, "record has neither authors nor title");
    return r;
}

}  // namespace

std::string normalize_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::string normalize_author(std::string_view s) {
    std::string tmp;
    tmp.reserve(s.size());
    for (char c : s) {
        if (c == '.') continue;
        tmp.push_back(c == ',' ? ' ' : ascii_upper(c));
    }
    return normalize_whitespace(tmp);
}

std::string normalize_journal(std::string_view s) {
    std::string tmp(s);
    std::transform(tmp.begin(), tmp.end(), tmp.begin(), ascii_upper);
    return normalize_whitespace(tmp);
}

std::vector<BiblioRecord> parse_field_tagged(std::string_view text) {
    std::vector<BiblioRecord> out;
    std::unordered_set<std::string> ids;
    std::optional<PendingRecord> current;
    std::string tag;
    std::size_t ordinal = 0;
    bool seen_content = false;
    bool seen_ef = false;

    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size() && !seen_ef; ++i) {
        const std::size_t lineno = i + 1;
        std::string_view line = lines[i];
        if (blank(line)) continue;
        seen_content = true;

        if (is_space(line.front())) {
            if (!current) continue;
            std::string value = normalize_whitespace(line);
            if (tag == "AU") {
                current->authors.push_back(value);
            } else if (tag == "TI" || tag == "SO" || tag == "UT") {
                std::string& field = tag == "TI" ? current->title : tag == "SO" ? current->journal : current->id;
                if (!field.empty()) field.push_back(' ');
                field += value;
            } else if (tag == "PY") {
                throw MalformedRecord(lineno, "continuation of PY is not a year");
            }
            continue;
        }

        const bool tag_shape = line.size() >= 2 && std::isupper(static_cast<unsigned char>(line[0])) &&
                               (std::isupper(static_cast<unsigned char>(line[1])) ||
                                std::isdigit(static_cast<unsigned char>(line[1]))) &&
                               (line.size() == 2 || line[2] == ' ');
        if (!tag_shape) throw MalformedRecord(lineno, fmt::format("unrecognized line '{}'", line));

        tag = std::string(line.substr(0, 2));
        std::string_view value = line.size() > 3 ? line.substr(3) : std::string_view{};

        if (tag == "EF") {
            if (current) throw MalformedRecord(lineno, "record is missing its ER terminator");
            seen_ef = true;
            continue;
        }
        if (tag == "ER") {
            if (!current) throw MalformedRecord(lineno, "ER without an open record");
            BiblioRecord rec = finish(std::move(*current), lineno);
            current.reset();
            if (!ids.insert(rec.id).second) throw MalformedRecord(lineno, fmt::format("duplicate record id '{}'", rec.id));
            out.push_back(std::move(rec));
            continue;
        }
        if (tag == "FN" || tag == "VR") continue;

        if (!current) {
            current.emplace();
            current->ordinal = ++ordinal;
        }
        if (tag == "AU") {
            current->authors.emplace_back(value);
        } else if (tag == "TI") {
            current->title = std::string(value);
        } else if (tag == "SO") {
            current->journal = std::string(value);
        } else if (tag == "UT") {
            current->id = std::string(value);
        } else if (tag == "PY") {
            auto year = parse_year(value);
            if (!year) throw MalformedRecord(lineno, fmt::format("unparseable year '{}'", value));
            current->year = year;
        }
    }

    if (current) throw MalformedRecord(lines.size(), "record is missing its ER terminator");
    if (seen_content && !seen_ef) throw MalformedFile("missing EF end-of-file marker");
    return out;
}

std::vector<BiblioRecord> parse_tsv(std::string_view text) {
    std::vector<BiblioRecord> out;
    std::unordered_set<std::string> ids;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        std::string_view line = lines[i];
        if (blank(line)) continue;
        if (i == 0 && line.substr(0, 3) == "id\t") continue;

        std::vector<std::string_view> cols;
        std::size_t pos = 0;
        while (true) {
            std::size_t tab = line.find('\t', pos);
            cols.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
            if (tab == std::string_view::npos) break;
            pos = tab + 1;
        }
        if (cols.size() < 5) throw MalformedRecord(lineno, fmt::format("expected 5 columns, found {}", cols.size()));

        PendingRecord p;
        p.ordinal = out.size() + 1;
        p.id = std::string(cols[0]);
        p.year = parse_year(cols[1]);
        if (!p.year) throw MalformedRecord(lineno, fmt::format("unparseable year '{}'", cols[1]));
        p.journal = std::string(cols[2]);
        p.title = std::string(cols[3]);
        std::string_view authors = cols[4];
        while (!authors.empty()) {
            std::size_t semi = authors.find(';');
            p.authors.emplace_back(authors.substr(0, semi));
            if (semi == std::string_view::npos) break;
            authors.remove_prefix(semi + 1);
        }
        BiblioRecord rec = finish(std::move(p), lineno);
        if (!ids.insert(rec.id).second) throw MalformedRecord(lineno, fmt::format("duplicate record id '{}'", rec.id));
        out.push_back(std::move(rec));
    }
    return out;
}

std::string render_field_tagged(const std::vector<BiblioRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        for (std::size_t i = 0; i < r.authors.size(); ++i)
            out += (i == 0 ? "AU " : "   ") + r.authors[i] + "\n";
        if (!r.title.empty()) out += "TI " + r.title + "\n";
        out += "SO " + r.journal + "\n";
        out += fmt::format("PY {}\n", r.year);
        out += "UT " + r.id + "\n";
        out += "ER\n\n";
    }
    if (!records.empty()) out += "EF\n";
    return out;
}

std::vector<BiblioRecord> read_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const bool tsv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".tsv") == 0;
    return tsv ? parse_tsv(text) : parse_field_tagged(text);
}

StopwordSet load_stopwords(std::string_view text) {
    StopwordSet set;
    for (std::string_view line : split_lines(text)) {
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        std::string word;
        auto flush = [&] {
            if (!word.empty()) set.words.insert(std::move(word));
            word.clear();
        };
        for (char c : line) {
            if (is_space(c)) {
                flush();
            } else {
                word.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
            }
        }
        flush();
    }
    return set;
}

StopwordSet default_stopwords() { return load_stopwords(bundled_stopword_text()); }

int Corpus::min_year() const { return records.empty() ? 0 : records.front().year; }
int Corpus::max_year() const { return records.empty() ? 0 : records.back().year; }

Corpus filter_corpus(std::vector<BiblioRecord> records,
                     const std::set<std::string>& excluded_journals,
                     YearRange years) {
    if (years.min > years.max)
        throw std::invalid_argument(fmt::format("year range {}-{} is empty", years.min, years.max));

    std::sort(records.begin(), records.end(), [](const BiblioRecord& a, const BiblioRecord& b) {
        return a.year != b.year ? a.year < b.year : a.id < b.id;
    });
    std::set<std::string> excluded;
    for (const auto& j : excluded_journals) excluded.insert(normalize_journal(j));

    Corpus corpus;
    for (auto& r : records) {
        if (excluded.count(normalize_journal(r.journal))) {
            corpus.filter_log.push_back({r.id, fmt::format("excluded journal {}", r.journal)});
        } else if (r.year < years.min || r.year > years.max) {
            corpus.filter_log.push_back({r.id, fmt::format("year {} outside {}-{}", r.year, years.min, years.max)});
        } else {
            corpus.records.push_back(std::move(r));
        }
    }
    return corpus;
}

}  // namespace chronogram
