#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chronogram {

/// One publication as read from a bibliographic export.
struct BiblioRecord {
    std::string id;
    std::vector<std::string> authors;
    std::string title;
    std::string journal;
    int year = 0;

    bool operator==(const BiblioRecord&) const = default;
};

/// Raised for a record that cannot be accepted (bad year, missing
/// terminator, duplicate id, ...). `line()` is 1-based.
class MalformedRecord : public std::runtime_error {
public:
    MalformedRecord(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// File-level structural problem (e.g. the `EF` marker is absent).
class MalformedFile : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the two-letter tagged export format (AU/TI/SO/PY/UT, records
/// closed by ER, file closed by EF). Unknown tags are skipped.
std::vector<BiblioRecord> parse_field_tagged(std::string_view text);

/// Tab-separated fallback: id, year, journal, title, authors (`;`-separated).
/// A first line starting with "id\t" is treated as a header.
std::vector<BiblioRecord> parse_tsv(std::string_view text);

/// Canonical tagged rendering; parse_field_tagged(render_field_tagged(r)) == r.
std::string render_field_tagged(const std::vector<BiblioRecord>& records);

/// Reads a file and dispatches on its extension (`.tsv` vs tagged text).
std::vector<BiblioRecord> read_records(const std::string& path);

// Normalizers shared with attribute extraction.
std::string normalize_whitespace(std::string_view s);
std::string normalize_author(std::string_view s);
std::string normalize_journal(std::string_view s);

inline constexpr std::string_view kNoJournal = "(NONE)";

struct StopwordSet {
    std::set<std::string, std::less<>> words;

    bool contains(std::string_view w) const { return words.find(w) != words.end(); }
    std::size_t size() const { return words.size(); }
};

StopwordSet load_stopwords(std::string_view text);

/// Raw text of the bundled English stopword list.
std::string_view bundled_stopword_text();
StopwordSet default_stopwords();

struct YearRange {
    int min = 0;
    int max = 0;
};

struct FilterLogEntry {
    std::string id;
    std::string reason;
};

struct Corpus {
    std::vector<BiblioRecord> records;  // sorted by (year, id)
    std::string source;
    std::vector<FilterLogEntry> filter_log;

    int min_year() const;
    int max_year() const;
};

/// Drops records from excluded journals (case-insensitive exact match)
/// and outside `years`; every removal is logged.
Corpus filter_corpus(std::vector<BiblioRecord> records,
                     const std::set<std::string>& excluded_journals,
                     YearRange years);

}  // namespace chronogram
