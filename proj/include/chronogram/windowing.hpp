#pragma once

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chronogram/ingest.hpp"

namespace chronogram {

/// Inclusive run of calendar years; windows of one run share `length`.
struct TimeWindow {
    int index = 0;
    int start_year = 0;
    int end_year = 0;
    std::string label;

    bool operator==(const TimeWindow&) const = default;
};

class YearBeforeOrigin : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

TimeWindow window_of(int year, int origin, int length);

/// Consecutive windows from `origin` up to the window containing `last_year`.
std::vector<TimeWindow> windows_for_range(int origin, int last_year, int length);

enum class AttributeKind { Word, Author, Journal, Anchor };

std::string_view kind_name(AttributeKind kind);
std::optional<AttributeKind> parse_kind(std::string_view name);

/// A network node. (kind, label) is the identity key across windows.
struct Attribute {
    AttributeKind kind = AttributeKind::Word;
    std::string label;

    auto operator<=>(const Attribute&) const = default;
    bool operator==(const Attribute&) const = default;

    /// "kind:label", used as the node name in every export.
    std::string key() const;
};

/// Attribute multiset: attribute -> multiplicity in one record.
using AttributeCounts = std::map<Attribute, int>;

struct TokenizeOptions {
    bool keep_hyphens = false;
};

/// Lowercased title tokens, split on non-alphanumeric runs. Bytes >= 0x80
/// count as word characters so UTF-8 words stay intact.
std::vector<std::string> tokenize_title(std::string_view title, TokenizeOptions opts = {});

AttributeCounts extract_attributes(const BiblioRecord& record, const StopwordSet& stopwords,
                                   TokenizeOptions opts = {});

struct IncidenceOptions {
    int min_occ = 2;
    std::optional<std::string> anchor;  // author label for the all-ones column
    bool binarize = false;
    TokenizeOptions tokenize;
};

enum class WindowStatus { Ok, Empty };

/// Documents x attributes occurrence counts for one window. Row-major.
struct IncidenceMatrix {
    TimeWindow window;
    std::vector<std::string> documents;
    std::vector<Attribute> attributes;
    std::vector<int> counts;
    WindowStatus status = WindowStatus::Empty;

    std::size_t rows() const { return documents.size(); }
    std::size_t cols() const { return attributes.size(); }
    int at(std::size_t row, std::size_t col) const { return counts[row * cols() + col]; }
    std::vector<double> column(std::size_t col) const;
    /// Number of documents with a nonzero entry in `col`.
    int document_frequency(std::size_t col) const;
    bool empty() const { return status == WindowStatus::Empty; }
};

/// Per-window matrix after min-occurrence and empty-document filtering,
/// iterated to a fixed point. The anchor column is appended last and is
/// exempt from filtering. Author columns equal to the anchor label are
/// dropped since the anchor replaces them.
IncidenceMatrix build_incidence(const Corpus& corpus, const TimeWindow& window,
                                const StopwordSet& stopwords, const IncidenceOptions& opts = {});

std::string write_incidence_tsv(const IncidenceMatrix& m);

}  // namespace chronogram
