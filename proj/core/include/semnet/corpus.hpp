#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semnet::corpus {

/// One bibliographic record.
struct Document {
    std::string id;
    std::string title;
    std::string abstract_text;
    int year = 0;
    std::vector<std::string> author_keywords;
    std::vector<std::string> index_keywords;
    std::string language;
    std::string doc_type;
    std::optional<std::string> venue;

    bool operator==(const Document&) const = default;
};

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

/// Immutable ordered collection of documents. Order is ingestion order.
class DocumentSet {
public:
    DocumentSet() = default;
    DocumentSet(std::vector<Document> documents, std::vector<std::string> provenance);

    const std::vector<Document>& documents() const noexcept { return documents_; }
    const std::vector<std::string>& provenance() const noexcept { return provenance_; }
    std::size_t size() const noexcept { return documents_.size(); }
    bool empty() const noexcept { return documents_.empty(); }
    auto begin() const noexcept { return documents_.begin(); }
    auto end() const noexcept { return documents_.end(); }
    const Document& operator[](std::size_t i) const { return documents_[i]; }

    /// Canonical JSONL serialization (the corpus file format).
    std::string to_jsonl() const;
    /// SHA-256 of to_jsonl(); identifies corpus content independent of its source file.
    std::string content_hash() const;

private:
    std::vector<Document> documents_;
    std::vector<std::string> provenance_;
};

enum class Profile { ScopusCsv, GenericJsonl };

Profile parse_profile(std::string_view name);
std::string_view profile_name(Profile profile);

struct IngestResult {
    DocumentSet documents;
    std::size_t rejected = 0;    ///< malformed or invariant-violating rows
    std::size_t duplicates = 0;  ///< rows collapsed by deduplication
};

/// Parses an export already in memory. `source` is recorded in provenance.
/// Throws ParseError("zero valid records") when nothing survives.
IngestResult ingest_text(std::string_view content, Profile profile, std::string_view source = "<memory>");
IngestResult ingest(const std::filesystem::path& path, Profile profile);

enum class SearchField { AuthorKeywords, IndexKeywords, Title, Abstract };

SearchField parse_search_field(std::string_view name);
std::string_view search_field_name(SearchField field);

/// Conjunction of term groups; each group is a disjunction of case-insensitive
/// substrings matched against the selected fields.
struct KeywordQuery {
    std::vector<std::vector<std::string>> required_terms;
    int min_year = kMinYear;
    int max_year = kMaxYear;
    std::optional<std::string> language;  ///< nullopt = any
    std::vector<std::string> doc_types;   ///< empty = any
    std::vector<SearchField> search_fields{SearchField::AuthorKeywords, SearchField::IndexKeywords};

    /// Throws ParseError on an empty group list or inverted year range.
    void validate() const;
    std::string describe() const;
};

KeywordQuery query_from_json(std::string_view json_text);
std::string query_to_json(const KeywordQuery& q);

bool matches(const Document& doc, const KeywordQuery& q);
DocumentSet filter_query(const DocumentSet& docs, const KeywordQuery& q);

/// Year -> count, including zero-count years between the first and last year.
std::map<int, std::size_t> count_by_year(const DocumentSet& docs);

}  // namespace semnet::corpus
