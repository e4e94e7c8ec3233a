#include "semnet/corpus.hpp"

#include "semnet/error.hpp"
#include "semnet/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace semnet::corpus {

using nlohmann::ordered_json;

DocumentSet::DocumentSet(std::vector<Document> documents, std::vector<std::string> provenance)
    : documents_(std::move(documents)), provenance_(std::move(provenance)) {}

namespace {

ordered_json document_to_json(const Document& d) {
    ordered_json j;
    j["id"] = d.id;
    j["title"] = d.title;
    j["abstract"] = d.abstract_text;
    j["year"] = d.year;
    j["author_keywords"] = d.author_keywords;
    j["index_keywords"] = d.index_keywords;
    j["language"] = d.language;
    j["doc_type"] = d.doc_type;
    if (d.venue) j["venue"] = *d.venue;
    return j;
}

std::vector<std::string> keyword_list(std::string_view field) {
    std::vector<std::string> out;
    for (auto& part : io::split(field, ';')) {
        auto t = io::trim(part);
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

std::optional<int> parse_year(std::string_view s) {
    auto t = io::trim(s);
    int year = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), year);
    if (ec != std::errc{} || ptr != t.data() + t.size()) return std::nullopt;
    return year;
}

// Scopus writes this placeholder instead of leaving the cell empty.
bool is_missing_text(std::string_view s) {
    auto t = io::trim(s);
    return t.empty() || t == "[No abstract available]";
}

bool valid(const Document& d) {
    return d.year >= kMinYear && d.year <= kMaxYear && !is_missing_text(d.title) &&
           !is_missing_text(d.abstract_text);
}

std::string normalized_title(std::string_view title) {
    std::string out;
    bool space = false;
    for (unsigned char c : title) {
        if (std::isalnum(c)) {
            if (space && !out.empty()) out.push_back(' ');
            out.push_back(static_cast<char>(std::tolower(c)));
            space = false;
        } else {
            space = true;
        }
    }
    return out;
}

struct Collector {
    std::vector<Document> docs;
    std::unordered_set<std::string> ids;
    std::unordered_set<std::string> title_keys;
    std::size_t rejected = 0;
    std::size_t duplicates = 0;

    void add(Document d) {
        if (!valid(d)) {
            ++rejected;
            return;
        }
        auto title_key = normalized_title(d.title) + "|" + std::to_string(d.year);
        if (d.id.empty()) {
            if (title_keys.count(title_key)) {
                ++duplicates;
                return;
            }
            d.id = "doc-" + io::sha256_hex(title_key).substr(0, 16);
        }
        if (!ids.insert(d.id).second) {
            ++duplicates;
            return;
        }
        title_keys.insert(std::move(title_key));
        docs.push_back(std::move(d));
    }
};

void ingest_scopus_csv(std::string_view content, Collector& out) {
    auto rows = io::parse_csv(content);
    if (rows.empty()) return;
    const auto& header = rows.front();
    std::unordered_map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col.emplace(io::trim(header[i]), i);

    auto index_of = [&](const char* name) -> std::optional<std::size_t> {
        auto it = col.find(name);
        if (it == col.end()) return std::nullopt;
        return it->second;
    };
    const auto title = index_of("Title");
    const auto abstract_col = index_of("Abstract");
    const auto year = index_of("Year");
    if (!title || !abstract_col || !year) {
        throw ParseError("scopus-csv: header must contain Title, Abstract and Year columns");
    }
    const auto author_kw = index_of("Author Keywords");
    const auto index_kw = index_of("Index Keywords");
    const auto language = index_of("Language of Original Document");
    const auto doc_type = index_of("Document Type");
    const auto venue = index_of("Source title");
    const auto eid = index_of("EID");

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size()) {
            ++out.rejected;
            continue;
        }
        auto cell = [&](std::optional<std::size_t> c) { return c ? io::trim(row[*c]) : std::string{}; };
        auto y = parse_year(row[*year]);
        if (!y) {
            ++out.rejected;
            continue;
        }
        Document d;
        d.id = cell(eid);
        d.title = cell(title);
        d.abstract_text = cell(abstract_col);
        d.year = *y;
        if (author_kw) d.author_keywords = keyword_list(row[*author_kw]);
        if (index_kw) d.index_keywords = keyword_list(row[*index_kw]);
        d.language = cell(language);
        d.doc_type = cell(doc_type);
        if (venue && !io::trim(row[*venue]).empty()) d.venue = cell(venue);
        out.add(std::move(d));
    }
}

std::vector<std::string> string_array(const nlohmann::json& j, const char* key) {
    std::vector<std::string> out;
    if (!j.contains(key) || j[key].is_null()) return out;
    for (const auto& v : j.at(key)) out.push_back(v.get<std::string>());
    return out;
}

std::string string_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return {};
    return j[key].get<std::string>();
}

void ingest_jsonl(std::string_view content, Collector& out) {
    std::size_t start = 0;
    while (start < content.size()) {
        auto nl = content.find('\n', start);
        auto line = content.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? content.size() : nl + 1;
        if (io::trim(line).empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            if (!j.is_object()) {
                ++out.rejected;
                continue;
            }
            Document d;
            d.id = string_field(j, "id");
            d.title = string_field(j, "title");
            d.abstract_text = string_field(j, "abstract");
            const auto& y = j.at("year");
            d.year = y.is_string() ? parse_year(y.get<std::string>()).value_or(0) : y.get<int>();
            d.author_keywords = string_array(j, "author_keywords");
            d.index_keywords = string_array(j, "index_keywords");
            d.language = string_field(j, "language");
            d.doc_type = string_field(j, "doc_type");
            if (j.contains("venue") && j["venue"].is_string()) d.venue = j["venue"].get<std::string>();
            out.add(std::move(d));
        } catch (const nlohmann::json::exception&) {
            ++out.rejected;
        }
    }
}

bool contains_ci(std::string_view haystack_lower, std::string_view needle_lower) {
    return haystack_lower.find(needle_lower) != std::string_view::npos;
}

}  // namespace

std::string DocumentSet::to_jsonl() const {
    std::string out;
    for (const auto& d : documents_) {
        out += document_to_json(d).dump();
        out.push_back('\n');
    }
    return out;
}

std::string DocumentSet::content_hash() const { return io::sha256_hex(to_jsonl()); }

Profile parse_profile(std::string_view name) {
    if (name == "scopus-csv") return Profile::ScopusCsv;
    if (name == "generic-jsonl") return Profile::GenericJsonl;
    throw ParseError("unknown profile: " + std::string(name));
}

std::string_view profile_name(Profile profile) {
    return profile == Profile::ScopusCsv ? "scopus-csv" : "generic-jsonl";
}

IngestResult ingest_text(std::string_view content, Profile profile, std::string_view source) {
    Collector collector;
    if (profile == Profile::ScopusCsv) {
        ingest_scopus_csv(content, collector);
    } else {
        ingest_jsonl(content, collector);
    }
    if (collector.docs.empty()) throw ParseError("zero valid records");
    std::vector<std::string> provenance{"ingest " + std::string(profile_name(profile)) + " " + std::string(source) +
                                        " (" + std::to_string(collector.docs.size()) + " accepted, " +
                                        std::to_string(collector.rejected) + " rejected, " +
                                        std::to_string(collector.duplicates) + " duplicates)"};
    return IngestResult{DocumentSet(std::move(collector.docs), std::move(provenance)), collector.rejected,
                        collector.duplicates};
}

IngestResult ingest(const std::filesystem::path& path, Profile profile) {
    return ingest_text(io::read_file(path), profile, path.string());
}

SearchField parse_search_field(std::string_view name) {
    if (name == "author_keywords") return SearchField::AuthorKeywords;
    if (name == "index_keywords") return SearchField::IndexKeywords;
    if (name == "title") return SearchField::Title;
    if (name == "abstract") return SearchField::Abstract;
    throw ParseError("unknown search field: " + std::string(name));
}

std::string_view search_field_name(SearchField field) {
    switch (field) {
        case SearchField::AuthorKeywords: return "author_keywords";
        case SearchField::IndexKeywords: return "index_keywords";
        case SearchField::Title: return "title";
        case SearchField::Abstract: return "abstract";
    }
    return "";
}

void KeywordQuery::validate() const {
    if (required_terms.empty()) throw ParseError("query needs at least one required term group");
    for (const auto& group : required_terms) {
        if (group.empty()) throw ParseError("query term groups may not be empty");
    }
    if (min_year > max_year) throw ParseError("query year range is inverted");
    if (search_fields.empty()) throw ParseError("query needs at least one search field");
}

std::string KeywordQuery::describe() const {
    std::ostringstream ss;
    ss << "filter ";
    for (std::size_t g = 0; g < required_terms.size(); ++g) {
        if (g) ss << " AND ";
        ss << '(';
        for (std::size_t t = 0; t < required_terms[g].size(); ++t) {
            if (t) ss << " OR ";
            ss << '"' << required_terms[g][t] << '"';
        }
        ss << ')';
    }
    ss << " years " << min_year << '-' << max_year;
    if (language) ss << " language=" << *language;
    if (!doc_types.empty()) {
        ss << " doc_types=";
        for (std::size_t i = 0; i < doc_types.size(); ++i) ss << (i ? "|" : "") << doc_types[i];
    }
    ss << " fields=";
    for (std::size_t i = 0; i < search_fields.size(); ++i) ss << (i ? "|" : "") << search_field_name(search_fields[i]);
    return ss.str();
}

KeywordQuery query_from_json(std::string_view json_text) {
    KeywordQuery q;
    try {
        auto j = nlohmann::json::parse(json_text);
        q.required_terms = j.at("required_terms").get<std::vector<std::vector<std::string>>>();
        if (j.contains("year_range")) {
            const auto& yr = j["year_range"];
            q.min_year = yr.at(0).get<int>();
            q.max_year = yr.at(1).get<int>();
        }
        if (j.contains("language") && j["language"].is_string() && j["language"] != "any") {
            q.language = j["language"].get<std::string>();
        }
        if (j.contains("doc_types") && j["doc_types"].is_array()) {
            q.doc_types = j["doc_types"].get<std::vector<std::string>>();
        }
        if (j.contains("search_fields")) {
            q.search_fields.clear();
            for (const auto& f : j["search_fields"]) q.search_fields.push_back(parse_search_field(f.get<std::string>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid query: ") + e.what());
    }
    q.validate();
    return q;
}

std::string query_to_json(const KeywordQuery& q) {
    ordered_json j;
    j["required_terms"] = q.required_terms;
    j["year_range"] = {q.min_year, q.max_year};
    j["language"] = q.language ? ordered_json(*q.language) : ordered_json("any");
    j["doc_types"] = q.doc_types;
    j["search_fields"] = ordered_json::array();
    for (auto f : q.search_fields) j["search_fields"].push_back(std::string(search_field_name(f)));
    return j.dump(2);
}

bool matches(const Document& doc, const KeywordQuery& q) {
    if (doc.year < q.min_year || doc.year > q.max_year) return false;
    if (q.language && io::to_lower_ascii(doc.language) != io::to_lower_ascii(*q.language)) return false;
    if (!q.doc_types.empty()) {
        auto type = io::to_lower_ascii(doc.doc_type);
        bool ok = std::any_of(q.doc_types.begin(), q.doc_types.end(),
                              [&](const std::string& t) { return io::to_lower_ascii(t) == type; });
        if (!ok) return false;
    }

    std::vector<std::string> haystacks;
    for (auto field : q.search_fields) {
        switch (field) {
            case SearchField::AuthorKeywords:
                for (const auto& k : doc.author_keywords) haystacks.push_back(io::to_lower_ascii(k));
                break;
            case SearchField::IndexKeywords:
                for (const auto& k : doc.index_keywords) haystacks.push_back(io::to_lower_ascii(k));
                break;
            case SearchField::Title: haystacks.push_back(io::to_lower_ascii(doc.title)); break;
            case SearchField::Abstract: haystacks.push_back(io::to_lower_ascii(doc.abstract_text)); break;
        }
    }
    for (const auto& group : q.required_terms) {
        bool group_hit = false;
        for (const auto& term : group) {
            auto needle = io::to_lower_ascii(term);
            for (const auto& h : haystacks) {
                if (contains_ci(h, needle)) {
                    group_hit = true;
                    break;
                }
            }
            if (group_hit) break;
        }
        if (!group_hit) return false;
    }
    return true;
}

DocumentSet filter_query(const DocumentSet& docs, const KeywordQuery& q) {
    std::vector<Document> kept;
    for (const auto& d : docs) {
        if (matches(d, q)) kept.push_back(d);
    }
    auto provenance = docs.provenance();
    provenance.push_back(q.describe() + " -> " + std::to_string(kept.size()) + " documents");
    return DocumentSet(std::move(kept), std::move(provenance));
}

std::map<int, std::size_t> count_by_year(const DocumentSet& docs) {
    std::map<int, std::size_t> counts;
    if (docs.empty()) return counts;
    int lo = docs[0].year;
    int hi = lo;
    for (const auto& d : docs) {
        lo = std::min(lo, d.year);
        hi = std::max(hi, d.year);
    }
    for (int y = lo; y <= hi; ++y) counts[y] = 0;
    for (const auto& d : docs) ++counts[d.year];
    return counts;
}

}  // namespace semnet::corpus
