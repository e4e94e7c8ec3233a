#pragma once

#include "semnet/corpus.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace semnet::geo {

/// Country name -> surface forms (name, adjective, demonym), plus the set of
/// forms that are also ordinary words and need a stricter match.
class Gazetteer {
public:
    Gazetteer() = default;
    /// Throws ParseError when a form belongs to two countries without being
    /// flagged ambiguous.
    Gazetteer(std::map<std::string, std::set<std::string>> entries, std::set<std::string> ambiguous);

    const std::map<std::string, std::set<std::string>>& entries() const noexcept { return entries_; }
    const std::set<std::string>& ambiguous() const noexcept { return ambiguous_; }

    /// Countries mentioned in `text`: case-sensitive whole-word matching,
    /// longest form first. Ambiguous forms match only when not sentence-initial.
    std::set<std::string> tag(std::string_view text) const;

private:
    struct Form {
        std::vector<std::string> words;
        std::vector<std::string> countries;
        bool ambiguous = false;
    };
    std::map<std::string, std::set<std::string>> entries_;
    std::set<std::string> ambiguous_;
    std::map<std::string, std::vector<Form>> by_first_word_;  // longest first
};

/// {"Italy": ["Italy", "Italian", "Italians"], ..., "ambiguous": ["Turkey"]}
Gazetteer gazetteer_from_json(std::string_view json_text);
/// The shipped gazetteer of UN member states.
const Gazetteer& default_gazetteer();

/// Countries mentioned in the title or abstract.
std::set<std::string> tag_countries(const corpus::Document& doc, const Gazetteer& gaz);

/// Number of documents mentioning each country (at most one per document).
std::map<std::string, std::size_t> country_counts(const corpus::DocumentSet& docs, const Gazetteer& gaz);

/// CSV with columns country, dataset, count; rows sorted by country then dataset.
std::string counts_to_csv(const std::map<std::string, std::map<std::string, std::size_t>>& by_dataset);

}  // namespace semnet::geo
