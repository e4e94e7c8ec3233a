#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace semnet::lexicon {

/// A named keyword cluster. Keywords are raw phrases, stored unstemmed.
struct ClusterDef {
    std::string name;
    std::set<std::string> keywords;
    std::string description;

    bool operator==(const ClusterDef&) const = default;
};

/// An immutable version of the curated cluster list. Edits return a new value
/// with version + 1.
struct Lexicon {
    std::vector<ClusterDef> clusters;
    std::int64_t version = 1;
    std::string notes;

    bool operator==(const Lexicon&) const = default;

    /// Throws ParseError for empty names/keyword sets or duplicate names, and
    /// CollisionError naming the token when two clusters share a keyword token.
    void validate() const;

    const ClusterDef* find(std::string_view name) const;
    /// Every keyword phrase of every cluster, in cluster order.
    std::vector<std::string> all_keywords() const;
    /// Normalized network tokens of a cluster's keywords.
    std::vector<std::string> member_tokens(const ClusterDef& cluster) const;
};

Lexicon from_json(std::string_view json_text);
/// Canonical form: clusters in order, keywords sorted, two-space indentation.
std::string to_json(const Lexicon& lex);

Lexicon load_lexicon(const std::filesystem::path& path);
void save_lexicon(const Lexicon& lex, const std::filesystem::path& path);

/// Returns a new lexicon (version + 1) with `add` inserted into and `remove`
/// erased from the named cluster. Removing every keyword is rejected.
Lexicon edit_cluster(const Lexicon& lex, std::string_view cluster, const std::vector<std::string>& add,
                     const std::vector<std::string>& remove);

/// The seven building-and-sustainability clusters with their example keywords.
Lexicon building_sustainability_lexicon();

}  // namespace semnet::lexicon
