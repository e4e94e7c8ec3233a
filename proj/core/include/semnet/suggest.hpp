#pragma once

#include "semnet/lexicon.hpp"
#include "semnet/network.hpp"
#include "semnet/textprep.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace semnet::lexicon {

enum class Relation { Synonym, Hyponym, Hypernym, Related };

Relation parse_relation(std::string_view name);
std::string_view relation_name(Relation r);

struct Suggestion {
    std::string term;
    Relation relation = Relation::Related;
    double score = 0.0;
    std::string provider;
};

/// Source of candidate terms for lexicon curation. Providers are interchangeable.
class SuggestionProvider {
public:
    virtual ~SuggestionProvider() = default;
    virtual std::string name() const = 0;
    /// Best-first candidates; may return more than `k`.
    virtual std::vector<Suggestion> candidates(std::string_view term, std::size_t k) const = 0;
};

/// Ranks words co-occurring with the query by PMI over the co-occurrence network:
/// log2(4 W w_ab / (s_a s_b)), W total edge weight, s weighted degree.
class CooccurrencePmiProvider final : public SuggestionProvider {
public:
    CooccurrencePmiProvider(std::shared_ptr<const network::WordNetwork> net, text::PrepConfig prep);

    std::string name() const override { return "cooccurrence-pmi"; }
    std::vector<Suggestion> candidates(std::string_view term, std::size_t k) const override;

private:
    std::shared_ptr<const network::WordNetwork> net_;
    text::PrepConfig prep_;
};

/// Replays recorded responses of an external lexical database / embedding service.
class FixtureProvider final : public SuggestionProvider {
public:
    /// {"responses": {"home": [{"term", "relation", "score"}]}}
    explicit FixtureProvider(std::string_view json_text);
    static FixtureProvider builtin();

    std::string name() const override { return "external"; }
    std::vector<Suggestion> candidates(std::string_view term, std::size_t k) const override;

private:
    std::map<std::string, std::vector<Suggestion>> responses_;
};

/// Up to k suggestions, dropping any term already claimed by a cluster of `lex`.
std::vector<Suggestion> suggest_terms(std::string_view term, const SuggestionProvider& provider, std::size_t k,
                                      const Lexicon* lex = nullptr);

std::string suggestions_to_json(const std::vector<Suggestion>& suggestions);

}  // namespace semnet::lexicon
