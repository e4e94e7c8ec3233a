#include "semnet/suggest.hpp"

#include "semnet/error.hpp"
#include "semnet/resources.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace semnet::lexicon {

Relation parse_relation(std::string_view name) {
    if (name == "synonym") return Relation::Synonym;
    if (name == "hyponym") return Relation::Hyponym;
    if (name == "hypernym") return Relation::Hypernym;
    if (name == "related") return Relation::Related;
    throw ParseError("unknown relation: " + std::string(name));
}

std::string_view relation_name(Relation r) {
    switch (r) {
        case Relation::Synonym: return "synonym";
        case Relation::Hyponym: return "hyponym";
        case Relation::Hypernym: return "hypernym";
        case Relation::Related: return "related";
    }
    return "";
}

CooccurrencePmiProvider::CooccurrencePmiProvider(std::shared_ptr<const network::WordNetwork> net,
                                                 text::PrepConfig prep)
    : net_(std::move(net)), prep_(std::move(prep)) {}

std::vector<Suggestion> CooccurrencePmiProvider::candidates(std::string_view term, std::size_t k) const {
    // Lexicon phrases live in the network unstemmed; other words as stems.
    auto id = net_->find(text::phrase_token(term));
    if (!id) {
        auto seq = text::tokenize_normalize(term, prep_, text::PhraseMatcher{});
        if (seq.tokens.size() == 1) id = net_->find(seq.tokens.front());
    }
    if (!id) return {};

    const double total = static_cast<double>(net_->total_weight());
    const double s_a = static_cast<double>(net_->weighted_degree(*id));
    std::vector<Suggestion> out;
    auto nb = net_->neighbors(*id);
    auto wt = net_->neighbor_weights(*id);
    for (std::size_t i = 0; i < nb.size(); ++i) {
        const double s_b = static_cast<double>(net_->weighted_degree(nb[i]));
        const double pmi = std::log2(4.0 * total * static_cast<double>(wt[i]) / (s_a * s_b));
        out.push_back({net_->label(nb[i]), Relation::Related, pmi, name()});
    }
    std::sort(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) {
        return a.score != b.score ? a.score > b.score : a.term < b.term;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

FixtureProvider::FixtureProvider(std::string_view json_text) {
    try {
        auto j = nlohmann::json::parse(json_text);
        for (const auto& [term, list] : j.at("responses").items()) {
            auto& bucket = responses_[term];
            for (const auto& s : list) {
                Suggestion sg;
                sg.term = s.at("term").get<std::string>();
                sg.relation = parse_relation(s.at("relation").get<std::string>());
                sg.score = s.value("score", 0.0);
                if (!std::isfinite(sg.score)) throw ParseError("suggestion score must be finite");
                sg.provider = "external";
                bucket.push_back(std::move(sg));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid provider fixture: ") + e.what());
    }
}

FixtureProvider FixtureProvider::builtin() { return FixtureProvider(resources::lexical_fixture()); }

std::vector<Suggestion> FixtureProvider::candidates(std::string_view term, std::size_t k) const {
    auto it = responses_.find(std::string(term));
    if (it == responses_.end()) return {};
    std::vector<Suggestion> out(it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(
                                                                              std::min(k, it->second.size())));
    return out;
}

std::vector<Suggestion> suggest_terms(std::string_view term, const SuggestionProvider& provider, std::size_t k,
                                      const Lexicon* lex) {
    if (k == 0) throw ParseError("k must be >= 1");
    std::unordered_set<std::string> claimed;
    if (lex) {
        for (const auto& c : lex->clusters) {
            for (auto& t : lex->member_tokens(c)) claimed.insert(std::move(t));
        }
    }
    std::vector<Suggestion> out;
    for (auto& s : provider.candidates(term, std::numeric_limits<std::size_t>::max())) {
        if (claimed.count(text::phrase_token(s.term))) continue;
        out.push_back(std::move(s));
        if (out.size() == k) break;
    }
    return out;
}

std::string suggestions_to_json(const std::vector<Suggestion>& suggestions) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& s : suggestions) {
        j.push_back({{"term", s.term},
                     {"relation", std::string(relation_name(s.relation))},
                     {"score", s.score},
                     {"provider", s.provider}});
    }
    return j.dump(2) + "\n";
}

}  // namespace semnet::lexicon
