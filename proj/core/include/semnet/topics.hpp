#pragma once

#include "semnet/network.hpp"
#include "semnet/textprep.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semnet::topics {

struct TermScore {
    std::string term;
    double score = 0.0;
    std::int64_t doc_freq = 0;
};

/// How per-document tf-idf values are combined into one term score.
enum class TfidfAggregation { Max, Sum, Mean };

TfidfAggregation parse_aggregation(std::string_view name);
std::string_view aggregation_name(TfidfAggregation a);

/// tf = raw count in the document, idf = log10(N / df). Highest scores first,
/// ties broken lexicographically. Mean divides by the number of documents N.
std::vector<TermScore> tfidf_keywords(std::span<const text::TokenSeq> docs, std::size_t top_k,
                                      TfidfAggregation aggregation = TfidfAggregation::Max);

std::string term_scores_to_csv(const std::vector<TermScore>& terms);

using RankedWords = std::vector<std::pair<std::string, double>>;

struct TopicPartition {
    std::vector<std::uint32_t> community;  ///< indexed by node id
    std::size_t community_count = 0;
    double modularity = 0.0;
    std::vector<RankedWords> ranked_words;  ///< per community, filled by rank_all()
};

/// Weighted modularity with resolution:
/// Q = sum_c [ W_in(c) / m - resolution * (K(c) / 2m)^2 ].
/// Defined as 0 for a network without edges.
double modularity(const network::WordNetwork& net, std::span<const std::uint32_t> community, double resolution = 1.0);

/// Louvain: repeated local-move and aggregation phases until no node moves.
/// Node visit order is a shuffle driven by `seed`. Community ids are numbered
/// by the smallest node id they contain.
TopicPartition louvain(const network::WordNetwork& net, std::uint64_t seed, double resolution = 1.0);

/// score = weighted_degree * (internal_weight / weighted_degree)^beta, where
/// internal_weight sums edges to same-community neighbors. Ties lexicographic.
RankedWords rank_topic_words(const network::WordNetwork& net, const TopicPartition& part, std::uint32_t community,
                             std::size_t top_k, double beta = 1.0);

void rank_all(const network::WordNetwork& net, TopicPartition& part, std::size_t top_k, double beta = 1.0);

std::string partition_to_csv(const network::WordNetwork& net, const TopicPartition& part);
/// {"modularity": q, "communities": [{"id", "size", "words": [{"word", "score"}]}]}
std::string topics_to_json(const network::WordNetwork& net, const TopicPartition& part);

}  // namespace semnet::topics
