#pragma once

#include "semnet/corpus.hpp"
#include "semnet/lexicon.hpp"
#include "semnet/textprep.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace semnet::network {

using NodeId = std::uint32_t;
using Weight = std::int64_t;

struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    Weight w = 0;

    bool operator==(const Edge&) const = default;
};

struct NodeInfo {
    std::string label;
    std::int64_t frequency = 0;          ///< token occurrences in the slice
    std::vector<std::uint32_t> documents;  ///< sorted ordinals of documents containing the node
};

/// Weighted undirected word co-occurrence graph for one time slice.
/// Immutable; edges are stored once with u < v and mirrored in a CSR adjacency.
class WordNetwork {
public:
    WordNetwork() = default;
    /// Parallel edges are summed. Throws std::invalid_argument on self-loops,
    /// non-positive weights, duplicate labels or out-of-range endpoints.
    WordNetwork(std::string period, std::vector<NodeInfo> nodes, std::vector<Edge> edges);

    const std::string& period() const noexcept { return period_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const NodeInfo& node(NodeId id) const { return nodes_.at(id); }
    const std::vector<NodeInfo>& nodes() const noexcept { return nodes_; }
    const std::string& label(NodeId id) const { return nodes_.at(id).label; }
    std::optional<NodeId> find(std::string_view label) const;
    /// Throws NotFoundError for unknown labels.
    NodeId id_of(std::string_view label) const;

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::span<const NodeId> neighbors(NodeId id) const;
    std::span<const Weight> neighbor_weights(NodeId id) const;
    std::size_t degree(NodeId id) const { return neighbors(id).size(); }
    Weight weighted_degree(NodeId id) const;
    Weight total_weight() const noexcept { return total_weight_; }
    /// 0 when the nodes are not adjacent.
    Weight weight(NodeId a, NodeId b) const;

private:
    std::string period_;
    std::vector<NodeInfo> nodes_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> adjacency_;
    std::vector<Weight> adjacency_weights_;
    Weight total_weight_ = 0;
};

enum class Granularity { Yearly, RangeList };
/// How repeated co-occurrences of a pair within one document are counted.
enum class CoocCounting { PerWindow, PerDocument };

Granularity parse_granularity(std::string_view name);
std::string_view granularity_name(Granularity g);
CoocCounting parse_counting(std::string_view name);
std::string_view counting_name(CoocCounting c);

struct SliceSpec {
    Granularity granularity = Granularity::Yearly;
    std::vector<std::pair<int, int>> ranges;  ///< inclusive, used by RangeList
    int window = 5;
    Weight min_edge_weight = 1;
    std::int64_t min_node_freq = 1;
    CoocCounting counting = CoocCounting::PerWindow;

    void validate() const;
};

/// Inclusive year span of a time slice. Labelled "2020" or "1996-2006".
struct Period {
    int first = 0;
    int last = 0;

    std::string label() const;
    auto operator<=>(const Period&) const = default;
};

/// Yearly: one slice per year that has documents. RangeList: one slice per
/// configured range (possibly empty); documents outside every range are dropped.
std::map<Period, corpus::DocumentSet> slice_by_period(const corpus::DocumentSet& docs, const SliceSpec& spec);

/// Counts every pair of distinct tokens at distance 1..window inside each
/// sequence, then prunes nodes below min_node_freq and edges below
/// min_edge_weight. Node ids follow lexicographic label order.
WordNetwork build_cooccurrence(std::span<const text::TokenSeq> seqs, const SliceSpec& spec, std::string period = {});

/// Merges each cluster's member tokens into one node labelled by the cluster
/// name. Parallel edges are summed, internal edges dropped. Clusters with no
/// members present become isolated zero-frequency nodes.
WordNetwork contract_clusters(const WordNetwork& net, const lexicon::Lexicon& lex);

std::string edges_to_csv(const WordNetwork& net);
std::string nodes_to_csv(const WordNetwork& net);

}  // namespace semnet::network
