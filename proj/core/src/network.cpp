#include "semnet/network.hpp"

#include "semnet/error.hpp"
#include "semnet/io.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace semnet::network {

WordNetwork::WordNetwork(std::string period, std::vector<NodeInfo> nodes, std::vector<Edge> edges)
    : period_(std::move(period)), nodes_(std::move(nodes)) {
    const auto n = nodes_.size();
    for (NodeId i = 0; i < n; ++i) {
        if (!index_.emplace(nodes_[i].label, i).second) {
            throw std::invalid_argument("duplicate node label: " + nodes_[i].label);
        }
    }
    for (auto& e : edges) {
        if (e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
        if (e.u == e.v) throw std::invalid_argument("self-loop on node " + nodes_[e.u].label);
        if (e.w < 1) throw std::invalid_argument("edge weight must be >= 1");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (const auto& e : edges) {
        if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
            edges_.back().w += e.w;
        } else {
            edges_.push_back(e);
        }
    }

    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : edges_) {
        ++degree[e.u];
        ++degree[e.v];
        total_weight_ += e.w;
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
    adjacency_.resize(offsets_[n]);
    adjacency_weights_.resize(offsets_[n]);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Edges are sorted by (u, v): filling smaller neighbors first, then larger
    // ones, leaves every neighbor list sorted.
    for (const auto& e : edges_) {
        adjacency_[cursor[e.v]] = e.u;
        adjacency_weights_[cursor[e.v]++] = e.w;
    }
    for (const auto& e : edges_) {
        adjacency_[cursor[e.u]] = e.v;
        adjacency_weights_[cursor[e.u]++] = e.w;
    }
}

std::optional<NodeId> WordNetwork::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeId WordNetwork::id_of(std::string_view label) const {
    auto id = find(label);
    if (!id) throw NotFoundError("unknown node: " + std::string(label));
    return *id;
}

std::span<const NodeId> WordNetwork::neighbors(NodeId id) const {
    return {adjacency_.data() + offsets_.at(id), offsets_.at(id + 1) - offsets_.at(id)};
}

std::span<const Weight> WordNetwork::neighbor_weights(NodeId id) const {
    return {adjacency_weights_.data() + offsets_.at(id), offsets_.at(id + 1) - offsets_.at(id)};
}

Weight WordNetwork::weighted_degree(NodeId id) const {
    auto w = neighbor_weights(id);
    return std::accumulate(w.begin(), w.end(), Weight{0});
}

Weight WordNetwork::weight(NodeId a, NodeId b) const {
    auto nb = neighbors(a);
    auto it = std::lower_bound(nb.begin(), nb.end(), b);
    if (it == nb.end() || *it != b) return 0;
    return neighbor_weights(a)[static_cast<std::size_t>(it - nb.begin())];
}

Granularity parse_granularity(std::string_view name) {
    if (name == "yearly") return Granularity::Yearly;
    if (name == "range-list") return Granularity::RangeList;
    throw ParseError("unknown granularity: " + std::string(name));
}

std::string_view granularity_name(Granularity g) { return g == Granularity::Yearly ? "yearly" : "range-list"; }

CoocCounting parse_counting(std::string_view name) {
    if (name == "per-window") return CoocCounting::PerWindow;
    if (name == "per-document") return CoocCounting::PerDocument;
    throw ParseError("unknown co-occurrence counting: " + std::string(name));
}

std::string_view counting_name(CoocCounting c) { return c == CoocCounting::PerWindow ? "per-window" : "per-document"; }

void SliceSpec::validate() const {
    if (window < 1) throw ParseError("window must be >= 1");
    if (min_edge_weight < 1) throw ParseError("min_edge_weight must be >= 1");
    if (min_node_freq < 1) throw ParseError("min_node_freq must be >= 1");
    if (granularity == Granularity::RangeList) {
        if (ranges.empty()) throw ParseError("range-list granularity needs at least one range");
        auto sorted = ranges;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i].first > sorted[i].second) throw ParseError("inverted period range");
            if (i && sorted[i].first <= sorted[i - 1].second) throw ParseError("overlapping period ranges");
        }
    }
}

std::string Period::label() const {
    return first == last ? std::to_string(first) : std::to_string(first) + "-" + std::to_string(last);
}

std::map<Period, corpus::DocumentSet> slice_by_period(const corpus::DocumentSet& docs, const SliceSpec& spec) {
    spec.validate();
    std::map<Period, std::vector<corpus::Document>> buckets;
    if (spec.granularity == Granularity::RangeList) {
        for (const auto& [lo, hi] : spec.ranges) buckets[{lo, hi}];
    }
    for (const auto& d : docs) {
        if (spec.granularity == Granularity::Yearly) {
            buckets[{d.year, d.year}].push_back(d);
            continue;
        }
        for (auto& [period, bucket] : buckets) {
            if (d.year >= period.first && d.year <= period.last) {
                bucket.push_back(d);
                break;
            }
        }
    }
    std::map<Period, corpus::DocumentSet> out;
    for (auto& [period, bucket] : buckets) {
        auto provenance = docs.provenance();
        provenance.push_back("slice " + period.label());
        out.emplace(period, corpus::DocumentSet(std::move(bucket), std::move(provenance)));
    }
    return out;
}

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

WordNetwork build_cooccurrence(std::span<const text::TokenSeq> seqs, const SliceSpec& spec, std::string period) {
    spec.validate();
    // Vocabulary in lexicographic order makes node ids independent of document order.
    std::vector<std::string> vocab;
    {
        std::unordered_set<std::string> seen;
        for (const auto& s : seqs) {
            for (const auto& t : s.tokens) {
                if (seen.insert(t).second) vocab.push_back(t);
            }
        }
        std::sort(vocab.begin(), vocab.end());
    }
    std::unordered_map<std::string, std::uint32_t> vid;
    vid.reserve(vocab.size());
    for (std::uint32_t i = 0; i < vocab.size(); ++i) vid.emplace(vocab[i], i);

    std::vector<std::int64_t> freq(vocab.size(), 0);
    std::vector<std::vector<std::uint32_t>> postings(vocab.size());
    std::unordered_map<std::uint64_t, Weight> counts;
    std::vector<std::uint32_t> ids;
    std::unordered_set<std::uint64_t> doc_pairs;
    const auto window = static_cast<std::size_t>(spec.window);

    for (std::uint32_t d = 0; d < seqs.size(); ++d) {
        const auto& tokens = seqs[d].tokens;
        ids.clear();
        for (const auto& t : tokens) ids.push_back(vid.at(t));
        for (auto id : ids) {
            ++freq[id];
            if (postings[id].empty() || postings[id].back() != d) postings[id].push_back(d);
        }
        doc_pairs.clear();
        for (std::size_t p = 0; p < ids.size(); ++p) {
            const auto last = std::min(ids.size() - 1, p + window);
            for (std::size_t q = p + 1; q <= last; ++q) {
                if (ids[p] == ids[q]) continue;
                const auto key = pair_key(ids[p], ids[q]);
                if (spec.counting == CoocCounting::PerDocument && !doc_pairs.insert(key).second) continue;
                ++counts[key];
            }
        }
    }

    std::vector<std::int64_t> remap(vocab.size(), -1);
    std::vector<NodeInfo> nodes;
    for (std::uint32_t i = 0; i < vocab.size(); ++i) {
        if (freq[i] < spec.min_node_freq) continue;
        remap[i] = static_cast<std::int64_t>(nodes.size());
        nodes.push_back(NodeInfo{vocab[i], freq[i], std::move(postings[i])});
    }
    std::vector<Edge> edges;
    edges.reserve(counts.size());
    for (const auto& [key, w] : counts) {
        if (w < spec.min_edge_weight) continue;
        const auto a = remap[key >> 32];
        const auto b = remap[key & 0xFFFFFFFFu];
        if (a < 0 || b < 0) continue;
        edges.push_back(Edge{static_cast<NodeId>(a), static_cast<NodeId>(b), w});
    }
    return WordNetwork(std::move(period), std::move(nodes), std::move(edges));
}

WordNetwork contract_clusters(const WordNetwork& net, const lexicon::Lexicon& lex) {
    std::unordered_map<std::string, std::string> owner;  // member token -> cluster name
    std::unordered_set<std::string> cluster_names;
    for (const auto& c : lex.clusters) {
        if (!cluster_names.insert(c.name).second) throw ParseError("duplicate cluster name: " + c.name);
        for (const auto& token : lex.member_tokens(c)) {
            auto [it, inserted] = owner.emplace(token, c.name);
            if (!inserted && it->second != c.name) {
                throw CollisionError(token, "keyword '" + token + "' claimed by clusters '" + it->second + "' and '" +
                                                c.name + "'");
            }
        }
    }

    // Surviving labels: non-member words plus one node per cluster.
    std::map<std::string, NodeInfo> merged;
    for (const auto& c : lex.clusters) merged[c.name] = NodeInfo{c.name, 0, {}};
    std::vector<std::string> target(net.node_count());
    for (NodeId i = 0; i < net.node_count(); ++i) {
        const auto& info = net.node(i);
        auto it = owner.find(info.label);
        if (it == owner.end()) {
            if (cluster_names.count(info.label)) {
                throw CollisionError(info.label, "cluster name '" + info.label + "' clashes with a network word");
            }
            target[i] = info.label;
            merged[info.label] = info;
            continue;
        }
        target[i] = it->second;
        auto& node = merged[it->second];
        node.frequency += info.frequency;
        std::vector<std::uint32_t> docs;
        std::set_union(node.documents.begin(), node.documents.end(), info.documents.begin(), info.documents.end(),
                       std::back_inserter(docs));
        node.documents = std::move(docs);
    }

    std::unordered_map<std::string, NodeId> new_id;
    std::vector<NodeInfo> nodes;
    nodes.reserve(merged.size());
    for (auto& [label, info] : merged) {
        new_id.emplace(label, static_cast<NodeId>(nodes.size()));
        nodes.push_back(std::move(info));
    }
    std::vector<NodeId> map_to(net.node_count());
    for (NodeId i = 0; i < net.node_count(); ++i) map_to[i] = new_id.at(target[i]);

    std::vector<Edge> edges;
    edges.reserve(net.edge_count());
    for (const auto& e : net.edges()) {
        const auto a = map_to[e.u];
        const auto b = map_to[e.v];
        if (a == b) continue;  // internal to a cluster
        edges.push_back(Edge{a, b, e.w});
    }
    return WordNetwork(net.period(), std::move(nodes), std::move(edges));
}

std::string edges_to_csv(const WordNetwork& net) {
    std::string out = "source,target,weight\n";
    for (const auto& e : net.edges()) {
        out += io::csv_line({net.label(e.u), net.label(e.v), std::to_string(e.w)});
    }
    return out;
}

std::string nodes_to_csv(const WordNetwork& net) {
    std::string out = "label,frequency\n";
    for (const auto& n : net.nodes()) out += io::csv_line({n.label, std::to_string(n.frequency)});
    return out;
}

}  // namespace semnet::network
