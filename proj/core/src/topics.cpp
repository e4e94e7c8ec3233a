#include "semnet/topics.hpp"

#include "semnet/error.hpp"
#include "semnet/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

namespace semnet::topics {

using network::NodeId;
using network::WordNetwork;

TfidfAggregation parse_aggregation(std::string_view name) {
    if (name == "max") return TfidfAggregation::Max;
    if (name == "sum") return TfidfAggregation::Sum;
    if (name == "mean") return TfidfAggregation::Mean;
    throw ParseError("unknown tf-idf aggregation: " + std::string(name));
}

std::string_view aggregation_name(TfidfAggregation a) {
    switch (a) {
        case TfidfAggregation::Max: return "max";
        case TfidfAggregation::Sum: return "sum";
        case TfidfAggregation::Mean: return "mean";
    }
    return "";
}

std::vector<TermScore> tfidf_keywords(std::span<const text::TokenSeq> docs, std::size_t top_k,
                                      TfidfAggregation aggregation) {
    if (docs.empty() || top_k == 0) return {};
    std::vector<std::unordered_map<std::string, std::int64_t>> tf(docs.size());
    std::map<std::string, std::int64_t> df;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& t : docs[d].tokens) ++tf[d][t];
        for (const auto& [t, c] : tf[d]) ++df[t];
    }
    const double n_docs = static_cast<double>(docs.size());
    std::map<std::string, double> score;
    for (const auto& [t, f] : df) score[t] = 0.0;
    for (const auto& counts : tf) {
        for (const auto& [t, c] : counts) {
            const double idf = std::log10(n_docs / static_cast<double>(df[t]));
            const double v = static_cast<double>(c) * idf;
            auto& s = score[t];
            s = aggregation == TfidfAggregation::Max ? std::max(s, v) : s + v;
        }
    }
    std::vector<TermScore> out;
    out.reserve(score.size());
    for (const auto& [t, s] : score) {
        out.push_back({t, aggregation == TfidfAggregation::Mean ? s / n_docs : s, df[t]});
    }
    std::sort(out.begin(), out.end(), [](const TermScore& a, const TermScore& b) {
        return a.score != b.score ? a.score > b.score : a.term < b.term;
    });
    if (out.size() > top_k) out.resize(top_k);
    return out;
}

std::string term_scores_to_csv(const std::vector<TermScore>& terms) {
    std::string out = "term,score,doc_freq\n";
    for (const auto& t : terms) out += io::csv_line({t.term, io::format_double(t.score), std::to_string(t.doc_freq)});
    return out;
}

double modularity(const WordNetwork& net, std::span<const std::uint32_t> community, double resolution) {
    const double m = static_cast<double>(net.total_weight());
    if (m == 0.0) return 0.0;
    std::map<std::uint32_t, double> internal;
    std::map<std::uint32_t, double> total_degree;
    for (NodeId i = 0; i < net.node_count(); ++i) {
        total_degree[community[i]] += static_cast<double>(net.weighted_degree(i));
    }
    for (const auto& e : net.edges()) {
        if (community[e.u] == community[e.v]) internal[community[e.u]] += static_cast<double>(e.w);
    }
    double q = 0.0;
    for (const auto& [c, k] : total_degree) {
        const double frac = k / (2.0 * m);
        q += internal[c] / m - resolution * frac * frac;
    }
    return q;
}

namespace {

// Graph of one Louvain level. Internal weight of merged nodes is kept as a
// self-loop (undirected units) outside the adjacency lists.
struct LevelGraph {
    std::size_t n = 0;
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> adjacency;
    std::vector<double> weights;
    std::vector<double> loop;
    std::vector<double> degree;  // weighted degree, self-loops counted twice
};

LevelGraph from_network(const WordNetwork& net) {
    LevelGraph g;
    g.n = net.node_count();
    g.offsets.assign(g.n + 1, 0);
    g.loop.assign(g.n, 0.0);
    g.degree.assign(g.n, 0.0);
    for (NodeId i = 0; i < g.n; ++i) {
        g.offsets[i + 1] = g.offsets[i] + net.degree(i);
        auto nb = net.neighbors(i);
        auto wt = net.neighbor_weights(i);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            g.adjacency.push_back(nb[k]);
            g.weights.push_back(static_cast<double>(wt[k]));
            g.degree[i] += static_cast<double>(wt[k]);
        }
    }
    return g;
}

// Fisher-Yates with an explicit engine so the order is identical on every standard library.
void shuffle(std::vector<std::uint32_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

bool local_move(const LevelGraph& g, double m, double resolution, std::mt19937_64& rng,
                std::vector<std::uint32_t>& comm) {
    std::vector<double> tot(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) tot[comm[i]] += g.degree[i];
    std::vector<double> link(g.n, -1.0);
    std::vector<std::uint32_t> touched;
    std::vector<std::uint32_t> order(g.n);
    std::iota(order.begin(), order.end(), 0u);
    shuffle(order, rng);

    const double two_m = 2.0 * m;
    bool any_move = false;
    constexpr int kMaxPasses = 1000;
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        bool moved = false;
        for (auto i : order) {
            const auto home = comm[i];
            const double ki = g.degree[i];
            tot[home] -= ki;
            touched.clear();
            link[home] = 0.0;
            touched.push_back(home);
            for (auto k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
                const auto c = comm[g.adjacency[k]];
                if (link[c] < 0.0) {
                    link[c] = 0.0;
                    touched.push_back(c);
                }
                link[c] += g.weights[k];
            }
            auto best = home;
            double best_gain = link[home] - resolution * tot[home] * ki / two_m;
            for (auto c : touched) {
                const double gain = link[c] - resolution * tot[c] * ki / two_m;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best = c;
                }
            }
            for (auto c : touched) link[c] = -1.0;
            comm[i] = best;
            tot[best] += ki;
            if (best != home) moved = true;
        }
        if (!moved) break;
        any_move = true;
    }
    return any_move;
}

// Renumbers communities densely in order of first appearance.
std::size_t renumber(std::vector<std::uint32_t>& comm) {
    std::unordered_map<std::uint32_t, std::uint32_t> ids;
    for (auto& c : comm) {
        auto [it, inserted] = ids.emplace(c, static_cast<std::uint32_t>(ids.size()));
        c = it->second;
    }
    return ids.size();
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::uint32_t>& comm, std::size_t count) {
    LevelGraph out;
    out.n = count;
    out.loop.assign(count, 0.0);
    out.degree.assign(count, 0.0);
    std::vector<std::map<std::uint32_t, double>> links(count);
    for (std::size_t i = 0; i < g.n; ++i) {
        const auto ci = comm[i];
        out.loop[ci] += g.loop[i];
        out.degree[ci] += g.degree[i];
        for (auto k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
            const auto j = g.adjacency[k];
            if (j < i) continue;  // each undirected edge once
            const auto cj = comm[j];
            if (ci == cj) {
                out.loop[ci] += g.weights[k];
            } else {
                links[ci][cj] += g.weights[k];
                links[cj][ci] += g.weights[k];
            }
        }
    }
    out.offsets.assign(count + 1, 0);
    for (std::size_t c = 0; c < count; ++c) {
        out.offsets[c + 1] = out.offsets[c] + links[c].size();
        for (const auto& [d, w] : links[c]) {
            out.adjacency.push_back(d);
            out.weights.push_back(w);
        }
    }
    return out;
}

}  // namespace

TopicPartition louvain(const WordNetwork& net, std::uint64_t seed, double resolution) {
    if (!(resolution > 0.0)) throw ParseError("resolution must be positive");
    TopicPartition part;
    const auto n = net.node_count();
    part.community.resize(n);
    std::iota(part.community.begin(), part.community.end(), 0u);
    const double m = static_cast<double>(net.total_weight());
    if (n == 0 || m == 0.0) {
        part.community_count = n;
        part.modularity = 0.0;
        part.ranked_words.resize(n);
        return part;
    }

    std::mt19937_64 rng(seed);
    LevelGraph g = from_network(net);
    std::vector<std::uint32_t> membership(n);  // original node -> level node
    std::iota(membership.begin(), membership.end(), 0u);
    while (true) {
        std::vector<std::uint32_t> comm(g.n);
        std::iota(comm.begin(), comm.end(), 0u);
        if (!local_move(g, m, resolution, rng, comm)) break;
        const auto count = renumber(comm);
        for (auto& x : membership) x = comm[x];
        if (count == g.n) break;
        g = aggregate(g, comm, count);
    }

    // Canonical ids: ordered by smallest member node id.
    part.community = membership;
    part.community_count = renumber(part.community);
    part.modularity = modularity(net, part.community, resolution);
    part.ranked_words.resize(part.community_count);
    return part;
}

RankedWords rank_topic_words(const WordNetwork& net, const TopicPartition& part, std::uint32_t community,
                             std::size_t top_k, double beta) {
    if (community >= part.community_count) throw NotFoundError("unknown community: " + std::to_string(community));
    RankedWords out;
    for (NodeId i = 0; i < net.node_count(); ++i) {
        if (part.community[i] != community) continue;
        double total = 0.0;
        double internal = 0.0;
        auto nb = net.neighbors(i);
        auto wt = net.neighbor_weights(i);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            total += static_cast<double>(wt[k]);
            if (part.community[nb[k]] == community) internal += static_cast<double>(wt[k]);
        }
        const double score = total == 0.0 ? 0.0 : total * std::pow(internal / total, beta);
        out.emplace_back(net.label(i), score);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (out.size() > top_k) out.resize(top_k);
    return out;
}

void rank_all(const WordNetwork& net, TopicPartition& part, std::size_t top_k, double beta) {
    part.ranked_words.assign(part.community_count, {});
    for (std::uint32_t c = 0; c < part.community_count; ++c) {
        part.ranked_words[c] = rank_topic_words(net, part, c, top_k, beta);
    }
}

std::string partition_to_csv(const WordNetwork& net, const TopicPartition& part) {
    std::string out = "node,community\n";
    for (NodeId i = 0; i < net.node_count(); ++i) {
        out += io::csv_line({net.label(i), std::to_string(part.community[i])});
    }
    return out;
}

std::string topics_to_json(const WordNetwork& net, const TopicPartition& part) {
    std::vector<std::size_t> sizes(part.community_count, 0);
    for (NodeId i = 0; i < net.node_count(); ++i) ++sizes[part.community[i]];
    nlohmann::ordered_json j;
    j["period"] = net.period();
    j["modularity"] = part.modularity;
    j["communities"] = nlohmann::ordered_json::array();
    for (std::uint32_t c = 0; c < part.community_count; ++c) {
        nlohmann::ordered_json cj;
        cj["id"] = c;
        cj["size"] = sizes[c];
        cj["words"] = nlohmann::ordered_json::array();
        if (c < part.ranked_words.size()) {
            for (const auto& [w, s] : part.ranked_words[c]) cj["words"].push_back({{"word", w}, {"score", s}});
        }
        j["communities"].push_back(std::move(cj));
    }
    return j.dump(2) + "\n";
}

}  // namespace semnet::topics
