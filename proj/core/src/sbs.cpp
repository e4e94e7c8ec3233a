#include "semnet/sbs.hpp"

#include "semnet/error.hpp"
#include "semnet/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <queue>
#include <thread>

namespace semnet::sbs {

using network::NodeId;
using network::WordNetwork;

WeightTransform parse_transform(std::string_view name) {
    if (name == "inverse") return WeightTransform::Inverse;
    if (name == "unit") return WeightTransform::Unit;
    throw ParseError("unknown weight transform: " + std::string(name));
}

std::string_view transform_name(WeightTransform t) { return t == WeightTransform::Inverse ? "inverse" : "unit"; }

Population parse_population(std::string_view name) {
    if (name == "all-nodes") return Population::AllNodes;
    if (name == "targets-only") return Population::TargetsOnly;
    throw ParseError("unknown population: " + std::string(name));
}

std::string_view population_name(Population p) { return p == Population::AllNodes ? "all-nodes" : "targets-only"; }

PrevalenceMode parse_prevalence_mode(std::string_view name) {
    if (name == "tokens") return PrevalenceMode::Tokens;
    if (name == "documents") return PrevalenceMode::Documents;
    throw ParseError("unknown prevalence mode: " + std::string(name));
}

std::string_view prevalence_mode_name(PrevalenceMode m) { return m == PrevalenceMode::Tokens ? "tokens" : "documents"; }

namespace {

double node_prevalence(const WordNetwork& net, NodeId id, PrevalenceMode mode) {
    const auto& info = net.node(id);
    return mode == PrevalenceMode::Tokens ? static_cast<double>(info.frequency)
                                          : static_cast<double>(info.documents.size());
}

// Per-thread scratch space for one single-source shortest-path pass.
struct BrandesWorkspace {
    std::vector<double> dist;
    std::vector<double> sigma;
    std::vector<double> delta;
    std::vector<NodeId> order;  // nodes in non-decreasing distance
    std::vector<std::uint32_t> pred_count;
    std::vector<NodeId> preds;  // CSR slots, capacity = degree
    std::vector<char> settled;

    explicit BrandesWorkspace(std::size_t n, std::size_t slots)
        : dist(n), sigma(n), delta(n), pred_count(n), preds(slots), settled(n) {}
};

class Brandes {
public:
    Brandes(const WordNetwork& net, WeightTransform transform) : net_(net), transform_(transform) {
        const auto n = net.node_count();
        slot_.assign(n + 1, 0);
        for (NodeId v = 0; v < n; ++v) slot_[v + 1] = slot_[v] + net.degree(v);
        if (transform == WeightTransform::Inverse) {
            lengths_.resize(slot_[n]);
            for (NodeId v = 0; v < n; ++v) {
                auto w = net.neighbor_weights(v);
                for (std::size_t k = 0; k < w.size(); ++k) lengths_[slot_[v] + k] = 1.0 / static_cast<double>(w[k]);
            }
        }
    }

    std::size_t slots() const { return slot_.back(); }

    // Adds the dependency of every node on `source` into `acc`.
    void accumulate(NodeId source, BrandesWorkspace& ws, std::vector<double>& acc) const {
        if (transform_ == WeightTransform::Unit) {
            bfs(source, ws);
        } else {
            dijkstra(source, ws);
        }
        for (auto it = ws.order.rbegin(); it != ws.order.rend(); ++it) {
            const NodeId w = *it;
            const double coeff = (1.0 + ws.delta[w]) / ws.sigma[w];
            const auto base = slot_[w];
            for (std::uint32_t k = 0; k < ws.pred_count[w]; ++k) {
                const NodeId v = ws.preds[base + k];
                ws.delta[v] += ws.sigma[v] * coeff;
            }
            if (w != source) acc[w] += ws.delta[w];
        }
    }

private:
    const WordNetwork& net_;
    WeightTransform transform_;
    std::vector<std::size_t> slot_;
    std::vector<double> lengths_;

    void reset(NodeId source, BrandesWorkspace& ws) const {
        // Only nodes reached in the previous pass were touched.
        for (NodeId v : ws.order) {
            ws.dist[v] = std::numeric_limits<double>::infinity();
            ws.sigma[v] = 0.0;
            ws.delta[v] = 0.0;
            ws.pred_count[v] = 0;
            ws.settled[v] = 0;
        }
        ws.order.clear();
        ws.dist[source] = 0.0;
        ws.sigma[source] = 1.0;
    }

    void bfs(NodeId source, BrandesWorkspace& ws) const {
        reset(source, ws);
        ws.order.push_back(source);
        for (std::size_t head = 0; head < ws.order.size(); ++head) {
            const NodeId v = ws.order[head];
            const double next = ws.dist[v] + 1.0;
            for (NodeId w : net_.neighbors(v)) {
                if (ws.dist[w] == std::numeric_limits<double>::infinity()) {
                    ws.dist[w] = next;
                    ws.order.push_back(w);
                }
                if (ws.dist[w] == next) {
                    ws.sigma[w] += ws.sigma[v];
                    ws.preds[slot_[w] + ws.pred_count[w]++] = v;
                }
            }
        }
    }

    void dijkstra(NodeId source, BrandesWorkspace& ws) const {
        reset(source, ws);
        using Item = std::pair<double, NodeId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        heap.emplace(0.0, source);
        // `order` doubles as the touched list for reset().
        while (!heap.empty()) {
            const auto [d, v] = heap.top();
            heap.pop();
            if (ws.settled[v] || d > ws.dist[v]) continue;
            ws.settled[v] = 1;
            ws.order.push_back(v);
            const auto nb = net_.neighbors(v);
            const auto base = slot_[v];
            for (std::size_t k = 0; k < nb.size(); ++k) {
                const NodeId w = nb[k];
                if (ws.settled[w]) continue;
                const double nd = d + lengths_[base + k];
                const double cur = ws.dist[w];
                if (nd < cur - kDistanceTolerance) {
                    ws.dist[w] = nd;
                    ws.sigma[w] = ws.sigma[v];
                    ws.preds[slot_[w]] = v;
                    ws.pred_count[w] = 1;
                    heap.emplace(nd, w);
                } else if (std::abs(nd - cur) <= kDistanceTolerance) {
                    ws.sigma[w] += ws.sigma[v];
                    ws.preds[slot_[w] + ws.pred_count[w]++] = v;
                }
            }
        }
    }
};

}  // namespace

double prevalence(const WordNetwork& net, std::string_view target, PrevalenceMode mode) {
    return node_prevalence(net, net.id_of(target), mode);
}

std::vector<double> distinctiveness_all(const WordNetwork& net) {
    const auto n = net.node_count();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    std::vector<double> term(n, 0.0);
    const double top = static_cast<double>(n - 1);
    for (NodeId j = 0; j < n; ++j) {
        const auto g = net.degree(j);
        if (g > 0) term[j] = std::log10(top / static_cast<double>(g));
    }
    for (NodeId i = 0; i < n; ++i) {
        double sum = 0.0;
        for (NodeId j : net.neighbors(i)) sum += term[j];
        out[i] = sum;
    }
    return out;
}

double distinctiveness(const WordNetwork& net, std::string_view target) {
    const auto id = net.id_of(target);
    const auto n = net.node_count();
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (NodeId j : net.neighbors(id)) {
        sum += std::log10(static_cast<double>(n - 1) / static_cast<double>(net.degree(j)));
    }
    return sum;
}

std::vector<double> betweenness_all(const WordNetwork& net, const BetweennessOptions& opts) {
    const auto n = net.node_count();
    std::vector<double> result(n, 0.0);
    if (n < 3) return result;

    const Brandes brandes(net, opts.transform);
    constexpr std::size_t kBlocks = 64;
    const std::size_t blocks = std::min<std::size_t>(kBlocks, n);
    std::vector<std::vector<double>> partial(blocks);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        BrandesWorkspace ws(n, brandes.slots());
        std::fill(ws.dist.begin(), ws.dist.end(), std::numeric_limits<double>::infinity());
        for (std::size_t b = next++; b < blocks; b = next++) {
            std::vector<double> acc(n, 0.0);
            const auto lo = b * n / blocks;
            const auto hi = (b + 1) * n / blocks;
            for (auto s = lo; s < hi; ++s) brandes.accumulate(static_cast<NodeId>(s), ws, acc);
            partial[b] = std::move(acc);
        }
    };

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    for (const auto& acc : partial) {
        for (std::size_t v = 0; v < n; ++v) result[v] += acc[v];
    }
    // Each unordered pair was visited from both endpoints.
    for (auto& x : result) x /= 2.0;
    return result;
}

std::map<std::string, double> connectivity(const WordNetwork& net, const std::vector<std::string>& targets,
                                           const BetweennessOptions& opts) {
    std::vector<NodeId> ids;
    for (const auto& t : targets) ids.push_back(net.id_of(t));
    const auto all = betweenness_all(net, opts);
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < ids.size(); ++i) out[targets[i]] = all[ids[i]];
    return out;
}

DimensionStats dimension_stats(const std::vector<double>& values) {
    DimensionStats s;
    if (values.empty()) return s;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (*lo == *hi) {
        s.mean = *lo;
        s.std = 0.0;
        return s;
    }
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size()));
    return s;
}

const SbsEntry* SbsScores::find(std::string_view target) const {
    for (const auto& e : entries) {
        if (e.target == target) return &e;
    }
    return nullptr;
}

double SbsScores::recompute(const SbsEntry& e) const {
    return stats.prevalence.z(e.prevalence) + stats.diversity.z(e.diversity) + stats.connectivity.z(e.connectivity);
}

NodeDimensions node_dimensions(const WordNetwork& net, const SbsOptions& opts) {
    NodeDimensions d;
    d.prevalence.resize(net.node_count());
    for (NodeId i = 0; i < net.node_count(); ++i) d.prevalence[i] = node_prevalence(net, i, opts.prevalence);
    d.diversity = distinctiveness_all(net);
    d.connectivity = betweenness_all(net, opts.betweenness);
    return d;
}

SbsScores sbs_scores(const WordNetwork& net, const std::vector<std::string>& targets, const SbsOptions& opts) {
    std::vector<NodeId> ids;
    ids.reserve(targets.size());
    for (const auto& t : targets) ids.push_back(net.id_of(t));

    std::vector<NodeId> population;
    if (opts.population == Population::AllNodes) {
        population.resize(net.node_count());
        for (NodeId i = 0; i < net.node_count(); ++i) population[i] = i;
    } else {
        population = ids;
    }
    if (population.empty()) throw ParseError("empty standardization population");

    const auto dims = node_dimensions(net, opts);
    auto gather = [&](const std::vector<double>& v) {
        std::vector<double> out;
        out.reserve(population.size());
        for (auto id : population) out.push_back(v[id]);
        return out;
    };

    SbsScores scores;
    scores.period = net.period();
    scores.population = opts.population;
    scores.stats.size = population.size();
    scores.stats.prevalence = dimension_stats(gather(dims.prevalence));
    scores.stats.diversity = dimension_stats(gather(dims.diversity));
    scores.stats.connectivity = dimension_stats(gather(dims.connectivity));
    for (std::size_t k = 0; k < ids.size(); ++k) {
        SbsEntry e{targets[k], dims.prevalence[ids[k]], dims.diversity[ids[k]], dims.connectivity[ids[k]], 0.0};
        e.sbs = scores.recompute(e);
        scores.entries.push_back(std::move(e));
    }
    return scores;
}

std::string scores_to_csv(const std::vector<SbsScores>& slices) {
    std::string out = "period,target,prevalence,diversity,connectivity,sbs\n";
    for (const auto& s : slices) {
        for (const auto& e : s.entries) {
            out += io::csv_line({s.period, e.target, io::format_double(e.prevalence), io::format_double(e.diversity),
                                 io::format_double(e.connectivity), io::format_double(e.sbs)});
        }
    }
    return out;
}

}  // namespace semnet::sbs
