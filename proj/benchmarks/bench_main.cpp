#include "oracles.hpp"

#include "semnet/analytics.hpp"
#include "semnet/sbs.hpp"
#include "semnet/topics.hpp"

#include <benchmark/benchmark.h>

using namespace semnet;

namespace {

const std::vector<text::TokenSeq>& slice_tokens(std::size_t nodes) {
    static std::map<std::size_t, std::vector<text::TokenSeq>> cache;
    auto it = cache.find(nodes);
    if (it == cache.end()) it = cache.emplace(nodes, oracles::large_slice_tokens(nodes, nodes * 10, 1)).first;
    return it->second;
}

const network::WordNetwork& slice_network(std::size_t nodes) {
    static std::map<std::size_t, network::WordNetwork> cache;
    auto it = cache.find(nodes);
    if (it == cache.end()) it = cache.emplace(nodes, network::build_cooccurrence(slice_tokens(nodes), {})).first;
    return it->second;
}

void BM_BuildCooccurrence(benchmark::State& state) {
    const auto& tokens = slice_tokens(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(network::build_cooccurrence(tokens, {}));
}
BENCHMARK(BM_BuildCooccurrence)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Betweenness(benchmark::State& state) {
    const auto& net = slice_network(state.range(0));
    const auto transform = state.range(1) ? sbs::WeightTransform::Inverse : sbs::WeightTransform::Unit;
    for (auto _ : state) benchmark::DoNotOptimize(sbs::betweenness_all(net, {transform, 0}));
    state.counters["edges"] = static_cast<double>(net.edge_count());
}
BENCHMARK(BM_Betweenness)->Args({1000, 1})->Args({1000, 0})->Args({10000, 1})->Unit(benchmark::kMillisecond);

void BM_Distinctiveness(benchmark::State& state) {
    const auto& net = slice_network(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sbs::distinctiveness_all(net));
}
BENCHMARK(BM_Distinctiveness)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Louvain(benchmark::State& state) {
    const auto& net = slice_network(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(topics::louvain(net, 42));
}
BENCHMARK(BM_Louvain)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_RisingTimeseries(benchmark::State& state) {
    const auto docs = oracles::rising_cluster_corpus();
    const auto lex = oracles::rising_cluster_lexicon();
    for (auto _ : state) benchmark::DoNotOptimize(analytics::run_sbs_timeseries(docs, lex, PipelineConfig{}));
}
BENCHMARK(BM_RisingTimeseries)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
