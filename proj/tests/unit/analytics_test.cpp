#include "oracles.hpp"

#include "semnet/analytics.hpp"
#include "semnet/error.hpp"
#include "semnet/io.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <filesystem>

using namespace semnet;
using namespace semnet::analytics;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SEMNET_FIXTURE_DIR;

corpus::DocumentSet trend_fixture() {
    return corpus::ingest(kFixtures / "trend.jsonl", corpus::Profile::GenericJsonl).documents;
}

PipelineConfig quick() {
    PipelineConfig c;
    c.threads = 1;
    return c;
}

fs::path temp_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("semnet-analytics-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Trend, FixtureCounts) {
    const auto docs = trend_fixture();
    EXPECT_EQ(term_mention_trend(docs, "covid-19"), (std::map<int, std::size_t>{{2020, 0}, {2021, 3}, {2022, 1}}));
    EXPECT_EQ(term_mention_trend(docs, "heat pump").at(2020), 2u);
    EXPECT_EQ(trend_to_csv({{2020, 0}, {2021, 3}}), "year,documents\n2020,0\n2021,3\n");
    EXPECT_EQ(term_mention_trend(docs, "heat to pumps").at(2020), 1u);
}

TEST(Fingerprint, TracksResultParametersOnly) {
    const auto lex = oracles::rising_cluster_lexicon();
    PipelineConfig a, b, c;
    b.seed = 43;
    c.threads = 7;
    EXPECT_NE(config_fingerprint(a, lex), config_fingerprint(b, lex));
    EXPECT_EQ(config_fingerprint(a, lex), config_fingerprint(c, lex));
    auto lex2 = lex;
    lex2.version = 2;
    EXPECT_NE(config_fingerprint(a, lex), config_fingerprint(a, lex2));
}

TEST(ProtectedPhrases, KeywordsAndCountries) {
    const auto p = protected_phrases(oracles::rising_cluster_lexicon());
    EXPECT_NE(std::find(p.begin(), p.end(), "solar panel"), p.end());
    EXPECT_NE(std::find(p.begin(), p.end(), "United States"), p.end());
}

TEST(Timeseries, RisingClusterStrictlyIncreases) {
    const auto ts = run_sbs_timeseries(oracles::rising_cluster_corpus(), oracles::rising_cluster_lexicon(), quick());
    const auto series = ts.series("Rising");
    ASSERT_EQ(series.size(), 3u);
    for (std::size_t i = 1; i < series.size(); ++i) {
        EXPECT_LT(series[i - 1].second.sbs, series[i].second.sbs) << series[i].first;
        EXPECT_LT(series[i - 1].second.prevalence, series[i].second.prevalence);
    }
    EXPECT_TRUE(ts.empty_periods().empty());
}

TEST(Timeseries, AlgebraHoldsInEverySlice) {
    const auto ts = run_sbs_timeseries(oracles::rising_cluster_corpus(), oracles::rising_cluster_lexicon(), quick());
    for (const auto& slice : ts.slices) {
        for (const auto& e : slice.scores.entries) EXPECT_NEAR(slice.scores.recompute(e), e.sbs, 1e-9);
    }
}

TEST(Timeseries, EmptyPeriodsAreZeroRows) {
    auto cfg = quick();
    cfg.slice.granularity = network::Granularity::RangeList;
    cfg.slice.ranges = {{2019, 2020}, {2030, 2031}};
    const auto ts = run_sbs_timeseries(oracles::rising_cluster_corpus(), oracles::rising_cluster_lexicon(), cfg);
    ASSERT_EQ(ts.slices.size(), 2u);
    EXPECT_EQ(ts.empty_periods(), std::vector<std::string>{"2030-2031"});
    EXPECT_EQ(ts.slices[1].scores.entries.size(), 2u);
    for (const auto& e : ts.slices[1].scores.entries) EXPECT_EQ(e.sbs, 0.0);

    // Yearly slicing fills gap years.
    auto docs = oracles::rising_cluster_corpus().documents();
    for (auto& d : docs) {
        if (d.year == 2020) d.year = 2022;
    }
    const auto gap = run_sbs_timeseries(corpus::DocumentSet(docs, {}), oracles::rising_cluster_lexicon(), quick());
    EXPECT_EQ(gap.empty_periods(), std::vector<std::string>{"2020"});
    EXPECT_EQ(gap.slices.size(), 4u);
}

TEST(Timeseries, RemovingSingleTokenClusterLeavesOthersRaw) {
    const auto docs = oracles::rising_cluster_corpus();
    auto with = oracles::rising_cluster_lexicon();
    with.clusters[1] = {"Rebar", {"rebar"}, ""};
    auto without = with;
    without.clusters.pop_back();
    for (auto pop : {sbs::Population::AllNodes, sbs::Population::TargetsOnly}) {
        auto cfg = quick();
        cfg.population = pop;
        const auto a = run_sbs_timeseries(docs, with, cfg).series("Rising");
        const auto b = run_sbs_timeseries(docs, without, cfg).series("Rising");
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].second.prevalence, b[i].second.prevalence);
            EXPECT_EQ(a[i].second.diversity, b[i].second.diversity);
            EXPECT_EQ(a[i].second.connectivity, b[i].second.connectivity);
            if (pop == sbs::Population::AllNodes) EXPECT_NEAR(a[i].second.sbs, b[i].second.sbs, 1e-12);
        }
    }
}

TEST(Timeseries, CollisionIsReportedWithPeriod) {
    auto lex = oracles::rising_cluster_lexicon();
    lex.clusters.push_back({"Again", {"Photovoltaic"}, ""});
    EXPECT_THROW(run_sbs_timeseries(oracles::rising_cluster_corpus(), lex, quick()), CollisionError);
}

TEST(Bundle, ByteIdenticalAcrossRunsAndThreadCounts) {
    const auto docs = oracles::rising_cluster_corpus();
    const auto lex = oracles::rising_cluster_lexicon();
    auto cfg = quick();
    const auto a = build_bundle(docs, lex, cfg);
    cfg.threads = 4;
    const auto b = build_bundle(docs, lex, cfg);
    EXPECT_EQ(a, b);
    std::vector<std::string> names;
    for (const auto& [n, c] : a) names.push_back(n);
    EXPECT_EQ(names, (std::vector<std::string>{"counts_by_year.csv", "geo_counts.csv", "manifest.json",
                                               "sbs_population_stats.csv", "sbs_timeseries.csv", "topics.json"}));
    const auto manifest = nlohmann::json::parse(a.at("manifest.json"));
    EXPECT_EQ(manifest["fingerprint"], config_fingerprint(cfg, lex));
    EXPECT_EQ(manifest["parameters"]["seed"], 42);
    EXPECT_EQ(manifest["files"].size(), 5u);
    EXPECT_EQ(a.at("counts_by_year.csv"), "year,count\n2019,10\n2020,10\n2021,10\n");
}

TEST(Bundle, ExportAndVerify) {
    AnalysisRun run("r1", "syn", oracles::rising_cluster_lexicon(), quick());
    const auto dir = temp_dir("export");
    EXPECT_THROW(export_bundle(run, dir), Error);
    run.execute(oracles::rising_cluster_corpus());
    ASSERT_EQ(run.status(), RunStatus::Done) << run.error();
    export_bundle(run, dir);
    EXPECT_TRUE(verify_bundle(dir).empty());
    io::write_file_atomic(dir / "topics.json", "{}\n");
    EXPECT_EQ(verify_bundle(dir), std::vector<std::string>{"topics.json"});
    fs::remove_all(dir);
}

TEST(AnalysisRunState, ForwardOnlyTransitions) {
    AnalysisRun run("r", "c", oracles::rising_cluster_lexicon(), quick());
    EXPECT_EQ(run.status(), RunStatus::Pending);
    run.start();
    EXPECT_EQ(run.status(), RunStatus::Running);
    EXPECT_THROW(run.start(), Error);
    run.fail("boom");
    EXPECT_EQ(run.status(), RunStatus::Failed);
    EXPECT_EQ(run.error(), "boom");
    EXPECT_THROW(run.start(), Error);

    AnalysisRun bad("r", "c", oracles::rising_cluster_lexicon(), quick());
    bad.execute(corpus::DocumentSet{});
    EXPECT_EQ(bad.status(), RunStatus::Failed);
    EXPECT_FALSE(bad.error().empty());
    EXPECT_EQ(parse_status("done"), RunStatus::Done);
    EXPECT_EQ(status_name(RunStatus::Pending), "pending");
}
