// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "oracles.hpp"

#include "semnet/analytics.hpp"
#include "semnet/error.hpp"
#include "semnet/geo.hpp"
#include "semnet/io.hpp"
#include "semnet/service.hpp"
#include "semnet/topics.hpp"
#include "semnet/zip.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

using namespace semnet;
using network::Edge;
using network::NodeId;
using network::NodeInfo;
using network::WordNetwork;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances
constexpr double kBetweennessTol = 1e-9;
constexpr double kClosedFormTol = 1e-12;
constexpr double kDiOracleTol = 1e-9;
constexpr double kZRecomputeTol = 1e-9;
constexpr double kZSumTol = 1e-6;
constexpr double kModularityGap = 0.05;
constexpr double kTfidfTol = 1e-9;
constexpr double kOracleBudgetSeconds = 60.0;
constexpr double kPerfBudgetSeconds = 60.0;

const fs::path kFixtures = SEMNET_FIXTURE_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

int g_failed = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
        o = body();
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!o.pass) ++g_failed;
    std::printf("%s  %-28s %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

WordNetwork labelled(std::size_t n, std::vector<Edge> edges, std::int64_t freq = 1) {
    std::vector<NodeInfo> nodes(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = {"n" + std::to_string(100 + i), freq, {}};
    return WordNetwork("t", std::move(nodes), std::move(edges));
}

std::vector<std::string> all_labels(const WordNetwork& net) {
    std::vector<std::string> out;
    for (const auto& n : net.nodes()) out.push_back(n.label);
    return out;
}

fs::path scratch(const std::string& name) {
    auto d = fs::temp_directory_path() / ("semnet-acceptance-" + std::to_string(::getpid())) / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("'") + SEMNET_CLI_PATH + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

analytics::Artifacts read_dir(const fs::path& dir) {
    analytics::Artifacts files;
    for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = io::read_file(e.path());
    return files;
}

// ---------------------------------------------------------------------------

Outcome connectivity_oracle() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<std::size_t> size(2, 12);
    std::uniform_real_distribution<double> density(0.15, 0.5);
    std::uniform_int_distribution<std::int64_t> max_w(1, 8);
    const auto t0 = Clock::now();
    int graphs = 0;
    double worst = 0.0;
    for (; graphs < 200; ++graphs) {
        const auto net = oracles::random_network(rng, size(rng), density(rng), max_w(rng));
        for (auto t : {sbs::WeightTransform::Inverse, sbs::WeightTransform::Unit}) {
            const auto got = sbs::betweenness_all(net, {t, 0});
            const auto want = oracles::brute_force_betweenness(net, t);
            for (std::size_t i = 0; i < got.size(); ++i) {
                const double err = std::abs(got[i] - want[i]);
                worst = std::max(worst, err);
                if (err > kBetweennessTol) o.fail("graph " + std::to_string(graphs) + " node " + std::to_string(i));
            }
        }
    }
    const double secs = seconds_since(t0);
    if (secs >= kOracleBudgetSeconds) o.fail("took " + std::to_string(secs) + " s");
    if (o.pass) {
        std::ostringstream s;
        s << graphs << " graphs x 2 transforms, max |err| " << worst;
        o.detail = s.str();
    }
    return o;
}

Outcome distinctiveness_closed_forms() {
    Outcome o;
    for (std::size_t n = 2; n <= 12; ++n) {
        std::vector<Edge> e;
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v) e.push_back({u, v, 1 + (u + v) % 3});
        for (double d : sbs::distinctiveness_all(labelled(n, e))) {
            if (std::abs(d) > kClosedFormTol) o.fail("K" + std::to_string(n) + " not zero");
        }
    }
    std::vector<Edge> star;
    for (NodeId v = 1; v <= 10; ++v) star.push_back({0, v, v});
    const auto di = sbs::distinctiveness_all(labelled(11, star));
    if (std::abs(di[0] - 10.0) > kClosedFormTol) o.fail("star centre " + io::format_double(di[0]));
    for (std::size_t i = 1; i < di.size(); ++i) {
        if (std::abs(di[i]) > kClosedFormTol) o.fail("star leaf not zero");
    }
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> size(2, 40);
    std::uniform_real_distribution<double> density(0.05, 0.9);
    for (int g = 0; g < 200; ++g) {
        const auto net = oracles::random_network(rng, size(rng), density(rng), 9);
        const auto got = sbs::distinctiveness_all(net);
        const auto want = oracles::direct_distinctiveness(net);
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (std::abs(got[i] - want[i]) > kDiOracleTol) o.fail("random graph " + std::to_string(g));
        }
    }
    if (o.pass) o.detail = "K2..K12 = 0, star centre 10, 200 random graphs agree";
    return o;
}

Outcome sbs_algebra() {
    Outcome o;
    const auto docs = oracles::rising_cluster_corpus();
    const auto lex = oracles::rising_cluster_lexicon();
    int slices = 0;
    for (auto pop : {sbs::Population::AllNodes, sbs::Population::TargetsOnly}) {
        PipelineConfig cfg;
        cfg.population = pop;
        cfg.slice.granularity = network::Granularity::RangeList;
        cfg.slice.ranges = {{2019, 2019}, {2020, 2020}, {2021, 2021}, {2022, 2023}};
        const auto bundle = analytics::build_bundle(docs, lex, cfg);

        // Recompute every exported SBS from the exported population stats.
        std::map<std::string, std::vector<double>> stats;
        const auto stat_rows = io::parse_csv(bundle.at("sbs_population_stats.csv"));
        for (std::size_t r = 1; r < stat_rows.size(); ++r) {
            std::vector<double> v;
            for (std::size_t c = 3; c <= 8; ++c) v.push_back(std::stod(stat_rows[r][c]));
            stats[stat_rows[r][0]] = v;
        }
        auto z = [](double x, double mean, double sd) { return sd == 0.0 ? 0.0 : (x - mean) / sd; };
        const auto rows = io::parse_csv(bundle.at("sbs_timeseries.csv"));
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto& s = stats.at(rows[r][0]);
            const double pr = std::stod(rows[r][2]), di = std::stod(rows[r][3]), co = std::stod(rows[r][4]);
            const double want = z(pr, s[0], s[1]) + z(di, s[2], s[3]) + z(co, s[4], s[5]);
            if (std::abs(std::stod(rows[r][5]) - want) > kZRecomputeTol) o.fail("row " + std::to_string(r));
        }
        slices += static_cast<int>(stats.size());
    }

    // All-nodes SBS sums to zero over each slice's population.
    PipelineConfig cfg;
    for (const auto& [period, part] : network::slice_by_period(docs, cfg.slice)) {
        const auto net = analytics::slice_network(part, lex, cfg, period.label());
        const auto s = sbs::sbs_scores(net, all_labels(net), cfg.sbs_options());
        double sum = 0.0;
        for (const auto& e : s.entries) sum += e.sbs;
        if (std::abs(sum) > kZSumTol) o.fail("sum " + io::format_double(sum) + " in " + period.label());
    }

    // Constant dimension: equal frequencies contribute exactly 0.
    const auto path = labelled(3, {{0, 1, 1}, {1, 2, 1}}, 4);
    const auto s = sbs::sbs_scores(path, all_labels(path));
    if (s.stats.prevalence.std != 0.0) o.fail("prevalence std not 0");
    for (const auto& e : s.entries) {
        const double rest = s.stats.diversity.z(e.diversity) + s.stats.connectivity.z(e.connectivity);
        if (e.sbs != rest) o.fail("constant dimension contributed");
    }
    std::vector<Edge> k4;
    for (NodeId u = 0; u < 4; ++u)
        for (NodeId v = u + 1; v < 4; ++v) k4.push_back({u, v, 1});
    for (const auto& e : sbs::sbs_scores(labelled(4, k4), {"n100", "n101"}).entries) {
        if (e.sbs != 0.0) o.fail("all-constant slice gave non-zero SBS");
    }
    if (o.pass) o.detail = std::to_string(slices) + " exported slices recomputed, z-sums zero, constants exact";
    return o;
}

Outcome louvain_criterion() {
    Outcome o;
    // Two 5-cliques joined by one edge.
    std::vector<Edge> e;
    for (NodeId base : {0u, 5u})
        for (NodeId u = 0; u < 5; ++u)
            for (NodeId v = u + 1; v < 5; ++v) e.push_back({base + u, base + v, 1});
    e.push_back({4, 5, 1});
    const auto cliques = labelled(10, e);
    const auto p = topics::louvain(cliques, 42);
    const std::vector<std::uint32_t> planted{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    if (p.community != planted) o.fail("planted partition not recovered");

    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::size_t> size(2, 8);
    std::uniform_real_distribution<double> density(0.2, 0.8);
    double worst = 0.0;
    for (int g = 0; g < 200; ++g) {
        const auto net = oracles::random_network(rng, size(rng), density(rng), 5);
        const double gap = oracles::best_modularity(net) - topics::louvain(net, 42).modularity;
        worst = std::max(worst, gap);
        if (gap > kModularityGap) o.fail("graph " + std::to_string(g) + " gap " + io::format_double(gap));
    }

    const auto big = oracles::random_network(rng, 60, 0.1, 6);
    const auto first = topics::louvain(big, 1234);
    for (int r = 0; r < 10; ++r) {
        if (topics::louvain(big, 1234).community != first.community) o.fail("repeat " + std::to_string(r) + " differs");
    }
    if (o.pass) {
        std::ostringstream s;
        s << "planted split found, 200 graphs <= 8 nodes worst gap " << worst << ", 10 repeats identical";
        o.detail = s.str();
    }
    return o;
}

Outcome tfidf_criterion() {
    Outcome o;
    const std::vector<text::TokenSeq> docs{{"d1", {"solar", "solar", "roof"}}, {"d2", {"roof", "wall"}}};
    const auto terms = topics::tfidf_keywords(docs, 10);
    std::map<std::string, double> score;
    for (const auto& t : terms) score[t.term] = t.score;
    if (std::abs(score["solar"] - 2.0 * std::log10(2.0)) > kTfidfTol) o.fail("solar");
    if (std::abs(score["wall"] - std::log10(2.0)) > kTfidfTol) o.fail("wall");
    if (score.at("roof") != 0.0) o.fail("roof not exactly 0");
    for (auto agg : {topics::TfidfAggregation::Sum, topics::TfidfAggregation::Mean}) {
        for (const auto& t : topics::tfidf_keywords(docs, 10, agg)) {
            if (t.term == "roof" && t.score != 0.0) o.fail("roof not 0 under " + std::string(topics::aggregation_name(agg)));
        }
    }
    if (o.pass) o.detail = "solar 2 log10 2, wall log10 2, roof 0";
    return o;
}

Outcome synthetic_rising_cluster() {
    Outcome o;
    const auto docs = oracles::rising_cluster_corpus();
    const auto lex = oracles::rising_cluster_lexicon();
    if (docs.size() != 30) o.fail("corpus has " + std::to_string(docs.size()) + " documents");
    const auto ts = analytics::run_sbs_timeseries(docs, lex, PipelineConfig{});
    const auto series = ts.series("Rising");
    std::ostringstream values;
    for (std::size_t i = 0; i < series.size(); ++i) {
        values << (i ? " < " : "") << io::format_double(std::round(series[i].second.sbs * 1000) / 1000);
        if (i && !(series[i - 1].second.sbs < series[i].second.sbs)) o.fail("not increasing at " + series[i].first);
    }
    if (series.size() != 3) o.fail("expected 3 yearly slices");

    // Two separate executions of the CLI produce the same bytes.
    const auto dir = scratch("rising");
    io::write_file_atomic(dir / "corpus.jsonl", docs.to_jsonl());
    io::write_file_atomic(dir / "lexicon.json", lexicon::to_json(lex));
    for (const char* out : {"a", "b"}) {
        const int code = run_cli("sbs --corpus " + quoted(dir / "corpus.jsonl") + " --lexicon " +
                                 quoted(dir / "lexicon.json") + " --out " + quoted(dir / out));
        if (code != 0) o.fail("cli exit " + std::to_string(code));
    }
    if (o.pass) {
        const auto a = read_dir(dir / "a"), b = read_dir(dir / "b");
        if (a != b || a.size() != 6) o.fail("bundles differ between executions");
        if (analytics::build_bundle(docs, lex, PipelineConfig{}) != a) o.fail("library bundle differs from CLI");
    }
    if (o.pass) o.detail = "SBS " + values.str() + ", bundles byte-identical";
    return o;
}

Outcome contraction_conservation() {
    Outcome o;
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<std::size_t> size(2, 40);
    std::uniform_real_distribution<double> density(0.05, 0.7);
    for (int g = 0; g < 100; ++g) {
        const auto net = oracles::random_network(rng, size(rng), density(rng), 20);
        std::uniform_int_distribution<int> clusters(1, 5);
        const int k = clusters(rng);
        std::uniform_int_distribution<int> owner_of(-1, k - 1);
        std::vector<int> owner(net.node_count());
        std::vector<std::set<std::string>> members(k);
        for (NodeId v = 0; v < net.node_count(); ++v) {
            owner[v] = owner_of(rng);
            if (owner[v] >= 0) members[owner[v]].insert(net.label(v));
        }
        lexicon::Lexicon lex;
        for (int c = 0; c < k; ++c) {
            if (!members[c].empty()) lex.clusters.push_back({"C" + std::to_string(c), members[c], ""});
        }
        network::Weight internal = 0;
        for (const auto& e : net.edges()) {
            if (owner[e.u] >= 0 && owner[e.u] == owner[e.v]) internal += e.w;
        }
        const auto out = network::contract_clusters(net, lex);
        if (out.total_weight() != net.total_weight() - internal) o.fail("network " + std::to_string(g));
    }
    if (o.pass) o.detail = "100 random networks, exact";
    return o;
}

Outcome geo_fixtures() {
    Outcome o;
    const auto& gaz = geo::default_gazetteer();
    struct Case {
        std::string text;
        std::set<std::string> want;
    };
    const std::vector<Case> cases{
        {"An Italian case study of school buildings.", {"Italy"}},
        {"Offices in the United States were surveyed.", {"United States"}},
        {"The United States of America and Canada.", {"Canada", "United States"}},
        {"Dwellings in South Africa and South Korea.", {"South Africa", "South Korea"}},
        {"Germany's building stock.", {"Germany"}},
        {"Turkey is served at festivals.", {}},
        {"Earthquakes in Turkey damaged schools.", {"Turkey"}},
        {"A chinese lantern and a french window.", {}},
        {"Written in English.", {}},
    };
    int passed = 0;
    for (const auto& c : cases) {
        if (gaz.tag(c.text) == c.want) {
            ++passed;
        } else {
            o.fail("\"" + c.text + "\"");
        }
    }
    // Document-level dedup over the Scopus fixture plus a repeated mention.
    auto docs = corpus::ingest(kFixtures / "scopus_three.csv", corpus::Profile::ScopusCsv).documents.documents();
    corpus::Document repeat;
    repeat.id = "rep";
    repeat.title = "Italian housing in Italy";
    repeat.abstract_text = "Italy, Italy and again Italy; Italians agree.";
    repeat.year = 2020;
    docs.push_back(repeat);
    const auto counts = geo::country_counts(corpus::DocumentSet(docs, {}), gaz);
    const std::map<std::string, std::size_t> want{{"Italy", 2}, {"United States", 1}};
    for (const auto& [country, n] : want) {
        if (!counts.count(country) || counts.at(country) != n) o.fail("count for " + country);
    }
    if (o.pass) o.detail = std::to_string(passed) + "/" + std::to_string(cases.size()) + " sentences, dedup counts exact";
    return o;
}

Outcome performance() {
    Outcome o;
    const auto tokens = oracles::large_slice_tokens(10000, 100000, 7);
    // Twenty clusters of three vocabulary words each.
    lexicon::Lexicon lex;
    for (int c = 0; c < 20; ++c) {
        std::set<std::string> kw;
        for (int k = 0; k < 3; ++k) {
            char w[16];
            std::snprintf(w, sizeof w, "w%05d", 500 + c * 37 + k * 1000);
            kw.insert(w);
        }
        lex.clusters.push_back({"Cluster" + std::to_string(c), kw, ""});
    }
    std::vector<std::string> targets;
    for (const auto& c : lex.clusters) targets.push_back(c.name);

    const auto t0 = Clock::now();
    const auto raw = network::build_cooccurrence(tokens, network::SliceSpec{}, "perf");
    const auto net = network::contract_clusters(raw, lex);
    const auto scores = sbs::sbs_scores(net, targets);
    const double secs = seconds_since(t0);

    if (raw.node_count() < 10000) o.fail("only " + std::to_string(raw.node_count()) + " nodes");
    if (raw.edge_count() < 100000) o.fail("only " + std::to_string(raw.edge_count()) + " edges");
    if (scores.entries.size() != targets.size()) o.fail("missing scores");
    std::ostringstream s;
    s << raw.node_count() << " nodes / " << raw.edge_count() << " edges -> " << net.node_count() << " / "
      << net.edge_count() << " after contraction, " << secs << " s on " << std::thread::hardware_concurrency()
      << " core(s)";
    if (secs >= kPerfBudgetSeconds) o.fail(s.str() + " exceeds budget");
    if (o.pass) o.detail = s.str();
    return o;
}

Outcome cli_service_parity() {
    Outcome o;
    const auto dir = scratch("parity");
    const auto docs = oracles::rising_cluster_corpus();
    const auto lex = oracles::rising_cluster_lexicon();
    const nlohmann::json config{{"window", 4}, {"population", "targets-only"}, {"seed", 99}, {"collocation_min_count", 3}};
    io::write_file_atomic(dir / "corpus.jsonl", docs.to_jsonl());
    io::write_file_atomic(dir / "lexicon.json", lexicon::to_json(lex));
    io::write_file_atomic(dir / "config.json", config.dump());
    const int code = run_cli("sbs --corpus " + quoted(dir / "corpus.jsonl") + " --lexicon " +
                             quoted(dir / "lexicon.json") + " --config " + quoted(dir / "config.json") + " --out " +
                             quoted(dir / "cli"));
    if (code != 0) {
        o.fail("cli exit " + std::to_string(code));
        return o;
    }
    const auto cli_files = read_dir(dir / "cli");

    service::Service svc({dir / "data", 1, 0});
    const int port = svc.start("127.0.0.1", 0);
    httplib::Client client("127.0.0.1", port);
    auto r = client.Post("/corpora?profile=generic-jsonl", io::read_file(dir / "corpus.jsonl"), "application/x-ndjson");
    const std::string cid = nlohmann::json::parse(r->body)["id"];
    r = client.Post("/lexicons", io::read_file(dir / "lexicon.json"), "application/json");
    const auto lexicon_reply = nlohmann::json::parse(r->body);
    const nlohmann::json run_req{{"corpus_id", cid},
                                 {"lexicon_id", lexicon_reply["id"]},
                                 {"lexicon_version", lexicon_reply["version"]},
                                 {"config", config}};
    r = client.Post("/runs", run_req.dump(), "application/json");
    if (r->status != 202) {
        o.fail("POST /runs " + std::to_string(r->status) + " " + r->body);
        return o;
    }
    const std::string run = nlohmann::json::parse(r->body)["id"];
    svc.wait_idle();

    for (const auto& [name, bytes] : cli_files) {
        auto a = client.Get("/runs/" + run + "/results/" + name);
        if (!a || a->status != 200 || a->body != bytes) o.fail(name + " differs");
    }
    auto zip = client.Get("/runs/" + run + "/bundle");
    if (!zip || zip->status != 200 || zip->body != io::zip_store(cli_files)) o.fail("zip differs");
    svc.stop();
    if (o.pass) o.detail = std::to_string(cli_files.size()) + " files and zip byte-identical";
    return o;
}

}  // namespace

int main() {
    criterion("connectivity-oracle", connectivity_oracle);
    criterion("distinctiveness-closed-forms", distinctiveness_closed_forms);
    criterion("sbs-algebra", sbs_algebra);
    criterion("louvain", louvain_criterion);
    criterion("tfidf", tfidf_criterion);
    criterion("synthetic-rising-cluster", synthetic_rising_cluster);
    criterion("contraction-conservation", contraction_conservation);
    criterion("geo-tagging", geo_fixtures);
    criterion("performance", performance);
    criterion("cli-service-parity", cli_service_parity);
    fs::remove_all(fs::temp_directory_path() / ("semnet-acceptance-" + std::to_string(::getpid())));
    std::printf("%d criteria failed\n", g_failed);
    return g_failed == 0 ? 0 : 1;
}
