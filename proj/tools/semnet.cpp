#include "semnet/analytics.hpp"
#include "semnet/config.hpp"
#include "semnet/corpus.hpp"
#include "semnet/error.hpp"
#include "semnet/geo.hpp"
#include "semnet/io.hpp"
#include "semnet/lexicon.hpp"
#include "semnet/service.hpp"
#include "semnet/suggest.hpp"
#include "semnet/topics.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace semnet;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

corpus::Profile guess_profile(const fs::path& path, const std::string& given) {
    if (!given.empty()) return corpus::parse_profile(given);
    return path.extension() == ".csv" ? corpus::Profile::ScopusCsv : corpus::Profile::GenericJsonl;
}

corpus::DocumentSet load_corpus(const fs::path& path, const std::string& profile) {
    auto res = corpus::ingest(path, guess_profile(path, profile));
    if (res.rejected || res.duplicates) {
        std::cerr << path.string() << ": " << res.rejected << " rejected, " << res.duplicates << " duplicates\n";
    }
    return res.documents;
}

void emit(const std::string& content, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << content;
    } else {
        io::write_file_atomic(out, content);
    }
}

/// Flags that mirror PipelineConfig; only flags actually given override the config file.
struct ConfigFlags {
    std::string config_file;
    bool yearly = false;
    std::string ranges;
    int window = 0;
    std::int64_t min_edge_weight = 0;
    std::int64_t min_node_freq = 0;
    std::string counting;
    std::string stemmer;
    std::size_t min_token_len = 0;
    bool no_collocations = false;
    std::string collocation_scope;
    std::size_t collocation_min_count = 0;
    double collocation_threshold = 0;
    std::string population;
    std::string transform;
    std::string prevalence;
    std::uint64_t seed = 0;
    double resolution = 0;
    std::size_t topic_words = 0;
    double topic_beta = 0;
    std::string dataset;
    unsigned threads = 0;

    std::vector<std::pair<CLI::Option*, std::string>> opts;

    void add(CLI::App* app, bool slicing) {
        app->add_option("--config", config_file, "JSON config file (flags override it)")->check(CLI::ExistingFile);
        if (slicing) {
            opts.emplace_back(app->add_flag("--yearly", yearly, "one slice per publication year (default)"),
                              "granularity");
            opts.emplace_back(app->add_option("--ranges", ranges, "period ranges, e.g. 1996-2006,2007-2013"),
                              "ranges");
        }
        opts.emplace_back(app->add_option("--window", window, "co-occurrence window (default 5)"), "window");
        opts.emplace_back(app->add_option("--min-edge-weight", min_edge_weight, "default 1"), "min_edge_weight");
        opts.emplace_back(app->add_option("--min-node-freq", min_node_freq, "default 1"), "min_node_freq");
        opts.emplace_back(app->add_option("--counting", counting, "per-window (default) or per-document"),
                          "cooccurrence_counting");
        opts.emplace_back(app->add_option("--stemmer", stemmer, "porter (default) or none"), "stemmer");
        opts.emplace_back(app->add_option("--min-token-len", min_token_len, "default 2"), "min_token_len");
        opts.emplace_back(app->add_flag("--no-collocations", no_collocations, "disable bigram fusion"),
                          "collocations");
        opts.emplace_back(app->add_option("--collocation-scope", collocation_scope, "per-slice (default) or global"),
                          "collocation_scope");
        opts.emplace_back(app->add_option("--collocation-min-count", collocation_min_count, "default 5"),
                          "collocation_min_count");
        opts.emplace_back(app->add_option("--collocation-threshold", collocation_threshold, "PMI bits, default 3"),
                          "collocation_threshold");
        opts.emplace_back(app->add_option("--population", population, "all-nodes (default) or targets-only"),
                          "population");
        opts.emplace_back(app->add_option("--transform", transform, "inverse (default) or unit"), "weight_transform");
        opts.emplace_back(app->add_option("--prevalence", prevalence, "tokens (default) or documents"), "prevalence");
        opts.emplace_back(app->add_option("--seed", seed, "default 42"), "seed");
        opts.emplace_back(app->add_option("--resolution", resolution, "Louvain resolution, default 1"), "resolution");
        opts.emplace_back(app->add_option("--topic-words", topic_words, "words per topic, default 20"), "topic_words");
        opts.emplace_back(app->add_option("--topic-beta", topic_beta, "frequency exponent, default 1"), "topic_beta");
        opts.emplace_back(app->add_option("--dataset", dataset, "dataset name for geo counts"), "dataset");
        opts.emplace_back(app->add_option("--threads", threads, "worker cap, 0 = all cores"), "threads");
    }

    PipelineConfig resolve() const {
        PipelineConfig cfg;
        if (!config_file.empty()) {
            try {
                cfg = apply_config_json(cfg, nlohmann::json::parse(io::read_file(config_file)));
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(config_file + ": " + e.what());
            }
        }
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [opt, key] : opts) {
            if (opt->count() == 0) continue;
            if (key == "granularity") {
                j[key] = "yearly";
            } else if (key == "ranges") {
                j["granularity"] = "range-list";
                auto r = nlohmann::json::array();
                for (const auto& [a, b] : parse_ranges(ranges)) r.push_back({a, b});
                j[key] = r;
            } else if (key == "window") {
                j[key] = window;
            } else if (key == "min_edge_weight") {
                j[key] = min_edge_weight;
            } else if (key == "min_node_freq") {
                j[key] = min_node_freq;
            } else if (key == "cooccurrence_counting") {
                j[key] = counting;
            } else if (key == "stemmer") {
                j[key] = stemmer;
            } else if (key == "min_token_len") {
                j[key] = min_token_len;
            } else if (key == "collocations") {
                j[key] = !no_collocations;
            } else if (key == "collocation_scope") {
                j[key] = collocation_scope;
            } else if (key == "collocation_min_count") {
                j[key] = collocation_min_count;
            } else if (key == "collocation_threshold") {
                j[key] = collocation_threshold;
            } else if (key == "population") {
                j[key] = population;
            } else if (key == "weight_transform") {
                j[key] = transform;
            } else if (key == "prevalence") {
                j[key] = prevalence;
            } else if (key == "seed") {
                j[key] = seed;
            } else if (key == "resolution") {
                j[key] = resolution;
            } else if (key == "topic_words") {
                j[key] = topic_words;
            } else if (key == "topic_beta") {
                j[key] = topic_beta;
            } else if (key == "dataset") {
                j[key] = dataset;
            } else if (key == "threads") {
                j[key] = threads;
            }
        }
        if (yearly && !ranges.empty()) throw ParseError("--yearly and --ranges are exclusive");
        return apply_config_json(cfg, j);
    }
};

std::optional<service::Service>* g_service = nullptr;

extern "C" void on_signal(int) {
    if (g_service && *g_service) (*g_service)->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semnet: semantic brand score analysis of scientific corpora"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "semnet 0.1.0");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "normalize a raw export into JSON lines");
    std::string in_path, profile, out;
    ingest->add_option("--in,--input,input", in_path, "raw corpus file")->required()->check(CLI::ExistingFile);
    ingest->add_option("--profile", profile, "scopus-csv or generic-jsonl (default: by extension)");
    ingest->add_option("--out,-o", out, "output file (default standard output)");

    // filter
    auto* filter = app.add_subcommand("filter", "keep documents matching a keyword query");
    std::string corpus_path, query_path;
    filter->add_option("--corpus", corpus_path)->required()->check(CLI::ExistingFile);
    filter->add_option("--query", query_path, "query JSON")->required()->check(CLI::ExistingFile);
    filter->add_option("--profile", profile);
    filter->add_option("--out,-o", out);

    // counts
    auto* counts = app.add_subcommand("counts", "publications per year as CSV");
    counts->add_option("--corpus", corpus_path)->required()->check(CLI::ExistingFile);
    counts->add_option("--profile", profile);
    counts->add_option("--out,-o", out);

    // lexicon
    auto* lex_cmd = app.add_subcommand("lexicon", "lexicon tools");
    lex_cmd->require_subcommand(1);
    std::string lexicon_path;
    auto* validate = lex_cmd->add_subcommand("validate", "check a lexicon for collisions and empty clusters");
    validate->add_option("--lexicon,lexicon", lexicon_path)->required()->check(CLI::ExistingFile);
    auto* suggest = lex_cmd->add_subcommand("suggest", "candidate terms for a seed word");
    std::string term, provider = "external";
    std::size_t k = 10;
    suggest->add_option("--term", term)->required();
    suggest->add_option("--provider", provider, "external or cooccurrence-pmi")->capture_default_str();
    suggest->add_option("--k", k)->capture_default_str();
    suggest->add_option("--corpus", corpus_path, "corpus for cooccurrence-pmi")->check(CLI::ExistingFile);
    suggest->add_option("--profile", profile);
    suggest->add_option("--lexicon", lexicon_path, "drop terms already claimed")->check(CLI::ExistingFile);

    // sbs
    auto* sbs_cmd = app.add_subcommand("sbs", "SBS time series and full export bundle");
    sbs_cmd->add_option("--corpus", corpus_path)->required()->check(CLI::ExistingFile);
    sbs_cmd->add_option("--profile", profile);
    sbs_cmd->add_option("--lexicon", lexicon_path)->required()->check(CLI::ExistingFile);
    sbs_cmd->add_option("--out,-o", out, "bundle directory")->required();
    ConfigFlags sbs_flags;
    sbs_flags.add(sbs_cmd, true);

    // topics
    auto* topics_cmd = app.add_subcommand("topics", "Louvain topics (JSON) or TF-IDF keywords (CSV)");
    topics_cmd->add_option("--corpus", corpus_path)->required()->check(CLI::ExistingFile);
    topics_cmd->add_option("--profile", profile);
    topics_cmd->add_option("--lexicon", lexicon_path, "protect lexicon phrases")->check(CLI::ExistingFile);
    topics_cmd->add_option("--out,-o", out);
    std::size_t tfidf_k = 0;
    std::string aggregation = "max", partition_out;
    topics_cmd->add_option("--tfidf", tfidf_k, "print the top K TF-IDF terms instead of topics");
    topics_cmd->add_option("--aggregation", aggregation, "max, sum or mean")->capture_default_str();
    topics_cmd->add_option("--partition-out", partition_out, "write node,community CSV");
    ConfigFlags topic_flags;
    topic_flags.add(topics_cmd, false);

    // geo
    auto* geo_cmd = app.add_subcommand("geo", "country mention counts as CSV");
    std::vector<std::string> geo_corpora, geo_names;
    geo_cmd->add_option("--corpus", geo_corpora)->required()->check(CLI::ExistingFile);
    geo_cmd->add_option("--dataset", geo_names, "one name per corpus (default: file stem)");
    geo_cmd->add_option("--profile", profile);
    geo_cmd->add_option("--out,-o", out);

    // trend
    auto* trend = app.add_subcommand("trend", "documents per year mentioning a phrase");
    trend->add_option("--corpus", corpus_path)->required()->check(CLI::ExistingFile);
    trend->add_option("--profile", profile);
    trend->add_option("--term", term)->required();
    trend->add_option("--out,-o", out);

    // report
    auto* report = app.add_subcommand("report", "summarize and verify an export bundle");
    std::string bundle_dir;
    report->add_option("--bundle,bundle", bundle_dir)->required()->check(CLI::ExistingDirectory);

    // serve
    auto* serve = app.add_subcommand("serve", "run the HTTP service");
    std::string data_dir = "semnet-data", host = "127.0.0.1";
    int port = 8080;
    unsigned workers = 1, threads = 0;
    serve->add_option("--data-dir", data_dir)->capture_default_str();
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--port", port)->capture_default_str();
    serve->add_option("--workers", workers, "concurrent runs")->capture_default_str()->check(CLI::PositiveNumber);
    serve->add_option("--threads", threads, "betweenness workers per run, 0 = all cores");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (*ingest) {
            const auto res = corpus::ingest(in_path, guess_profile(in_path, profile));
            std::cerr << res.documents.size() << " documents, " << res.rejected << " rejected, " << res.duplicates
                      << " duplicates\n";
            emit(res.documents.to_jsonl(), out);
        } else if (*filter) {
            const auto docs = load_corpus(corpus_path, profile);
            const auto q = corpus::query_from_json(io::read_file(query_path));
            const auto kept = corpus::filter_query(docs, q);
            std::cerr << kept.size() << " of " << docs.size() << " documents kept (" << q.describe() << ")\n";
            emit(kept.to_jsonl(), out);
        } else if (*counts) {
            emit(analytics::counts_to_csv(corpus::count_by_year(load_corpus(corpus_path, profile))), out);
        } else if (*validate) {
            const auto lex = lexicon::load_lexicon(lexicon_path);
            std::cerr << lexicon_path << ": " << lex.clusters.size() << " clusters, version " << lex.version
                      << ", ok\n";
        } else if (*suggest) {
            std::optional<lexicon::Lexicon> lex;
            if (!lexicon_path.empty()) lex = lexicon::load_lexicon(lexicon_path);
            std::unique_ptr<lexicon::SuggestionProvider> p;
            if (provider == "external") {
                p = std::make_unique<lexicon::FixtureProvider>(lexicon::FixtureProvider::builtin());
            } else if (provider == "cooccurrence-pmi") {
                if (corpus_path.empty()) throw CLI::ValidationError("--corpus", "required for cooccurrence-pmi");
                const auto docs = load_corpus(corpus_path, profile);
                PipelineConfig cfg;
                const text::PhraseMatcher phrases(analytics::protected_phrases(lex ? *lex : lexicon::Lexicon{}));
                auto seqs = analytics::normalize_documents(docs, cfg.prep(), phrases);
                p = std::make_unique<lexicon::CooccurrencePmiProvider>(
                    std::make_shared<const network::WordNetwork>(network::build_cooccurrence(seqs, cfg.slice)),
                    cfg.prep());
            } else {
                throw CLI::ValidationError("--provider", "unknown provider " + provider);
            }
            std::cout << lexicon::suggestions_to_json(lexicon::suggest_terms(term, *p, k, lex ? &*lex : nullptr));
        } else if (*sbs_cmd) {
            const auto cfg = sbs_flags.resolve();
            const auto docs = load_corpus(corpus_path, profile);
            const auto lex = lexicon::load_lexicon(lexicon_path);
            analytics::AnalysisRun run("cli", docs.content_hash(), lex, cfg);
            run.execute(docs);
            if (run.status() != analytics::RunStatus::Done) throw Error(run.error());
            analytics::export_bundle(run, out);
            std::cerr << "bundle written to " << out << " (" << run.artifacts().size() << " files)\n";
        } else if (*topics_cmd) {
            const auto cfg = topic_flags.resolve();
            const auto docs = load_corpus(corpus_path, profile);
            const auto lex = lexicon_path.empty() ? lexicon::Lexicon{} : lexicon::load_lexicon(lexicon_path);
            const auto prep = cfg.prep();
            const text::PhraseMatcher phrases(analytics::protected_phrases(lex));
            auto seqs = analytics::normalize_documents(docs, prep, phrases);
            if (cfg.collocations) {
                const auto table = text::detect_collocations(seqs, prep);
                for (auto& s : seqs) s = text::apply_collocations(s, table);
            }
            if (tfidf_k > 0) {
                emit(topics::term_scores_to_csv(
                         topics::tfidf_keywords(seqs, tfidf_k, topics::parse_aggregation(aggregation))),
                     out);
            } else {
                const auto net = network::build_cooccurrence(seqs, cfg.slice, "all");
                auto part = topics::louvain(net, cfg.seed, cfg.resolution);
                topics::rank_all(net, part, cfg.topic_words, cfg.topic_beta);
                std::cerr << part.community_count << " communities, modularity "
                          << io::format_double(part.modularity) << "\n";
                if (!partition_out.empty()) io::write_file_atomic(partition_out, topics::partition_to_csv(net, part));
                emit(topics::topics_to_json(net, part), out);
            }
        } else if (*geo_cmd) {
            if (!geo_names.empty() && geo_names.size() != geo_corpora.size()) {
                throw CLI::ValidationError("--dataset", "give one name per --corpus");
            }
            std::map<std::string, std::map<std::string, std::size_t>> by_dataset;
            for (std::size_t i = 0; i < geo_corpora.size(); ++i) {
                const auto name = geo_names.empty() ? fs::path(geo_corpora[i]).stem().string() : geo_names[i];
                by_dataset[name] = geo::country_counts(load_corpus(geo_corpora[i], profile), geo::default_gazetteer());
            }
            emit(geo::counts_to_csv(by_dataset), out);
        } else if (*trend) {
            emit(analytics::trend_to_csv(analytics::term_mention_trend(load_corpus(corpus_path, profile), term)), out);
        } else if (*report) {
            const auto bad = analytics::verify_bundle(bundle_dir);
            const auto manifest = nlohmann::json::parse(io::read_file(fs::path(bundle_dir) / "manifest.json"));
            nlohmann::ordered_json summary;
            summary["fingerprint"] = manifest.at("fingerprint");
            summary["documents"] = manifest.at("corpus").at("documents");
            summary["lexicon_version"] = manifest.at("lexicon").at("version");
            summary["periods"] = manifest.at("periods").size();
            summary["empty_periods"] = manifest.at("empty_periods");
            summary["files"] = manifest.at("files").size();
            summary["hash_mismatches"] = bad;
            std::cout << summary.dump(2) << "\n";
            if (!bad.empty()) {
                std::cerr << bad.size() << " file(s) do not match the manifest\n";
                return kDataError;
            }
        } else if (*serve) {
            std::optional<service::Service> svc;
            svc.emplace(service::ServiceOptions{data_dir, workers, threads});
            g_service = &svc;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "serving on " << host << ":" << port << ", data in " << data_dir << "\n";
            svc->listen(host, port);
            g_service = nullptr;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const CollisionError& e) {
        std::cerr << "error: collision on '" << e.token() << "': " << e.what() << "\n";
        return kDataError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
    return 0;
}
