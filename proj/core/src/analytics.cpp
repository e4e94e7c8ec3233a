#include "semnet/analytics.hpp"

#include "semnet/error.hpp"
#include "semnet/geo.hpp"
#include "semnet/io.hpp"
#include "semnet/topics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

namespace semnet::analytics {

std::vector<std::pair<std::string, sbs::SbsEntry>> SbsTimeSeries::series(std::string_view cluster) const {
    std::vector<std::pair<std::string, sbs::SbsEntry>> out;
    for (const auto& s : slices) {
        const auto* e = s.scores.find(cluster);
        if (!e) throw NotFoundError("no such cluster in series: " + std::string(cluster));
        out.emplace_back(s.period.label(), *e);
    }
    return out;
}

std::vector<std::string> SbsTimeSeries::empty_periods() const {
    std::vector<std::string> out;
    for (const auto& s : slices) {
        if (s.empty) out.push_back(s.period.label());
    }
    return out;
}

std::string config_fingerprint(const PipelineConfig& cfg, const lexicon::Lexicon& lex) {
    nlohmann::ordered_json j;
    j["parameters"] = config_to_json(cfg);
    j["lexicon_version"] = lex.version;
    j["lexicon_sha256"] = io::sha256_hex(lexicon::to_json(lex));
    return io::sha256_hex(j.dump());
}

std::vector<std::string> protected_phrases(const lexicon::Lexicon& lex) {
    auto phrases = lex.all_keywords();
    for (const auto& [country, forms] : geo::default_gazetteer().entries()) {
        for (const auto& f : forms) {
            if (text::split_words(f).size() > 1) phrases.push_back(f);
        }
    }
    return phrases;
}

std::vector<text::TokenSeq> normalize_documents(const corpus::DocumentSet& docs, const text::PrepConfig& prep,
                                                const text::PhraseMatcher& phrases) {
    std::vector<text::TokenSeq> seqs;
    seqs.reserve(docs.size());
    for (const auto& d : docs) {
        // Sentence break keeps title and abstract words from fusing into a phrase.
        seqs.push_back(text::tokenize_normalize(d.title + ". " + d.abstract_text, prep, phrases, d.id));
    }
    return seqs;
}

namespace {

std::vector<text::TokenSeq> collocate(std::vector<text::TokenSeq> seqs, const text::CollocationTable& table) {
    for (auto& s : seqs) s = text::apply_collocations(s, table);
    return seqs;
}

// A bigram containing a cluster keyword would hide the keyword from contraction.
text::CollocationTable without_keywords(text::CollocationTable table, const lexicon::Lexicon& lex) {
    std::set<std::string> members;
    for (const auto& c : lex.clusters) {
        for (auto& t : lex.member_tokens(c)) members.insert(std::move(t));
    }
    std::erase_if(table, [&](const auto& kv) { return members.count(kv.first.first) || members.count(kv.first.second); });
    return table;
}

std::vector<std::string> cluster_names(const lexicon::Lexicon& lex) {
    std::vector<std::string> out;
    for (const auto& c : lex.clusters) out.push_back(c.name);
    return out;
}

sbs::SbsScores zero_scores(const std::string& period, const std::vector<std::string>& clusters,
                           sbs::Population population) {
    sbs::SbsScores s;
    s.period = period;
    s.population = population;
    for (const auto& c : clusters) s.entries.push_back({c, 0.0, 0.0, 0.0, 0.0});
    return s;
}

text::CollocationTable global_table(const corpus::DocumentSet& docs, const lexicon::Lexicon& lex,
                                    const PipelineConfig& cfg) {
    const auto prep = cfg.prep();
    const text::PhraseMatcher phrases(protected_phrases(lex));
    return without_keywords(text::detect_collocations(normalize_documents(docs, prep, phrases), prep), lex);
}

template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < std::min<std::size_t>(workers, n); ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

unsigned worker_count(unsigned requested) {
    if (requested) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

network::WordNetwork slice_network(const corpus::DocumentSet& docs, const lexicon::Lexicon& lex,
                                   const PipelineConfig& cfg, const std::string& period_label,
                                   const text::CollocationTable* global_collocations) {
    const auto prep = cfg.prep();
    const text::PhraseMatcher phrases(protected_phrases(lex));
    auto seqs = normalize_documents(docs, prep, phrases);
    if (cfg.collocations) {
        if (global_collocations) {
            seqs = collocate(std::move(seqs), *global_collocations);
        } else {
            seqs = collocate(std::move(seqs), without_keywords(text::detect_collocations(seqs, prep), lex));
        }
    }
    auto net = network::build_cooccurrence(seqs, cfg.slice, period_label);
    return network::contract_clusters(net, lex);
}

std::vector<network::Period> analysis_span(const corpus::DocumentSet& docs, const network::SliceSpec& spec) {
    std::vector<network::Period> out;
    if (spec.granularity == network::Granularity::RangeList) {
        for (const auto& [a, b] : spec.ranges) out.push_back({a, b});
        std::sort(out.begin(), out.end());
        return out;
    }
    if (docs.empty()) return out;
    int lo = docs[0].year, hi = docs[0].year;
    for (const auto& d : docs) {
        lo = std::min(lo, d.year);
        hi = std::max(hi, d.year);
    }
    for (int y = lo; y <= hi; ++y) out.push_back({y, y});
    return out;
}

SbsTimeSeries run_sbs_timeseries(const corpus::DocumentSet& docs, const lexicon::Lexicon& lex,
                                 const PipelineConfig& cfg) {
    cfg.validate();
    lex.validate();
    if (docs.empty()) throw ParseError("corpus is empty");

    SbsTimeSeries ts;
    ts.clusters = cluster_names(lex);
    ts.config_fingerprint = config_fingerprint(cfg, lex);

    auto sliced = network::slice_by_period(docs, cfg.slice);
    const auto span = analysis_span(docs, cfg.slice);
    std::optional<text::CollocationTable> global;
    if (cfg.collocations && cfg.collocation_scope == CollocationScope::Global) global = global_table(docs, lex, cfg);

    const unsigned workers = worker_count(cfg.threads);
    const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, span.size())));
    auto opts = cfg.sbs_options();
    opts.betweenness.threads = std::max(1u, workers / outer);

    ts.slices.resize(span.size());
    parallel_for(span.size(), outer, [&](std::size_t i) {
        const auto& period = span[i];
        auto& out = ts.slices[i];
        out.period = period;
        const auto label = period.label();
        auto it = sliced.find(period);
        if (it == sliced.end() || it->second.empty()) {
            out.empty = true;
            out.scores = zero_scores(label, ts.clusters, cfg.population);
            return;
        }
        try {
            out.documents = it->second.size();
            auto net = slice_network(it->second, lex, cfg, label, global ? &*global : nullptr);
            out.nodes = net.node_count();
            out.edges = net.edge_count();
            out.scores = sbs::sbs_scores(net, ts.clusters, opts);
        } catch (const CollisionError& e) {
            throw CollisionError(e.token(), "period " + label + ": " + e.what());
        } catch (const NotFoundError& e) {
            throw NotFoundError("period " + label + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError("period " + label + ": " + e.what());
        } catch (const Error& e) {
            throw Error("period " + label + ": " + e.what());
        }
    });
    return ts;
}

std::map<int, std::size_t> term_mention_trend(const corpus::DocumentSet& docs, std::string_view phrase) {
    std::map<int, std::size_t> out;
    if (docs.empty()) return out;
    // stopwords kept
    auto prep = text::default_prep_config();
    prep.stopwords.clear();
    const text::PhraseMatcher none;
    const auto needle = text::tokenize_normalize(phrase, prep, none).tokens;
    int lo = docs[0].year, hi = docs[0].year;
    for (const auto& d : docs) {
        lo = std::min(lo, d.year);
        hi = std::max(hi, d.year);
    }
    for (int y = lo; y <= hi; ++y) out[y] = 0;
    if (needle.empty()) return out;
    for (const auto& d : docs) {
        const auto hay = text::tokenize_normalize(d.abstract_text, prep, none).tokens;
        if (std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end()) ++out[d.year];
    }
    return out;
}

std::string trend_to_csv(const std::map<int, std::size_t>& trend) {
    std::string out = "year,documents\n";
    for (const auto& [y, n] : trend) out += std::to_string(y) + "," + std::to_string(n) + "\n";
    return out;
}

std::string counts_to_csv(const std::map<int, std::size_t>& counts) {
    std::string out = "year,count\n";
    for (const auto& [y, n] : counts) out += std::to_string(y) + "," + std::to_string(n) + "\n";
    return out;
}

std::string timeseries_to_csv(const SbsTimeSeries& ts) {
    std::string out = "period,cluster,prevalence,diversity,connectivity,sbs\n";
    for (const auto& s : ts.slices) {
        for (const auto& e : s.scores.entries) {
            out += io::csv_line({s.period.label(), e.target, io::format_double(e.prevalence),
                                 io::format_double(e.diversity), io::format_double(e.connectivity),
                                 io::format_double(e.sbs)});
        }
    }
    return out;
}

std::string population_stats_to_csv(const SbsTimeSeries& ts) {
    std::string out =
        "period,population,size,prevalence_mean,prevalence_std,diversity_mean,diversity_std,connectivity_mean,"
        "connectivity_std,empty\n";
    for (const auto& s : ts.slices) {
        const auto& st = s.scores.stats;
        out += io::csv_line({s.period.label(), std::string(sbs::population_name(s.scores.population)),
                             std::to_string(st.size), io::format_double(st.prevalence.mean),
                             io::format_double(st.prevalence.std), io::format_double(st.diversity.mean),
                             io::format_double(st.diversity.std), io::format_double(st.connectivity.mean),
                             io::format_double(st.connectivity.std), s.empty ? "true" : "false"});
    }
    return out;
}

std::string_view status_name(RunStatus s) {
    switch (s) {
        case RunStatus::Pending: return "pending";
        case RunStatus::Running: return "running";
        case RunStatus::Done: return "done";
        case RunStatus::Failed: return "failed";
    }
    return "";
}

RunStatus parse_status(std::string_view name) {
    if (name == "pending") return RunStatus::Pending;
    if (name == "running") return RunStatus::Running;
    if (name == "done") return RunStatus::Done;
    if (name == "failed") return RunStatus::Failed;
    throw ParseError("unknown run status: " + std::string(name));
}

AnalysisRun::AnalysisRun(std::string id, std::string corpus_ref, lexicon::Lexicon lex, PipelineConfig cfg)
    : id_(std::move(id)), corpus_ref_(std::move(corpus_ref)), lexicon_(std::move(lex)), config_(std::move(cfg)) {}

void AnalysisRun::advance(RunStatus to) {
    const bool ok = (status_ == RunStatus::Pending && to == RunStatus::Running) ||
                    (status_ == RunStatus::Running && (to == RunStatus::Done || to == RunStatus::Failed)) ||
                    (status_ == RunStatus::Pending && to == RunStatus::Failed);
    if (!ok) {
        throw Error("illegal run transition " + std::string(status_name(status_)) + " -> " +
                    std::string(status_name(to)));
    }
    status_ = to;
}

void AnalysisRun::start() { advance(RunStatus::Running); }

void AnalysisRun::execute(const corpus::DocumentSet& docs) {
    if (status_ == RunStatus::Pending) start();
    if (status_ != RunStatus::Running) throw Error("run " + id_ + " is not runnable");
    try {
        auto files = build_bundle(docs, lexicon_, config_);
        artifacts_ = std::move(files);
        advance(RunStatus::Done);
    } catch (const std::exception& e) {
        fail(e.what());
    }
}

void AnalysisRun::fail(std::string message) {
    advance(RunStatus::Failed);
    error_ = std::move(message);
    artifacts_.clear();
}

Artifacts build_bundle(const corpus::DocumentSet& docs, const lexicon::Lexicon& lex, const PipelineConfig& cfg) {
    const auto ts = run_sbs_timeseries(docs, lex, cfg);
    Artifacts files;
    files["counts_by_year.csv"] = counts_to_csv(corpus::count_by_year(docs));
    files["sbs_timeseries.csv"] = timeseries_to_csv(ts);
    files["sbs_population_stats.csv"] = population_stats_to_csv(ts);

    // Topics over the whole corpus.
    const auto net = [&] {
        const auto prep = cfg.prep();
        const text::PhraseMatcher phrases(protected_phrases(lex));
        auto seqs = normalize_documents(docs, prep, phrases);
        if (cfg.collocations) seqs = collocate(std::move(seqs), text::detect_collocations(seqs, prep));
        return network::build_cooccurrence(seqs, cfg.slice, "all");
    }();
    auto part = topics::louvain(net, cfg.seed, cfg.resolution);
    topics::rank_all(net, part, cfg.topic_words, cfg.topic_beta);
    files["topics.json"] = topics::topics_to_json(net, part);

    files["geo_counts.csv"] =
        geo::counts_to_csv({{cfg.dataset, geo::country_counts(docs, geo::default_gazetteer())}});

    nlohmann::ordered_json m;
    m["format"] = "semnet-bundle/1";
    m["fingerprint"] = ts.config_fingerprint;
    m["parameters"] = config_to_json(cfg);
    m["lexicon"] = {{"version", lex.version}, {"sha256", io::sha256_hex(lexicon::to_json(lex))}};
    m["corpus"] = {{"sha256", docs.content_hash()}, {"documents", docs.size()}};
    auto periods = nlohmann::ordered_json::array();
    for (const auto& s : ts.slices) {
        periods.push_back({{"period", s.period.label()},
                           {"documents", s.documents},
                           {"nodes", s.nodes},
                           {"edges", s.edges},
                           {"empty", s.empty}});
    }
    m["periods"] = periods;
    m["empty_periods"] = ts.empty_periods();
    auto listed = nlohmann::ordered_json::array();
    for (const auto& [name, content] : files) {
        listed.push_back({{"name", name}, {"sha256", io::sha256_hex(content)}, {"bytes", content.size()}});
    }
    m["files"] = listed;
    files["manifest.json"] = m.dump(2) + "\n";
    return files;
}

void write_artifacts(const Artifacts& files, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (const auto& [name, content] : files) io::write_file_atomic(dir / name, content);
}

std::string export_bundle(const AnalysisRun& run, const std::filesystem::path& dir) {
    if (run.status() != RunStatus::Done) throw Error("run " + run.id() + " is not done");
    write_artifacts(run.artifacts(), dir);
    return run.artifacts().at("manifest.json");
}

std::vector<std::string> verify_bundle(const std::filesystem::path& dir) {
    std::vector<std::string> bad;
    nlohmann::json m;
    try {
        m = nlohmann::json::parse(io::read_file(dir / "manifest.json"));
        for (const auto& f : m.at("files")) {
            const auto name = f.at("name").get<std::string>();
            std::string content;
            try {
                content = io::read_file(dir / name);
            } catch (const IoError&) {
                bad.push_back(name);
                continue;
            }
            if (io::sha256_hex(content) != f.at("sha256").get<std::string>()) bad.push_back(name);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid manifest: ") + e.what());
    }
    return bad;
}

}  // namespace semnet::analytics
