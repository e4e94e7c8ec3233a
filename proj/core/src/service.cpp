#include "semnet/service.hpp"

#include "semnet/analytics.hpp"
#include "semnet/config.hpp"
#include "semnet/corpus.hpp"
#include "semnet/error.hpp"
#include "semnet/io.hpp"
#include "semnet/lexicon.hpp"
#include "semnet/suggest.hpp"
#include "semnet/zip.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <sys/socket.h>

#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <thread>

namespace semnet::service {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Thrown inside handlers; becomes an error body.
struct ApiError {
    int status;
    std::string code;
    std::string message;
    json details = nullptr;
};

Response json_response(int status, const ordered_json& body) { return {status, body.dump(2) + "\n"}; }

Response error_response(const ApiError& e) {
    ordered_json j;
    j["code"] = e.code;
    j["message"] = e.message;
    j["details"] = e.details;
    return json_response(e.status, j);
}

json parse_body(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        throw ApiError{400, "bad-request", std::string("malformed JSON body: ") + e.what()};
    }
}

bool valid_id(const std::string& id) {
    if (id.empty() || id.size() > 64) return false;
    for (char c : id) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-') return false;
    }
    return true;
}

struct RunRecord {
    std::string id;
    std::string corpus_id;
    std::string lexicon_id;
    std::int64_t lexicon_version = 0;
    ordered_json parameters;
    std::string fingerprint;
    analytics::RunStatus status = analytics::RunStatus::Pending;
    std::string error;
    std::vector<std::string> artifacts;

    ordered_json to_json() const {
        ordered_json j;
        j["id"] = id;
        j["status"] = std::string(analytics::status_name(status));
        j["corpus_id"] = corpus_id;
        j["lexicon_id"] = lexicon_id;
        j["lexicon_version"] = lexicon_version;
        j["fingerprint"] = fingerprint;
        j["parameters"] = parameters;
        j["error"] = error;
        j["artifacts"] = artifacts;
        return j;
    }

    static RunRecord from_json(const json& j) {
        RunRecord r;
        r.id = j.at("id").get<std::string>();
        r.status = analytics::parse_status(j.at("status").get<std::string>());
        r.corpus_id = j.at("corpus_id").get<std::string>();
        r.lexicon_id = j.at("lexicon_id").get<std::string>();
        r.lexicon_version = j.at("lexicon_version").get<std::int64_t>();
        r.fingerprint = j.value("fingerprint", "");
        r.parameters = ordered_json::parse(j.at("parameters").dump());
        r.error = j.value("error", "");
        r.artifacts = j.value("artifacts", std::vector<std::string>{});
        return r;
    }
};

}  // namespace

struct Service::Impl {
    ServiceOptions opts;
    fs::path root;

    std::mutex mu;  // guards everything below except lexicon_locks' mutexes
    std::int64_t next_lexicon = 1;
    std::int64_t next_run = 1;
    std::map<std::string, Response> idempotent;  // "METHOD path key" -> stored response
    std::map<std::string, RunRecord> runs;
    std::map<std::string, std::unique_ptr<std::mutex>> lexicon_locks;

    std::deque<std::string> queue;
    std::size_t active = 0;
    bool stopping = false;
    std::condition_variable queue_cv;
    std::condition_variable idle_cv;
    std::vector<std::jthread> workers;

    httplib::Server server;
    std::jthread server_thread;

    explicit Impl(ServiceOptions o) : opts(std::move(o)), root(opts.data_dir) {
        std::error_code ec;
        for (const char* sub : {"corpora", "lexicons", "runs"}) {
            fs::create_directories(root / sub, ec);
            if (ec) throw IoError("cannot create data directory " + (root / sub).string() + ": " + ec.message());
        }
        load_state();
        routes();
        for (unsigned i = 0; i < opts.workers; ++i) {
            workers.emplace_back([this] { worker_loop(); });
        }
    }

    ~Impl() {
        server.stop();
        if (server_thread.joinable()) server_thread.join();
        {
            std::lock_guard lock(mu);
            stopping = true;
        }
        queue_cv.notify_all();
        workers.clear();
    }

    // ---- persistence ----

    fs::path index_path() const { return root / "index.json"; }

    void save_index() {
        ordered_json j;
        j["next_lexicon"] = next_lexicon;
        j["next_run"] = next_run;
        ordered_json idem = ordered_json::object();
        for (const auto& [key, r] : idempotent) {
            idem[key] = {{"status", r.status}, {"body", r.body}, {"content_type", r.content_type}};
        }
        j["idempotency"] = idem;
        io::write_file_atomic(index_path(), j.dump(2) + "\n");
    }

    void save_run(const RunRecord& r) { io::write_file_atomic(root / "runs" / r.id / "run.json", r.to_json().dump(2) + "\n"); }

    void load_state() {
        if (fs::exists(index_path())) {
            try {
                auto j = json::parse(io::read_file(index_path()));
                next_lexicon = j.value("next_lexicon", std::int64_t{1});
                next_run = j.value("next_run", std::int64_t{1});
                const auto stored = j.value("idempotency", json::object());
                for (const auto& [key, v] : stored.items()) {
                    idempotent[key] = {v.at("status").get<int>(), v.at("body").get<std::string>(),
                                       v.at("content_type").get<std::string>()};
                }
            } catch (const json::exception& e) {
                throw ParseError(std::string("corrupt service index: ") + e.what());
            }
        } else {
            save_index();
        }
        for (const auto& entry : fs::directory_iterator(root / "runs")) {
            const auto meta = entry.path() / "run.json";
            if (!entry.is_directory() || !fs::exists(meta)) {
                // Leftover of an interrupted run publication.
                if (entry.path().filename().string().ends_with(".tmp")) fs::remove_all(entry.path());
                continue;
            }
            auto r = RunRecord::from_json(json::parse(io::read_file(meta)));
            if (r.status == analytics::RunStatus::Running || r.status == analytics::RunStatus::Pending) {
                r.status = analytics::RunStatus::Pending;
                save_run(r);
                queue.push_back(r.id);
            }
            runs[r.id] = std::move(r);
        }
    }

    // ---- corpora ----

    fs::path corpus_path(const std::string& id) const { return root / "corpora" / (id + ".jsonl"); }

    corpus::DocumentSet load_corpus(const std::string& id) {
        if (!valid_id(id) || !fs::exists(corpus_path(id))) throw ApiError{404, "not-found", "unknown corpus: " + id};
        auto meta = json::parse(io::read_file(root / "corpora" / (id + ".json")));
        auto res = corpus::ingest_text(io::read_file(corpus_path(id)), corpus::Profile::GenericJsonl, id);
        return corpus::DocumentSet(res.documents.documents(),
                                   meta.at("provenance").get<std::vector<std::string>>());
    }

    ordered_json store_corpus(const corpus::DocumentSet& docs, const ordered_json& extra) {
        const auto id = "c-" + docs.content_hash().substr(0, 16);
        ordered_json meta;
        meta["id"] = id;
        meta["documents"] = docs.size();
        meta["content_hash"] = docs.content_hash();
        for (const auto& [k, v] : extra.items()) meta[k] = v;
        meta["provenance"] = docs.provenance();
        std::lock_guard lock(mu);
        if (!fs::exists(corpus_path(id))) {
            io::write_file_atomic(corpus_path(id), docs.to_jsonl());
            io::write_file_atomic(root / "corpora" / (id + ".json"), meta.dump(2) + "\n");
        }
        return meta;
    }

    Response post_corpus(const httplib::Request& req) {
        corpus::Profile profile = corpus::Profile::GenericJsonl;
        try {
            if (req.has_param("profile")) profile = corpus::parse_profile(req.get_param_value("profile"));
        } catch (const Error& e) {
            throw ApiError{400, "bad-request", e.what()};
        }
        corpus::IngestResult res;
        try {
            res = corpus::ingest_text(req.body, profile, req.has_param("source") ? req.get_param_value("source") : "upload");
        } catch (const Error& e) {
            throw ApiError{422, "invalid-corpus", e.what()};
        }
        ordered_json extra;
        extra["profile"] = std::string(corpus::profile_name(profile));
        extra["rejected"] = res.rejected;
        extra["duplicates"] = res.duplicates;
        return json_response(201, store_corpus(res.documents, extra));
    }

    Response corpus_stats(const std::string& id) {
        const auto docs = load_corpus(id);
        ordered_json j;
        j["id"] = id;
        j["documents"] = docs.size();
        j["content_hash"] = docs.content_hash();
        ordered_json years = ordered_json::object();
        for (const auto& [y, n] : corpus::count_by_year(docs)) years[std::to_string(y)] = n;
        j["counts_by_year"] = years;
        j["provenance"] = docs.provenance();
        return json_response(200, j);
    }

    Response filter_corpus(const std::string& id, const httplib::Request& req) {
        const auto docs = load_corpus(id);
        corpus::KeywordQuery q;
        try {
            q = corpus::query_from_json(req.body);
        } catch (const Error& e) {
            throw ApiError{400, "bad-request", e.what()};
        }
        const auto filtered = corpus::filter_query(docs, q);
        if (filtered.empty()) throw ApiError{422, "invalid-corpus", "query matched no documents"};
        ordered_json extra;
        extra["parent"] = id;
        extra["query"] = ordered_json::parse(corpus::query_to_json(q));
        return json_response(201, store_corpus(filtered, extra));
    }

    // ---- lexicons ----

    fs::path lexicon_dir(const std::string& id) const { return root / "lexicons" / id; }
    fs::path lexicon_file(const std::string& id, std::int64_t v) const {
        return lexicon_dir(id) / ("v" + std::to_string(v) + ".json");
    }

    std::int64_t latest_version(const std::string& id) {
        if (!valid_id(id) || !fs::is_directory(lexicon_dir(id))) throw ApiError{404, "not-found", "unknown lexicon: " + id};
        std::int64_t v = 0;
        while (fs::exists(lexicon_file(id, v + 1))) ++v;
        return v;
    }

    lexicon::Lexicon load_lexicon(const std::string& id, std::int64_t version) {
        const auto latest = latest_version(id);
        if (version < 1 || version > latest) {
            throw ApiError{409, "version-conflict", "lexicon " + id + " has no version " + std::to_string(version),
                           {{"latest_version", latest}}};
        }
        return lexicon::from_json(io::read_file(lexicon_file(id, version)));
    }

    std::mutex& lexicon_lock(const std::string& id) {
        std::lock_guard lock(mu);
        auto& m = lexicon_locks[id];
        if (!m) m = std::make_unique<std::mutex>();
        return *m;
    }

    static ApiError invalid_lexicon(const Error& e) {
        ApiError err{422, "invalid-lexicon", e.what()};
        if (const auto* c = dynamic_cast<const CollisionError*>(&e)) err.details = {{"token", c->token()}};
        return err;
    }

    Response post_lexicon(const httplib::Request& req) {
        lexicon::Lexicon lex;
        try {
            lex = lexicon::from_json(req.body);
        } catch (const Error& e) {
            throw invalid_lexicon(e);
        }
        lex.version = 1;
        std::string id;
        {
            std::lock_guard lock(mu);
            id = "lex-" + std::to_string(next_lexicon++);
            save_index();
        }
        fs::create_directories(lexicon_dir(id));
        io::write_file_atomic(lexicon_file(id, 1), lexicon::to_json(lex));
        ordered_json j;
        j["id"] = id;
        j["version"] = lex.version;
        j["lexicon"] = ordered_json::parse(lexicon::to_json(lex));
        return json_response(201, j);
    }

    Response get_lexicon(const std::string& id, const httplib::Request& req) {
        std::int64_t v = latest_version(id);
        if (req.has_param("version")) {
            try {
                v = std::stoll(req.get_param_value("version"));
            } catch (const std::exception&) {
                throw ApiError{400, "bad-request", "version must be an integer"};
            }
            if (v < 1 || !fs::exists(lexicon_file(id, v))) {
                throw ApiError{404, "not-found", "lexicon " + id + " has no version " + std::to_string(v)};
            }
        }
        return {200, io::read_file(lexicon_file(id, v))};
    }

    Response put_lexicon(const std::string& id, const httplib::Request& req) {
        const auto body = parse_body(req.body);
        if (!body.contains("base_version") || !body["base_version"].is_number_integer()) {
            throw ApiError{400, "bad-request", "base_version is required"};
        }
        const auto base = body["base_version"].get<std::int64_t>();
        std::lock_guard edit(lexicon_lock(id));
        const auto latest = latest_version(id);
        if (base != latest) {
            throw ApiError{409, "version-conflict",
                           "stale base_version " + std::to_string(base) + ", latest is " + std::to_string(latest),
                           {{"latest_version", latest}}};
        }
        lexicon::Lexicon next;
        try {
            const auto current = lexicon::from_json(io::read_file(lexicon_file(id, latest)));
            if (body.contains("lexicon")) {
                next = lexicon::from_json(body["lexicon"].dump());
                next.version = latest + 1;
            } else if (body.contains("cluster")) {
                next = lexicon::edit_cluster(current, body["cluster"].get<std::string>(),
                                             body.value("add", std::vector<std::string>{}),
                                             body.value("remove", std::vector<std::string>{}));
            } else {
                throw ApiError{400, "bad-request", "body needs either 'lexicon' or 'cluster'"};
            }
        } catch (const NotFoundError& e) {
            throw ApiError{404, "not-found", e.what()};
        } catch (const Error& e) {
            throw invalid_lexicon(e);
        } catch (const json::exception& e) {
            throw ApiError{400, "bad-request", e.what()};
        }
        io::write_file_atomic(lexicon_file(id, next.version), lexicon::to_json(next));
        ordered_json j;
        j["id"] = id;
        j["version"] = next.version;
        j["lexicon"] = ordered_json::parse(lexicon::to_json(next));
        return json_response(200, j);
    }

    // ---- suggestions ----

    Response suggest(const httplib::Request& req) {
        if (!req.has_param("term")) throw ApiError{400, "bad-request", "term is required"};
        const auto term = req.get_param_value("term");
        const auto provider_name = req.has_param("provider") ? req.get_param_value("provider") : "external";
        std::size_t k = 10;
        if (req.has_param("k")) {
            try {
                k = std::stoul(req.get_param_value("k"));
            } catch (const std::exception&) {
                throw ApiError{400, "bad-request", "k must be a positive integer"};
            }
        }
        std::optional<lexicon::Lexicon> lex;
        if (req.has_param("lexicon")) {
            const auto lid = req.get_param_value("lexicon");
            const auto v = req.has_param("version") ? std::stoll(req.get_param_value("version")) : latest_version(lid);
            lex = load_lexicon(lid, v);
        }
        std::unique_ptr<lexicon::SuggestionProvider> provider;
        if (provider_name == "external") {
            provider = std::make_unique<lexicon::FixtureProvider>(lexicon::FixtureProvider::builtin());
        } else if (provider_name == "cooccurrence-pmi") {
            if (!req.has_param("corpus")) throw ApiError{400, "bad-request", "cooccurrence-pmi needs corpus"};
            const auto docs = load_corpus(req.get_param_value("corpus"));
            const auto used = lex ? *lex : lexicon::Lexicon{};
            PipelineConfig cfg;
            const text::PhraseMatcher phrases(analytics::protected_phrases(used));
            auto seqs = analytics::normalize_documents(docs, cfg.prep(), phrases);
            auto net = std::make_shared<const network::WordNetwork>(network::build_cooccurrence(seqs, cfg.slice));
            provider = std::make_unique<lexicon::CooccurrencePmiProvider>(net, cfg.prep());
        } else {
            throw ApiError{400, "bad-request", "unknown provider: " + provider_name};
        }
        try {
            return {200, lexicon::suggestions_to_json(lexicon::suggest_terms(term, *provider, k, lex ? &*lex : nullptr))};
        } catch (const Error& e) {
            throw ApiError{400, "bad-request", e.what()};
        }
    }

    // ---- runs ----

    Response post_run(const httplib::Request& req) {
        const auto body = parse_body(req.body);
        RunRecord r;
        PipelineConfig cfg;
        try {
            r.corpus_id = body.at("corpus_id").get<std::string>();
            r.lexicon_id = body.at("lexicon_id").get<std::string>();
            if (!body.contains("lexicon_version")) throw ApiError{400, "bad-request", "lexicon_version is required"};
            r.lexicon_version = body.at("lexicon_version").get<std::int64_t>();
            if (body.contains("config")) cfg = apply_config_json(cfg, body["config"]);
            if (body.contains("seed")) cfg.seed = body["seed"].get<std::uint64_t>();
            cfg.validate();
        } catch (const json::exception& e) {
            throw ApiError{400, "bad-request", e.what()};
        } catch (const Error& e) {
            throw ApiError{400, "bad-request", e.what()};
        }
        load_corpus(r.corpus_id);
        const auto lex = load_lexicon(r.lexicon_id, r.lexicon_version);
        r.parameters = config_to_json(cfg);
        r.fingerprint = analytics::config_fingerprint(cfg, lex);
        {
            std::lock_guard lock(mu);
            r.id = "run-" + std::to_string(next_run++);
            save_index();
            fs::create_directories(root / "runs" / r.id);
            save_run(r);
            runs[r.id] = r;
            queue.push_back(r.id);
        }
        queue_cv.notify_one();
        return json_response(202, r.to_json());
    }

    RunRecord get_run_record(const std::string& id) {
        std::lock_guard lock(mu);
        auto it = runs.find(id);
        if (it == runs.end()) throw ApiError{404, "not-found", "unknown run: " + id};
        return it->second;
    }

    Response run_result(const std::string& id, const std::string& artifact) {
        const auto r = get_run_record(id);
        if (r.status == analytics::RunStatus::Failed) throw ApiError{409, "run-failed", r.error};
        if (r.status != analytics::RunStatus::Done) return json_response(200, ordered_json{{"status", "running"}});
        if (std::find(r.artifacts.begin(), r.artifacts.end(), artifact) == r.artifacts.end()) {
            throw ApiError{404, "not-found", "no artifact " + artifact + " in run " + id};
        }
        Response res{200, io::read_file(root / "runs" / id / "bundle" / artifact)};
        if (artifact.ends_with(".csv")) res.content_type = "text/csv";
        return res;
    }

    Response run_bundle(const std::string& id) {
        const auto r = get_run_record(id);
        if (r.status == analytics::RunStatus::Failed) throw ApiError{409, "run-failed", r.error};
        if (r.status != analytics::RunStatus::Done) throw ApiError{409, "not-ready", "run " + id + " is not done"};
        std::map<std::string, std::string> files;
        for (const auto& name : r.artifacts) files[name] = io::read_file(root / "runs" / id / "bundle" / name);
        return {200, io::zip_store(files), "application/zip"};
    }

    void execute(const std::string& id) {
        RunRecord r;
        {
            std::lock_guard lock(mu);
            r = runs.at(id);
            r.status = analytics::RunStatus::Running;
            runs[id] = r;
            save_run(r);
        }
        const fs::path staging = root / "runs" / (id + ".tmp");
        try {
            const auto docs = load_corpus(r.corpus_id);
            const auto lex = load_lexicon(r.lexicon_id, r.lexicon_version);
            auto cfg = apply_config_json(PipelineConfig{}, json::parse(r.parameters.dump()));
            cfg.threads = opts.run_threads;
            analytics::AnalysisRun run(id, r.corpus_id, lex, cfg);
            run.execute(docs);
            if (run.status() != analytics::RunStatus::Done) throw Error(run.error());
            fs::remove_all(staging);
            analytics::export_bundle(run, staging);
            fs::remove_all(root / "runs" / id / "bundle");
            fs::rename(staging, root / "runs" / id / "bundle");
            r.status = analytics::RunStatus::Done;
            for (const auto& [name, content] : run.artifacts()) r.artifacts.push_back(name);
        } catch (const ApiError& e) {
            r.status = analytics::RunStatus::Failed;
            r.error = e.message;
        } catch (const std::exception& e) {
            r.status = analytics::RunStatus::Failed;
            r.error = e.what();
        }
        std::error_code ec;
        fs::remove_all(staging, ec);
        std::lock_guard lock(mu);
        save_run(r);
        runs[id] = r;
    }

    void worker_loop() {
        for (;;) {
            std::string id;
            {
                std::unique_lock lock(mu);
                queue_cv.wait(lock, [&] { return stopping || !queue.empty(); });
                if (stopping) return;
                id = queue.front();
                queue.pop_front();
                ++active;
            }
            execute(id);
            {
                std::lock_guard lock(mu);
                --active;
            }
            idle_cv.notify_all();
        }
    }

    // ---- routing ----

    using Handler = std::function<Response(const httplib::Request&)>;

    /// Wraps a handler with error mapping and, for mutating calls, replay of
    /// responses stored under the client's request id.
    httplib::Server::Handler wrap(Handler h, bool mutating) {
        return [this, h = std::move(h), mutating](const httplib::Request& req, httplib::Response& res) {
            std::string key;
            if (mutating) {
                key = req.get_header_value("Idempotency-Key");
                if (key.empty() && !req.body.empty() && req.body.front() == '{') {
                    auto j = json::parse(req.body, nullptr, false);
                    if (j.is_object() && j.contains("request_id") && j["request_id"].is_string()) {
                        key = j["request_id"].get<std::string>();
                    }
                }
                if (!key.empty()) {
                    key = req.method + " " + req.path + " " + key;
                    std::lock_guard lock(mu);
                    if (auto it = idempotent.find(key); it != idempotent.end()) {
                        res.status = it->second.status;
                        res.set_content(it->second.body, it->second.content_type);
                        return;
                    }
                }
            }
            Response out;
            try {
                out = h(req);
            } catch (const ApiError& e) {
                out = error_response(e);
            } catch (const NotFoundError& e) {
                out = error_response({404, "not-found", e.what()});
            } catch (const Error& e) {
                out = error_response({400, "bad-request", e.what()});
            } catch (const std::exception& e) {
                out = error_response({500, "internal", e.what()});
            }
            if (!key.empty() && out.status < 500) {
                std::lock_guard lock(mu);
                idempotent[key] = out;
                save_index();
            }
            res.status = out.status;
            res.set_content(out.body, out.content_type);
        };
    }

    void routes() {
        server.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
        });
        server.Post("/corpora", wrap([this](const auto& req) { return post_corpus(req); }, true));
        server.Get(R"(/corpora/([^/]+)/stats)",
                   wrap([this](const auto& req) { return corpus_stats(req.matches[1]); }, false));
        server.Post(R"(/corpora/([^/]+)/filter)",
                    wrap([this](const auto& req) { return filter_corpus(req.matches[1], req); }, true));
        server.Post("/lexicons", wrap([this](const auto& req) { return post_lexicon(req); }, true));
        server.Get(R"(/lexicons/([^/]+))",
                   wrap([this](const auto& req) { return get_lexicon(req.matches[1], req); }, false));
        server.Put(R"(/lexicons/([^/]+))",
                   wrap([this](const auto& req) { return put_lexicon(req.matches[1], req); }, true));
        server.Get("/suggest", wrap([this](const auto& req) { return suggest(req); }, false));
        server.Post("/runs", wrap([this](const auto& req) { return post_run(req); }, true));
        server.Get(R"(/runs/([^/]+))",
                   wrap([this](const auto& req) { return json_response(200, get_run_record(req.matches[1]).to_json()); },
                        false));
        server.Get(R"(/runs/([^/]+)/results/([^/]+))",
                   wrap([this](const auto& req) { return run_result(req.matches[1], req.matches[2]); }, false));
        server.Get(R"(/runs/([^/]+)/bundle)",
                   wrap([this](const auto& req) { return run_bundle(req.matches[1]); }, false));
        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (!res.body.empty()) return;
            const std::string code = res.status == 404 ? "not-found" : res.status < 500 ? "bad-request" : "internal";
            res.set_content(ordered_json{{"code", code}, {"message", httplib::status_message(res.status)},
                                         {"details", nullptr}}
                                    .dump(2) +
                                "\n",
                            "application/json");
        });
    }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() = default;

int Service::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) throw IoError("cannot bind " + host);
    } else if (!impl_->server.bind_to_port(host, port)) {
        throw IoError("cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
    }
    impl_->server_thread = std::jthread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void Service::listen(const std::string& host, int port) {
    if (!impl_->server.bind_to_port(host, port)) {
        throw IoError("cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
    }
    impl_->server.listen_after_bind();
}

void Service::stop() { impl_->server.stop(); }

void Service::wait_idle() {
    std::unique_lock lock(impl_->mu);
    impl_->idle_cv.wait(lock, [&] { return impl_->queue.empty() && impl_->active == 0; });
}

}  // namespace semnet::service
