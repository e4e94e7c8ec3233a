#pragma once

#include <filesystem>
#include <memory>
#include <string>

namespace semnet::service {

struct ServiceOptions {
    std::filesystem::path data_dir;
    unsigned workers = 1;      ///< concurrent analysis runs; 0 queues runs without executing them
    unsigned run_threads = 0;  ///< betweenness workers per run, 0 = all cores
};

/// REST facade over corpora, lexicons, suggestions and analysis runs. All state
/// lives under the data directory; unfinished runs are re-queued on start.
///
/// Error bodies are {"code", "message", "details"} with code one of:
/// bad-request, not-found, version-conflict, invalid-lexicon, invalid-corpus,
/// not-ready, run-failed, internal.
class Service {
public:
    explicit Service(ServiceOptions options);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds and serves in a background thread; returns the bound port
    /// (pass 0 for an ephemeral one). Throws IoError if the port is taken.
    int start(const std::string& host, int port);
    /// Serves on the calling thread until stop().
    void listen(const std::string& host, int port);
    void stop();

    /// Blocks until no run is queued or executing.
    void wait_idle();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace semnet::service
