#pragma once

#include "semnet/config.hpp"
#include "semnet/corpus.hpp"
#include "semnet/lexicon.hpp"
#include "semnet/network.hpp"
#include "semnet/sbs.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace semnet::analytics {

struct SliceResult {
    network::Period period;
    std::size_t documents = 0;
    std::size_t nodes = 0;  ///< after contraction
    std::size_t edges = 0;
    bool empty = false;     ///< no documents in the period; scores are zero
    sbs::SbsScores scores;
};

struct SbsTimeSeries {
    std::vector<std::string> clusters;  ///< lexicon order
    std::vector<SliceResult> slices;    ///< chronological
    std::string config_fingerprint;

    /// Entry for `cluster` in every period, in period order.
    std::vector<std::pair<std::string, sbs::SbsEntry>> series(std::string_view cluster) const;
    std::vector<std::string> empty_periods() const;
};

/// Hash of every result-affecting parameter plus the lexicon version and content.
std::string config_fingerprint(const PipelineConfig& cfg, const lexicon::Lexicon& lex);

/// Phrases kept as single tokens: lexicon keywords and multi-word country names.
std::vector<std::string> protected_phrases(const lexicon::Lexicon& lex);

/// Title and abstract of each document, normalized. Collocations are not applied.
std::vector<text::TokenSeq> normalize_documents(const corpus::DocumentSet& docs, const text::PrepConfig& prep,
                                                const text::PhraseMatcher& phrases);

/// Tokenize, collocate, build and contract one slice.
network::WordNetwork slice_network(const corpus::DocumentSet& docs, const lexicon::Lexicon& lex,
                                   const PipelineConfig& cfg, const std::string& period_label,
                                   const text::CollocationTable* global_collocations = nullptr);

/// Periods covered by the analysis: every year from the first to the last
/// publication year (yearly), or the configured ranges.
std::vector<network::Period> analysis_span(const corpus::DocumentSet& docs, const network::SliceSpec& spec);

SbsTimeSeries run_sbs_timeseries(const corpus::DocumentSet& docs, const lexicon::Lexicon& lex,
                                 const PipelineConfig& cfg);

/// Documents per year whose normalized abstract contains the normalized phrase.
/// Years with no match between the first and last publication year are present with 0.
std::map<int, std::size_t> term_mention_trend(const corpus::DocumentSet& docs, std::string_view phrase);
std::string trend_to_csv(const std::map<int, std::size_t>& trend);
std::string counts_to_csv(const std::map<int, std::size_t>& counts);

std::string timeseries_to_csv(const SbsTimeSeries& ts);
std::string population_stats_to_csv(const SbsTimeSeries& ts);

enum class RunStatus { Pending, Running, Done, Failed };

std::string_view status_name(RunStatus s);
RunStatus parse_status(std::string_view name);

/// Named artifact contents, in file-name order.
using Artifacts = std::map<std::string, std::string>;

class AnalysisRun {
public:
    AnalysisRun(std::string id, std::string corpus_ref, lexicon::Lexicon lex, PipelineConfig cfg);

    const std::string& id() const noexcept { return id_; }
    const std::string& corpus_ref() const noexcept { return corpus_ref_; }
    const lexicon::Lexicon& lexicon() const noexcept { return lexicon_; }
    const PipelineConfig& config() const noexcept { return config_; }
    RunStatus status() const noexcept { return status_; }
    const std::string& error() const noexcept { return error_; }
    const Artifacts& artifacts() const noexcept { return artifacts_; }

    /// Forward-only: pending -> running -> done | failed.
    void start();
    /// Runs the whole pipeline; on failure the run is marked failed and the error kept.
    void execute(const corpus::DocumentSet& docs);
    void fail(std::string message);

private:
    void advance(RunStatus to);

    std::string id_;
    std::string corpus_ref_;
    lexicon::Lexicon lexicon_;
    PipelineConfig config_;
    RunStatus status_ = RunStatus::Pending;
    std::string error_;
    Artifacts artifacts_;
};

/// Every export file including manifest.json. Deterministic for fixed inputs.
Artifacts build_bundle(const corpus::DocumentSet& docs, const lexicon::Lexicon& lex, const PipelineConfig& cfg);

/// Writes the artifacts of a done run into `dir` and returns the manifest text.
std::string export_bundle(const AnalysisRun& run, const std::filesystem::path& dir);
void write_artifacts(const Artifacts& files, const std::filesystem::path& dir);

/// Re-hashes the files listed in a bundle's manifest; returns mismatching names.
std::vector<std::string> verify_bundle(const std::filesystem::path& dir);

}  // namespace semnet::analytics
