#pragma once

#include "semnet/network.hpp"
#include "semnet/sbs.hpp"
#include "semnet/textprep.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace semnet {

/// Where collocation statistics are gathered: inside each slice or over the whole corpus.
enum class CollocationScope { PerSlice, Global };

CollocationScope parse_collocation_scope(std::string_view name);
std::string_view collocation_scope_name(CollocationScope s);

/// Every knob of a pipeline run. Defaults are documented in README.md; the
/// effective configuration is echoed into the export manifest.
struct PipelineConfig {
    network::SliceSpec slice;

    text::StemmerKind stemmer = text::StemmerKind::Porter;
    std::size_t min_token_len = 2;
    bool collocations = true;
    CollocationScope collocation_scope = CollocationScope::PerSlice;
    std::size_t collocation_min_count = 5;
    double collocation_threshold = 3.0;

    sbs::Population population = sbs::Population::AllNodes;
    sbs::WeightTransform transform = sbs::WeightTransform::Inverse;
    sbs::PrevalenceMode prevalence = sbs::PrevalenceMode::Tokens;

    std::uint64_t seed = 42;
    double resolution = 1.0;
    std::size_t topic_words = 20;
    double topic_beta = 1.0;
    std::string dataset = "corpus";

    /// Worker cap for betweenness. Not echoed.
    unsigned threads = 0;

    void validate() const;
    text::PrepConfig prep() const;
    sbs::SbsOptions sbs_options() const;
};

/// Canonical parameter object (fixed key order).
nlohmann::ordered_json config_to_json(const PipelineConfig& cfg);
/// Applies the keys present in `j` on top of `base`; unknown keys are rejected.
PipelineConfig apply_config_json(PipelineConfig base, const nlohmann::json& j);

/// Parses "1996-2006,2007-2013" into inclusive ranges.
std::vector<std::pair<int, int>> parse_ranges(std::string_view text);

}  // namespace semnet
