#include "semnet/config.hpp"

#include "semnet/error.hpp"
#include "semnet/io.hpp"

#include <charconv>
#include <set>

namespace semnet {

CollocationScope parse_collocation_scope(std::string_view name) {
    if (name == "per-slice") return CollocationScope::PerSlice;
    if (name == "global") return CollocationScope::Global;
    throw ParseError("unknown collocation scope: " + std::string(name));
}

std::string_view collocation_scope_name(CollocationScope s) {
    return s == CollocationScope::PerSlice ? "per-slice" : "global";
}

void PipelineConfig::validate() const {
    slice.validate();
    if (min_token_len < 1) throw ParseError("min_token_len must be >= 1");
    if (collocation_min_count < 2) throw ParseError("collocation_min_count must be >= 2");
    if (!(collocation_threshold > 0.0)) throw ParseError("collocation_threshold must be > 0");
    if (!(resolution > 0.0)) throw ParseError("resolution must be > 0");
    if (topic_words < 1) throw ParseError("topic_words must be >= 1");
    if (dataset.empty()) throw ParseError("dataset name may not be empty");
}

text::PrepConfig PipelineConfig::prep() const {
    auto p = text::default_prep_config();
    p.stemmer = stemmer;
    p.min_token_len = min_token_len;
    p.collocation_min_count = collocation_min_count;
    p.collocation_score_threshold = collocation_threshold;
    return p;
}

sbs::SbsOptions PipelineConfig::sbs_options() const {
    sbs::SbsOptions o;
    o.population = population;
    o.prevalence = prevalence;
    o.betweenness.transform = transform;
    o.betweenness.threads = threads;
    return o;
}

nlohmann::ordered_json config_to_json(const PipelineConfig& cfg) {
    nlohmann::ordered_json j;
    j["granularity"] = std::string(network::granularity_name(cfg.slice.granularity));
    auto ranges = nlohmann::ordered_json::array();
    for (const auto& [lo, hi] : cfg.slice.ranges) ranges.push_back({lo, hi});
    j["ranges"] = ranges;
    j["window"] = cfg.slice.window;
    j["min_edge_weight"] = cfg.slice.min_edge_weight;
    j["min_node_freq"] = cfg.slice.min_node_freq;
    j["cooccurrence_counting"] = std::string(network::counting_name(cfg.slice.counting));
    j["stopwords"] = "builtin";
    j["stemmer"] = std::string(text::stemmer_name(cfg.stemmer));
    j["min_token_len"] = cfg.min_token_len;
    j["collocations"] = cfg.collocations;
    j["collocation_scope"] = std::string(collocation_scope_name(cfg.collocation_scope));
    j["collocation_min_count"] = cfg.collocation_min_count;
    j["collocation_threshold"] = cfg.collocation_threshold;
    j["population"] = std::string(sbs::population_name(cfg.population));
    j["weight_transform"] = std::string(sbs::transform_name(cfg.transform));
    j["prevalence"] = std::string(sbs::prevalence_mode_name(cfg.prevalence));
    j["seed"] = cfg.seed;
    j["resolution"] = cfg.resolution;
    j["topic_words"] = cfg.topic_words;
    j["topic_beta"] = cfg.topic_beta;
    j["dataset"] = cfg.dataset;
    return j;
}

PipelineConfig apply_config_json(PipelineConfig cfg, const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    static const std::set<std::string> kKnown{
        "granularity", "ranges", "window", "min_edge_weight", "min_node_freq", "cooccurrence_counting", "stopwords",
        "stemmer", "min_token_len", "collocations", "collocation_scope", "collocation_min_count",
        "collocation_threshold", "population", "weight_transform", "prevalence", "seed", "resolution", "topic_words",
        "topic_beta", "dataset", "threads"};
    try {
        for (const auto& [key, value] : j.items()) {
            if (!kKnown.count(key)) throw ParseError("unknown config key: " + key);
        }
        auto str = [&](const char* k) { return j.at(k).get<std::string>(); };
        if (j.contains("granularity")) cfg.slice.granularity = network::parse_granularity(str("granularity"));
        if (j.contains("ranges")) {
            cfg.slice.ranges.clear();
            for (const auto& r : j["ranges"]) cfg.slice.ranges.emplace_back(r.at(0).get<int>(), r.at(1).get<int>());
        }
        if (j.contains("window")) cfg.slice.window = j["window"].get<int>();
        if (j.contains("min_edge_weight")) cfg.slice.min_edge_weight = j["min_edge_weight"].get<std::int64_t>();
        if (j.contains("min_node_freq")) cfg.slice.min_node_freq = j["min_node_freq"].get<std::int64_t>();
        if (j.contains("cooccurrence_counting")) {
            cfg.slice.counting = network::parse_counting(str("cooccurrence_counting"));
        }
        if (j.contains("stopwords") && str("stopwords") != "builtin") {
            throw ParseError("only the builtin stopword list is supported in config files");
        }
        if (j.contains("stemmer")) cfg.stemmer = text::parse_stemmer(str("stemmer"));
        if (j.contains("min_token_len")) cfg.min_token_len = j["min_token_len"].get<std::size_t>();
        if (j.contains("collocations")) cfg.collocations = j["collocations"].get<bool>();
        if (j.contains("collocation_scope")) cfg.collocation_scope = parse_collocation_scope(str("collocation_scope"));
        if (j.contains("collocation_min_count")) cfg.collocation_min_count = j["collocation_min_count"].get<std::size_t>();
        if (j.contains("collocation_threshold")) cfg.collocation_threshold = j["collocation_threshold"].get<double>();
        if (j.contains("population")) cfg.population = sbs::parse_population(str("population"));
        if (j.contains("weight_transform")) cfg.transform = sbs::parse_transform(str("weight_transform"));
        if (j.contains("prevalence")) cfg.prevalence = sbs::parse_prevalence_mode(str("prevalence"));
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("resolution")) cfg.resolution = j["resolution"].get<double>();
        if (j.contains("topic_words")) cfg.topic_words = j["topic_words"].get<std::size_t>();
        if (j.contains("topic_beta")) cfg.topic_beta = j["topic_beta"].get<double>();
        if (j.contains("dataset")) cfg.dataset = str("dataset");
        if (j.contains("threads")) cfg.threads = j["threads"].get<unsigned>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::vector<std::pair<int, int>> parse_ranges(std::string_view text) {
    std::vector<std::pair<int, int>> out;
    for (const auto& part : io::split(text, ',')) {
        auto t = io::trim(part);
        if (t.empty()) continue;
        auto dash = t.find('-');
        auto number = [&](std::string_view s) {
            int v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError("bad period range: " + t);
            return v;
        };
        if (dash == std::string::npos) {
            const int y = number(t);
            out.emplace_back(y, y);
        } else {
            out.emplace_back(number(std::string_view(t).substr(0, dash)), number(std::string_view(t).substr(dash + 1)));
        }
    }
    if (out.empty()) throw ParseError("no period ranges given");
    return out;
}

}  // namespace semnet
