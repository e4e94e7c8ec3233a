#pragma once

#include "semnet/network.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace semnet::sbs {

/// Edge length used for shortest paths: 1/w (strong ties are short) or 1.
enum class WeightTransform { Inverse, Unit };
enum class Population { AllNodes, TargetsOnly };
enum class PrevalenceMode { Tokens, Documents };

WeightTransform parse_transform(std::string_view name);
std::string_view transform_name(WeightTransform t);
Population parse_population(std::string_view name);
std::string_view population_name(Population p);
PrevalenceMode parse_prevalence_mode(std::string_view name);
std::string_view prevalence_mode_name(PrevalenceMode m);

/// Two accumulated path lengths closer than this are the same length.
inline constexpr double kDistanceTolerance = 1e-12;

double prevalence(const network::WordNetwork& net, std::string_view target,
                  PrevalenceMode mode = PrevalenceMode::Tokens);

/// Sum over neighbors j of log10((n - 1) / g_j), g_j the unweighted degree.
double distinctiveness(const network::WordNetwork& net, std::string_view target);
std::vector<double> distinctiveness_all(const network::WordNetwork& net);

struct BetweennessOptions {
    WeightTransform transform = WeightTransform::Inverse;
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Weighted betweenness of every node (Brandes accumulation, each unordered
/// pair counted once). Sources are processed in fixed blocks whose partial
/// sums are merged in block order; the result is bit-identical for any
/// thread count.
std::vector<double> betweenness_all(const network::WordNetwork& net, const BetweennessOptions& opts = {});

std::map<std::string, double> connectivity(const network::WordNetwork& net, const std::vector<std::string>& targets,
                                           const BetweennessOptions& opts = {});

struct DimensionStats {
    double mean = 0.0;
    double std = 0.0;  ///< population standard deviation; 0 means the dimension is constant

    /// z-score, defined as 0 for a constant dimension.
    double z(double value) const { return std == 0.0 ? 0.0 : (value - mean) / std; }
};

DimensionStats dimension_stats(const std::vector<double>& values);

struct PopulationStats {
    std::size_t size = 0;
    DimensionStats prevalence;
    DimensionStats diversity;
    DimensionStats connectivity;
};

struct SbsEntry {
    std::string target;
    double prevalence = 0.0;
    double diversity = 0.0;
    double connectivity = 0.0;
    double sbs = 0.0;
};

struct SbsScores {
    std::string period;
    Population population = Population::AllNodes;
    PopulationStats stats;
    std::vector<SbsEntry> entries;  ///< in target order

    const SbsEntry* find(std::string_view target) const;
    /// z-score sum recomputed from the stored population statistics.
    double recompute(const SbsEntry& e) const;
};

struct SbsOptions {
    Population population = Population::AllNodes;
    PrevalenceMode prevalence = PrevalenceMode::Tokens;
    BetweennessOptions betweenness;
};

/// Raw dimensions of every node, in node-id order.
struct NodeDimensions {
    std::vector<double> prevalence;
    std::vector<double> diversity;
    std::vector<double> connectivity;
};

NodeDimensions node_dimensions(const network::WordNetwork& net, const SbsOptions& opts = {});

/// Throws NotFoundError for unknown targets and ParseError for an empty population.
SbsScores sbs_scores(const network::WordNetwork& net, const std::vector<std::string>& targets,
                     const SbsOptions& opts = {});

std::string scores_to_csv(const std::vector<SbsScores>& slices);

}  // namespace semnet::sbs
