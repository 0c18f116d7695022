#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "graphweave/graph.hpp"

namespace graphweave {

enum class Metric { Degree, PageRank, Cut, Conductance, Modularity, Clustering, Orbit, MaxFlow, Resistance };

const std::vector<Metric>& all_metrics();
std::string to_string(Metric metric);
/// Throws PreconditionError for unknown names.
Metric parse_metric(const std::string& name);

inline constexpr int kNumPartitions = 100;
inline constexpr int kNumPairs = 100;
inline constexpr int kNumOrbits = 15;

struct StatisticVector {
  Metric metric = Metric::Degree;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::size_t excluded = 0;  ///< resistance pairs spanning two components
};

/// The per-graph statistic. Partition and pair metrics draw from streams
/// keyed by (seed, index), so graphs compared under one seed share
/// partitions and pairs node-by-node.
StatisticVector statistic(const Graph& g, Metric metric, std::uint64_t seed);

std::vector<double> pagerank(const Graph& g, double damping = 0.85, double tolerance = 1e-10);
std::vector<double> local_clustering(const Graph& g);

/// Side (0/1) of every node in partition `index`.
std::vector<char> random_partition(int n, std::uint64_t seed, int index);
/// Ordered pair (s, t), s != t, number `index`. Requires n >= 2.
std::pair<int, int> random_pair(int n, std::uint64_t seed, int index);

int cut_size(const Graph& g, std::span<const char> side);
/// Newman modularity of a two-block partition; 0 for an edgeless graph.
double modularity(const Graph& g, std::span<const char> side);

/// Per-node counts of the 15 orbits of connected graphlets on 2-4 nodes.
std::vector<std::array<std::int64_t, kNumOrbits>> orbit_counts(const Graph& g);

/// Unit-capacity maximum s-t flow.
int max_flow(const Graph& g, int s, int t);

/// Effective resistances for the given pairs; nullopt for pairs in
/// different components. One factorisation per component.
std::vector<std::optional<double>> effective_resistances(const Graph& g, std::span<const std::pair<int, int>> pairs);

/// W1 between the empirical distributions of x and y.
double wasserstein1(std::span<const double> x, std::span<const double> y);

/// |(sum_{gen x test} W1 / sum_{test x test} W1) |test| / |gen| - 1|.
/// nullopt when the denominator is zero or a statistic vector is empty.
std::optional<double> relative_error(const std::vector<std::vector<double>>& gen,
                                     const std::vector<std::vector<double>>& test);
std::optional<double> relative_error(const std::vector<Graph>& gen, const std::vector<Graph>& test, Metric metric,
                                     std::uint64_t seed, int workers = 1);

struct SetSummary {
  std::size_t count = 0;
  double connected_fraction = 0.0;
};

struct ErrorReport {
  std::vector<std::pair<std::string, std::optional<double>>> errors;  ///< in request order
  SetSummary gen;
  SetSummary test;
  std::uint64_t seed = 0;
  std::map<std::string, std::size_t> excluded_pairs;
  nlohmann::json config = nlohmann::json::object();

  std::optional<double> error(Metric metric) const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

ErrorReport error_report(const std::vector<Graph>& gen, const std::vector<Graph>& test, const std::vector<Metric>& metrics,
                         std::uint64_t seed, int workers = 1);
/// Loads every edge-list file of both directories. Throws FormatError for
/// an empty directory or unreadable file.
ErrorReport error_report(const std::filesystem::path& gen_dir, const std::filesystem::path& test_dir,
                         const std::vector<Metric>& metrics, std::uint64_t seed, int workers = 1);

}  // namespace graphweave
