#include <algorithm>
#include <cmath>
#include <sstream>

#include "graphweave/edge_list.hpp"
#include "graphweave/error.hpp"
#include "graphweave/log.hpp"
#include "graphweave/metrics.hpp"
#include "graphweave/parallel.hpp"

namespace graphweave {

double wasserstein1(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw PreconditionError("wasserstein1 needs nonempty inputs");
  std::vector<double> a(x.begin(), x.end()), b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() == b.size()) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
  }
  // Walk the merged grid of quantile breakpoints i/|a| and j/|b|.
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double u = 0.0, total = 0.0;
  while (i < a.size() && j < b.size()) {
    const double next_a = static_cast<double>(i + 1) / na, next_b = static_cast<double>(j + 1) / nb;
    const double next = std::min(next_a, next_b);
    total += (next - u) * std::abs(a[i] - b[j]);
    u = next;
    if (next_a <= next) ++i;
    if (next_b <= next) ++j;
  }
  return total;
}

std::optional<double> relative_error(const std::vector<std::vector<double>>& gen,
                                     const std::vector<std::vector<double>>& test) {
  if (gen.empty() || test.empty()) throw PreconditionError("relative_error needs nonempty sets");
  for (const auto* set : {&gen, &test})
    for (const auto& v : *set)
      if (v.empty()) return std::nullopt;
  double num = 0.0, den = 0.0;
  for (const auto& g : gen)
    for (const auto& t : test) num += wasserstein1(g, t);
  for (const auto& s : test)
    for (const auto& t : test) den += wasserstein1(s, t);
  if (den == 0.0) return std::nullopt;
  return std::abs(num / den * (static_cast<double>(test.size()) / static_cast<double>(gen.size())) - 1.0);
}

namespace {

std::vector<StatisticVector> statistics_of(const std::vector<Graph>& graphs, Metric metric, std::uint64_t seed,
                                           int workers) {
  std::vector<StatisticVector> out(graphs.size());
  parallel_for(graphs.size(), workers, [&](std::size_t i) { out[i] = statistic(graphs[i], metric, seed); });
  return out;
}

std::vector<std::vector<double>> values_of(std::vector<StatisticVector>&& stats) {
  std::vector<std::vector<double>> out;
  for (auto& s : stats) out.push_back(std::move(s.values));
  return out;
}

SetSummary summarize(const std::vector<Graph>& graphs) {
  SetSummary s;
  s.count = graphs.size();
  std::size_t connected = 0;
  for (const auto& g : graphs) connected += is_connected(g) ? 1 : 0;
  s.connected_fraction = graphs.empty() ? 0.0 : static_cast<double>(connected) / static_cast<double>(graphs.size());
  return s;
}

std::vector<Graph> load_dir(const std::filesystem::path& dir) {
  const auto files = list_edge_files(dir);
  if (files.empty()) throw FormatError("no edge-list files in " + dir.string());
  std::vector<Graph> graphs;
  for (const auto& f : files) graphs.push_back(load_edge_list(f));
  return graphs;
}

}  // namespace

std::optional<double> relative_error(const std::vector<Graph>& gen, const std::vector<Graph>& test, Metric metric,
                                     std::uint64_t seed, int workers) {
  return relative_error(values_of(statistics_of(gen, metric, seed, workers)),
                        values_of(statistics_of(test, metric, seed, workers)));
}

std::optional<double> ErrorReport::error(Metric metric) const {
  for (const auto& [name, value] : errors)
    if (name == to_string(metric)) return value;
  return std::nullopt;
}

nlohmann::json ErrorReport::to_json() const {
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [name, value] : errors) metrics[name] = value ? nlohmann::json(*value) : nlohmann::json(nullptr);
  return {{"metrics", metrics},
          {"gen", {{"count", gen.count}, {"connected_fraction", gen.connected_fraction}}},
          {"test", {{"count", test.count}, {"connected_fraction", test.connected_fraction}}},
          {"seed", seed},
          {"excluded_pairs", excluded_pairs},
          {"config", config}};
}

std::string ErrorReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "metric,error\n";
  for (const auto& [name, value] : errors) {
    out << name << ',';
    if (value) {
      out << *value;
    } else {
      out << "NA";
    }
    out << '\n';
  }
  return out.str();
}

ErrorReport error_report(const std::vector<Graph>& gen, const std::vector<Graph>& test, const std::vector<Metric>& metrics,
                         std::uint64_t seed, int workers) {
  if (gen.empty() || test.empty()) throw PreconditionError("error_report needs nonempty graph sets");
  ErrorReport report;
  report.seed = seed;
  report.gen = summarize(gen);
  report.test = summarize(test);
  for (Metric metric : metrics) {
    auto gs = statistics_of(gen, metric, seed, workers);
    auto ts = statistics_of(test, metric, seed, workers);
    std::size_t excluded = 0;
    for (const auto* set : {&gs, &ts})
      for (const auto& s : *set) excluded += s.excluded;
    const auto err = relative_error(values_of(std::move(gs)), values_of(std::move(ts)));
    if (!err) warn("relative error for " + to_string(metric) + " is undefined (identical test statistics or empty vectors)");
    report.errors.emplace_back(to_string(metric), err);
    report.excluded_pairs[to_string(metric)] = excluded;
  }
  return report;
}

ErrorReport error_report(const std::filesystem::path& gen_dir, const std::filesystem::path& test_dir,
                         const std::vector<Metric>& metrics, std::uint64_t seed, int workers) {
  return error_report(load_dir(gen_dir), load_dir(test_dir), metrics, seed, workers);
}

}  // namespace graphweave
