#include <cmath>
#include <map>
#include <numeric>

#include "doctest.h"
#include "support.hpp"

#include "graphweave/error.hpp"
#include "graphweave/samplers.hpp"

using namespace graphweave;

namespace {

double mean_degree(const Graph& g) { return 2.0 * static_cast<double>(g.num_edges()) / g.num_nodes(); }

}  // namespace

TEST_CASE("sbm block layout") {
  CHECK(sbm_blocks(10, {0.5, 0.3, 0.2}) == std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1, 2, 2});
  // Rounding residue lands in the last block.
  CHECK(sbm_blocks(7, {0.5, 0.5}) == std::vector<int>{0, 0, 0, 1, 1, 1, 1});
  CHECK_THROWS_AS(sbm_blocks(5, {0.5, 0.4}), PreconditionError);
}

TEST_CASE("sbm degenerate parameters give a complete graph") {
  const Graph g = sample_sbm(9, {1.0}, 1.0, 0.0, 1);
  CHECK(g.num_edges() == 36);
}

TEST_CASE("sbm with p == q matches the binomial mean degree") {
  const int n = 40;
  const double p = 0.2;
  const int samples = 100;
  double sum = 0.0;
  for (int s = 0; s < samples; ++s) sum += mean_degree(sample_sbm(n, {0.5, 0.5}, p, p, static_cast<std::uint64_t>(s)));
  const double mean = sum / samples;
  // Mean degree of one sample is 2|E|/n with |E| ~ Binomial(n(n-1)/2, p).
  const double pairs = n * (n - 1) / 2.0;
  const double se = 2.0 * std::sqrt(pairs * p * (1 - p)) / n / std::sqrt(static_cast<double>(samples));
  CHECK(std::abs(mean - (n - 1) * p) <= 3.0 * se + 0.05);
}

TEST_CASE("sbm isolated nodes are an error when unavoidable") {
  CHECK_THROWS_AS(sample_sbm(5, {1.0}, 0.0, 0.0, 3), GenerationError);
}

TEST_CASE("samplers are deterministic in the seed") {
  CHECK(sample_sbm(30, {0.5, 0.3, 0.2}, 0.8, 0.3, 9) == sample_sbm(30, {0.5, 0.3, 0.2}, 0.8, 0.3, 9));
  CHECK(sample_watts_strogatz(20, 4, 0.3, 9) == sample_watts_strogatz(20, 4, 0.3, 9));
  CHECK(sample_barabasi_albert(50, 2, 9) == sample_barabasi_albert(50, 2, 9));
  const DegreeSequence d(30, 5);
  CHECK(sample_chung_lu(d, 9) == sample_chung_lu(d, 9));
  CHECK_FALSE(sample_sbm(30, {0.5, 0.5}, 0.5, 0.5, 1) == sample_sbm(30, {0.5, 0.5}, 0.5, 0.5, 2));
}

TEST_CASE("watts-strogatz") {
  const Graph ring = sample_watts_strogatz(20, 4, 0.0, 1);
  for (int d : ring.degrees()) CHECK(d == 4);
  for (std::uint64_t s = 0; s < 10; ++s) CHECK(sample_watts_strogatz(20, 4, 1.0, s).num_edges() == 40);
  CHECK(sample_watts_strogatz(20, 4, 0.3, 5).num_edges() == 40);
  CHECK_THROWS_AS(sample_watts_strogatz(10, 3, 0.1, 1), PreconditionError);
}

TEST_CASE("barabasi-albert edge count and connectivity") {
  for (int m : {1, 2, 3}) {
    const int n = 60;
    const Graph g = sample_barabasi_albert(n, m, 4);
    CHECK(g.num_edges() == static_cast<std::size_t>((n - m - 1) * m + m * (m + 1) / 2));
    CHECK(is_connected(g));
  }
  CHECK(sample_barabasi_albert(4, 3, 1).num_edges() == 6);
}

TEST_CASE("barabasi-albert degree tail has slope near -2 on a log-log CCDF") {
  const int n = 200, m = 2, samples = 50;
  std::map<int, long> hist;
  long total = 0;
  for (int s = 0; s < samples; ++s) {
    for (int d : sample_barabasi_albert(n, m, 100 + static_cast<std::uint64_t>(s)).degrees()) {
      ++hist[d];
      ++total;
    }
  }
  // Least squares of log P(D >= k) on log k over the well-populated range.
  std::vector<double> xs, ys;
  long at_least = total;
  for (const auto& [k, count] : hist) {
    if (static_cast<double>(at_least) / total >= 0.01) {
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(std::log(static_cast<double>(at_least) / total));
    }
    at_least -= count;
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  CHECK(slope == doctest::Approx(-2.0).epsilon(0.25));
}

TEST_CASE("chung-lu realises the target mean degree") {
  DegreeSequence target;
  for (int i = 0; i < 40; ++i) target.push_back(6 + i % 4);
  const double target_mean = 7.5;
  double sum = 0.0, sq = 0.0;
  const int samples = 100;
  for (int s = 0; s < samples; ++s) {
    const double md = mean_degree(sample_chung_lu(target, static_cast<std::uint64_t>(s)));
    sum += md;
    sq += md * md;
  }
  const double mean = sum / samples;
  const double sd = std::sqrt(sq / samples - mean * mean);
  // Self-loops are excluded, so the expectation is slightly below the target.
  double loops = 0.0, total = 300.0;
  for (int d : target) loops += static_cast<double>(d) * d / total;
  const double expected = target_mean - loops / target.size();
  CHECK(std::abs(mean - expected) <= 3.0 * sd / std::sqrt(static_cast<double>(samples)) + 0.02);
}
