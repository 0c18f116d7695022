#include <cmath>

#include "doctest.h"
#include "support.hpp"

#include "graphweave/error.hpp"
#include "graphweave/rwt.hpp"

using namespace graphweave;

TEST_CASE("starting vectors sum to n") {
  const DegreeSequence d{1, 2, 3, 2};
  for (const auto& f : default_start_functions()) {
    const Vector v = starting_vector(d, f);
    CHECK(v.sum() == doctest::Approx(4.0).epsilon(1e-14));
    CHECK((v.array() > 0).all());
  }
  const Vector v = starting_vector(d, {1});
  CHECK(v[2] == doctest::Approx(4.0 * 3.0 / 8.0));
  CHECK_THROWS_AS(starting_vector({0, 1}, {1}), PreconditionError);
}

TEST_CASE("trajectory vectors are successive operator powers") {
  const Graph g = testing::path(4);
  const Trajectory t = build_rwt(g, {1}, 0.9, 5);
  CHECK(t.steps() == 5);
  const SmoothedOperator op(g, 0.9);
  for (int j = 0; j < 5; ++j) {
    CHECK((op.apply(t.vectors[static_cast<std::size_t>(j)]) - t.vectors[static_cast<std::size_t>(j) + 1]).norm() <
          1e-15);
  }
}

TEST_CASE("training set layout") {
  const std::vector<Graph> graphs{testing::path(4), testing::cycle(5)};
  const auto pairs = build_training_set(graphs, default_start_functions(), 0.9, 3);
  REQUIRE(pairs.size() == 2u * 4u * 3u);
  // Graph-major, then start function, then step.
  CHECK(pairs[0].graph_id == 0);
  CHECK(pairs[0].f_id == 0);
  CHECK(pairs[0].step == 1);
  CHECK(pairs[2].step == 3);
  CHECK(pairs[3].f_id == 1);
  CHECK(pairs[12].graph_id == 1);
  CHECK(pairs[12].size() == 5);
  // The target of step s is the input of step s - 1.
  CHECK(pairs[1].target == pairs[0].input);
}

TEST_CASE("binning statistics") {
  const std::vector<Graph> graphs{testing::path(5)};
  const auto pairs = build_training_set(graphs, default_start_functions(), 0.9, 4);
  const BinningStats stats = binning_stats(pairs, 3.0);

  // Independent recomputation of the mean and population deviation.
  std::vector<double> all;
  for (const auto& p : pairs) {
    for (double x : p.input) all.push_back(x);
    for (double x : p.target) all.push_back(x);
  }
  double mean = 0.0;
  for (double x : all) mean += x;
  mean /= static_cast<double>(all.size());
  double var = 0.0;
  for (double x : all) var += (x - mean) * (x - mean);
  var /= static_cast<double>(all.size());
  CHECK(stats.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(stats.stddev == doctest::Approx(std::sqrt(var)).epsilon(1e-12));

  for (double x : all) {
    const int b = static_cast<int>(std::floor(3.0 * (x - mean) / std::sqrt(var)));
    CHECK(stats.bin(x) == b);
    CHECK(stats.index(x) >= 0);
    CHECK(stats.index(x) < stats.num_bins());
  }
  // Values outside the training range are clamped.
  CHECK(stats.bin(1e9) == stats.bin_hi);
  CHECK(stats.bin(-1e9) == stats.bin_lo);
}

TEST_CASE("constant trajectories make binning degenerate") {
  const std::vector<Graph> graphs{testing::cycle(6)};
  const auto pairs = build_training_set(graphs, default_start_functions(), 0.9, 3);
  CHECK_THROWS_AS(binning_stats(pairs, 3.0), NumericalError);
}
