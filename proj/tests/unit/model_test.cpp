#include <cmath>
#include <random>
#include <utility>

#include "doctest.h"
#include "support.hpp"

#include "graphweave/error.hpp"
#include "graphweave/reverse_model.hpp"
#include "graphweave/training.hpp"

using namespace graphweave;

namespace {

ModelConfig tiny_config() {
  ModelConfig c;
  c.m = 4;
  c.n_layers = 1;
  c.n_heads = 2;
  c.ffn_hidden = 6;
  c.num_bins = 5;
  c.n_functions = 2;
  c.max_step = 3;
  c.seed = 7;
  return c;
}

BinningStats tiny_stats() {
  BinningStats s;
  s.mean = 1.0;
  s.stddev = 0.5;
  s.c = 3.0;
  s.bin_lo = -2;
  s.bin_hi = 2;
  return s;
}

/// Parameters filled with O(1) noise so every path carries gradient.
ModelParams noisy_params(const ModelConfig& config, std::uint64_t seed) {
  ModelParams p = init_model(config);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 0.5);
  for (auto& t : tensors(p))
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data[i] += z(rng);
  return p;
}

}  // namespace

TEST_CASE("config validation") {
  ModelConfig c = tiny_config();
  CHECK_NOTHROW(c.validate());
  c.n_heads = 3;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = tiny_config();
  c.num_bins = 0;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
}

TEST_CASE("initialisation is deterministic in the seed") {
  const ModelConfig c = tiny_config();
  CHECK(parameter_checksum(init_model(c)) == parameter_checksum(init_model(c)));
  ModelConfig other = c;
  other.seed = 8;
  CHECK(parameter_checksum(init_model(c)) != parameter_checksum(init_model(other)));
  CHECK(all_finite(init_model(c)));
}

TEST_CASE("analytic gradient matches central differences") {
  const ModelConfig config = tiny_config();
  const BinningStats stats = tiny_stats();
  ModelParams params = noisy_params(config, 1);

  Vector v1(3), v2(3), t1(3), t2(3);
  v1 << 0.6, 1.3, 0.9;
  v2 << 1.8, 0.4, 1.1;
  t1 << 0.8, 1.0, 1.2;
  t2 << 1.5, 0.7, 0.8;
  const std::vector<ModelInput> batch{{&v1, 0, 1}, {&v2, 1, 3}};
  const std::vector<const Vector*> targets{&t1, &t2};

  ModelParams grad = zero_params(config);
  loss_and_gradient(params, config, batch, targets, stats, &grad);

  const double h = 1e-4;
  auto refs = tensors(params);
  const auto grads = tensors(std::as_const(grad));
  for (std::size_t t = 0; t < refs.size(); ++t) {
    double diff = 0.0, scale = 0.0;
    for (Eigen::Index i = 0; i < refs[t].size(); ++i) {
      double& x = refs[t].data[i];
      const double saved = x;
      x = saved + h;
      const double up = loss_and_gradient(params, config, batch, targets, stats, nullptr);
      x = saved - h;
      const double down = loss_and_gradient(params, config, batch, targets, stats, nullptr);
      x = saved;
      const double fd = (up - down) / (2 * h);
      diff += (fd - grads[t].data[i]) * (fd - grads[t].data[i]);
      scale += fd * fd;
    }
    INFO(refs[t].name);
    // Blocks that receive no gradient (unused embedding rows) must stay zero.
    if (scale < 1e-20) {
      CHECK(diff < 1e-20);
    } else {
      CHECK(std::sqrt(diff / scale) <= 1e-4);
    }
  }
}

TEST_CASE("forward is permutation equivariant and length agnostic") {
  const ModelConfig config = tiny_config();
  const BinningStats stats = tiny_stats();
  const ModelParams params = noisy_params(config, 2);

  for (int n : {1, 2, 5, 9}) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = 0.4 + 0.23 * i;
    const Vector y = forward(params, config, v, 1, 2, stats);
    REQUIRE(y.size() == n);
    CHECK(y.allFinite());

    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = (i * 3 + 1) % n;
    if (n == 9) perm = {4, 0, 8, 2, 6, 1, 7, 3, 5};
    Vector pv(n);
    for (int i = 0; i < n; ++i) pv[i] = v[perm[static_cast<std::size_t>(i)]];
    const Vector py = forward(params, config, pv, 1, 2, stats);
    for (int i = 0; i < n; ++i) CHECK(py[i] == doctest::Approx(y[perm[static_cast<std::size_t>(i)]]).epsilon(1e-12));
  }
}

TEST_CASE("batched and single forward agree") {
  const ModelConfig config = tiny_config();
  const BinningStats stats = tiny_stats();
  const ModelParams params = noisy_params(config, 3);
  Vector a(4), b(4);
  a << 0.5, 1.0, 1.5, 2.0;
  b << 2.0, 0.1, 1.1, 0.9;
  const std::vector<ModelInput> batch{{&a, 0, 1}, {&b, 1, 2}};
  const auto out = forward_batch(params, config, batch, stats);
  CHECK((out[0] - forward(params, config, a, 0, 1, stats)).norm() < 1e-12);
  CHECK((out[1] - forward(params, config, b, 1, 2, stats)).norm() < 1e-12);
}

TEST_CASE("training lowers the held-out error on a small corpus") {
  std::vector<Graph> graphs;
  for (std::uint64_t s = 0; s < 4; ++s) graphs.push_back(testing::random_connected(12, 0.25, s));
  const auto functions = default_start_functions();
  const auto pairs = build_training_set(graphs, functions, 0.9, 4);
  const BinningStats stats = binning_stats(pairs, 3.0);

  ModelConfig config;
  config.m = 8;
  config.n_layers = 1;
  config.n_heads = 2;
  config.ffn_hidden = 16;
  config.num_bins = stats.num_bins();
  config.n_functions = 4;
  config.max_step = 4;
  TrainOptions options;
  options.epochs = 30;
  options.learning_rate = 3e-3;
  options.seed = 5;

  const TrainResult result = train(init_model(config), config, pairs, stats, options);
  CHECK_FALSE(result.report.aborted);
  CHECK(result.report.epochs_run == 30);
  CHECK(result.report.heldout_pairs == pairs.size() / 10);
  CHECK(result.report.final_heldout_mse() < result.report.initial_heldout_mse);
  CHECK(result.report.checksum == parameter_checksum(result.params));

  const TrainResult again = train(init_model(config), config, pairs, stats, options);
  CHECK(again.report.checksum == result.report.checksum);
}
