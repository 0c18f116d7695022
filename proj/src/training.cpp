#include "graphweave/training.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "graphweave/error.hpp"

namespace graphweave {

namespace {

class Adam {
 public:
  Adam(const ModelConfig& config, double lr) : lr_(lr), m_(zero_params(config)), v_(zero_params(config)) {}

  void step(ModelParams& params, ModelParams& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    auto p = tensors(params);
    auto g = tensors(grad);
    auto m = tensors(m_);
    auto v = tensors(v_);
    for (std::size_t k = 0; k < p.size(); ++k) {
      for (Eigen::Index i = 0; i < p[k].size(); ++i) {
        const double gi = g[k].data[i];
        m[k].data[i] = kBeta1 * m[k].data[i] + (1.0 - kBeta1) * gi;
        v[k].data[i] = kBeta2 * v[k].data[i] + (1.0 - kBeta2) * gi * gi;
        p[k].data[i] -= lr_ * (m[k].data[i] / c1) / (std::sqrt(v[k].data[i] / c2) + kEps);
      }
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  double lr_;
  int t_ = 0;
  ModelParams m_;
  ModelParams v_;
};

// Batches of indices sharing one sequence length.
std::vector<std::vector<std::size_t>> make_batches(const std::vector<TrainingPair>& pairs,
                                                   const std::vector<std::size_t>& indices, int batch_size,
                                                   std::mt19937_64& rng) {
  std::map<int, std::vector<std::size_t>> by_size;
  for (std::size_t i : indices) by_size[pairs[i].size()].push_back(i);
  std::vector<std::vector<std::size_t>> batches;
  for (auto& [n, group] : by_size) {
    std::shuffle(group.begin(), group.end(), rng);
    for (std::size_t s = 0; s < group.size(); s += static_cast<std::size_t>(batch_size)) {
      const auto e = std::min(group.size(), s + static_cast<std::size_t>(batch_size));
      batches.emplace_back(group.begin() + static_cast<std::ptrdiff_t>(s), group.begin() + static_cast<std::ptrdiff_t>(e));
    }
  }
  std::shuffle(batches.begin(), batches.end(), rng);
  return batches;
}

void gather(const std::vector<TrainingPair>& pairs, const std::vector<std::size_t>& idx, std::vector<ModelInput>& inputs,
            std::vector<const Vector*>& targets) {
  inputs.clear();
  targets.clear();
  for (std::size_t i : idx) {
    inputs.push_back({&pairs[i].input, pairs[i].f_id, pairs[i].step});
    targets.push_back(&pairs[i].target);
  }
}

}  // namespace

double evaluate_mse(const ModelParams& params, const ModelConfig& config, const std::vector<TrainingPair>& pairs,
                    const std::vector<std::size_t>& indices, const BinningStats& stats) {
  if (indices.empty()) return 0.0;
  std::map<int, std::vector<std::size_t>> by_size;
  for (std::size_t i : indices) by_size[pairs[i].size()].push_back(i);
  std::vector<ModelInput> inputs;
  std::vector<const Vector*> targets;
  double total = 0.0;
  constexpr std::size_t kChunk = 32;
  for (const auto& [n, group] : by_size) {
    for (std::size_t s = 0; s < group.size(); s += kChunk) {
      std::vector<std::size_t> chunk(group.begin() + static_cast<std::ptrdiff_t>(s),
                                     group.begin() + static_cast<std::ptrdiff_t>(std::min(group.size(), s + kChunk)));
      gather(pairs, chunk, inputs, targets);
      total += loss_and_gradient(params, config, inputs, targets, stats, nullptr) * static_cast<double>(chunk.size());
    }
  }
  return total / static_cast<double>(indices.size());
}

TrainResult train(ModelParams params, const ModelConfig& config, const std::vector<TrainingPair>& pairs,
                  const BinningStats& stats, const TrainOptions& options) {
  if (pairs.empty()) throw PreconditionError("training needs at least one pair");
  if (options.epochs < 0 || options.batch_size < 1 || options.holdout_period < 1 || !(options.learning_rate > 0.0)) {
    throw PreconditionError("invalid training options");
  }

  std::vector<std::size_t> train_idx, held_idx;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const bool held = options.holdout_period > 1 &&
                      i % static_cast<std::size_t>(options.holdout_period) ==
                          static_cast<std::size_t>(options.holdout_period) - 1;
    (held ? held_idx : train_idx).push_back(i);
  }
  if (train_idx.empty()) std::swap(train_idx, held_idx);
  // Too little data to hold any out: score on the training pairs.
  const auto& score_idx = held_idx.empty() ? train_idx : held_idx;

  TrainResult result{std::move(params), {}};
  TrainReport& report = result.report;
  report.train_pairs = train_idx.size();
  report.heldout_pairs = held_idx.size();
  report.initial_train_mse = evaluate_mse(result.params, config, pairs, train_idx, stats);
  report.initial_heldout_mse = evaluate_mse(result.params, config, pairs, score_idx, stats);

  Adam adam(config, options.learning_rate);
  std::mt19937_64 rng(options.seed);
  ModelParams grad = zero_params(config);
  ModelParams last_finite = result.params;
  std::vector<ModelInput> inputs;
  std::vector<const Vector*> targets;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    bool finite = true;
    double loss_sum = 0.0;
    for (const auto& batch : make_batches(pairs, train_idx, options.batch_size, rng)) {
      gather(pairs, batch, inputs, targets);
      const double loss = loss_and_gradient(result.params, config, inputs, targets, stats, &grad);
      if (!std::isfinite(loss)) {
        finite = false;
        break;
      }
      loss_sum += loss * static_cast<double>(batch.size());
      adam.step(result.params, grad);
    }
    // Running mean of the batch losses seen during the epoch.
    const double train_mse = finite ? loss_sum / static_cast<double>(train_idx.size()) : NAN;
    const double held_mse = finite ? evaluate_mse(result.params, config, pairs, score_idx, stats) : NAN;
    if (!finite || !std::isfinite(train_mse) || !std::isfinite(held_mse) || !all_finite(result.params)) {
      report.aborted = true;
      report.diagnostic = "non-finite loss in epoch " + std::to_string(epoch) + "; keeping parameters from epoch " +
                          std::to_string(epoch - 1);
      result.params = std::move(last_finite);
      break;
    }
    report.train_mse.push_back(train_mse);
    report.heldout_mse.push_back(held_mse);
    report.epochs_run = epoch + 1;
    last_finite = result.params;
  }
  report.checksum = parameter_checksum(result.params);
  return result;
}

}  // namespace graphweave
