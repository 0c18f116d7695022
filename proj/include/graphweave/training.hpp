#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphweave/reverse_model.hpp"

namespace graphweave {

struct TrainOptions {
  double learning_rate = 1e-3;
  int epochs = 200;
  int batch_size = 8;
  /// Pair i is held out when i % holdout_period == holdout_period - 1.
  int holdout_period = 10;
  std::uint64_t seed = 0;
};

struct TrainReport {
  double initial_train_mse = 0.0;
  double initial_heldout_mse = 0.0;
  std::vector<double> train_mse;    ///< mean batch loss during each epoch
  std::vector<double> heldout_mse;  ///< after each epoch
  int epochs_run = 0;
  std::size_t train_pairs = 0;
  std::size_t heldout_pairs = 0;
  std::string checksum;
  bool aborted = false;
  std::string diagnostic;

  double final_heldout_mse() const { return heldout_mse.empty() ? initial_heldout_mse : heldout_mse.back(); }
};

struct TrainResult {
  ModelParams params;
  TrainReport report;
};

/// Mean over `pairs` of the per-pair mean squared error.
double evaluate_mse(const ModelParams& params, const ModelConfig& config, const std::vector<TrainingPair>& pairs,
                    const std::vector<std::size_t>& indices, const BinningStats& stats);

/// Adam on the mean squared reverse-prediction error. Batches group pairs
/// of equal length. A non-finite loss stops training; the parameters of
/// the last finite epoch are returned and report.aborted is set.
TrainResult train(ModelParams params, const ModelConfig& config, const std::vector<TrainingPair>& pairs,
                  const BinningStats& stats, const TrainOptions& options);

}  // namespace graphweave
