#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphweave/rwt.hpp"

namespace graphweave {

/// Shape of the reverse predictor. Defaults are the pipeline defaults;
/// num_bins, n_functions and max_step are normally derived from the data.
struct ModelConfig {
  int m = 64;
  int n_layers = 2;
  int n_heads = 4;
  int ffn_hidden = 128;
  int num_bins = 1;
  int n_functions = 4;
  int max_step = 10;
  std::uint64_t seed = 0;

  int head_dim() const { return m / n_heads; }
  /// Throws PreconditionError unless every size is >= 1 and m % n_heads == 0.
  void validate() const;
};

struct LayerParams {
  Vector ln1_gain, ln1_bias;
  Matrix wq, wk, wv, wo;  // m x m, applied as X * W
  Vector ln2_gain, ln2_bias;
  Matrix w1;  // m x ffn_hidden
  Vector b1;
  Matrix w2;  // ffn_hidden x m
  Vector b2;
};

/// Token i of a length-n input is
///   v_i * value_embeddings[bin(v_i)] + function_embeddings[f] + step_embeddings[step - 1],
/// followed by n_layers pre-norm encoder blocks (bidirectional multi-head
/// attention, ReLU feed-forward) and a per-token affine read-out. There is
/// no positional information anywhere, so the map is permutation
/// equivariant and accepts any n.
struct ModelParams {
  Matrix value_embeddings;     // num_bins x m
  Matrix function_embeddings;  // n_functions x m
  Matrix step_embeddings;      // max_step x m
  std::vector<LayerParams> layers;
  Vector proj_w;  // m
  Vector proj_b;  // 1
};

/// Mutable view of one parameter block; data is column-major (Eigen storage).
struct TensorRef {
  std::string name;
  double* data;
  Eigen::Index rows;
  Eigen::Index cols;

  Eigen::Index size() const { return rows * cols; }
};

struct ConstTensorRef {
  std::string name;
  const double* data;
  Eigen::Index rows;
  Eigen::Index cols;

  Eigen::Index size() const { return rows * cols; }
  double at(Eigen::Index r, Eigen::Index c) const { return data[c * rows + r]; }
};

/// Every parameter block in a fixed order with stable names.
std::vector<TensorRef> tensors(ModelParams& params);
std::vector<ConstTensorRef> tensors(const ModelParams& params);

/// Zero-filled parameters with the shapes implied by `config`.
ModelParams zero_params(const ModelConfig& config);

/// Deterministic in config.seed: matrices ~ N(0, 1/fan_in), embeddings
/// ~ N(0, 0.02^2), layer-norm gains 1, biases 0.
ModelParams init_model(const ModelConfig& config);

/// FNV-1a over the raw bytes of every parameter, as 16 hex digits.
std::string parameter_checksum(const ModelParams& params);

bool all_finite(const ModelParams& params);

/// One conditioned input sequence.
struct ModelInput {
  const Vector* values;
  int f_id;
  int step;
};

/// Single-sequence prediction of the previous trajectory vector.
Vector forward(const ModelParams& params, const ModelConfig& config, const Vector& v, int f_id, int step,
               const BinningStats& stats);

/// Batched prediction; every input in the batch must have the same length.
std::vector<Vector> forward_batch(const ModelParams& params, const ModelConfig& config, std::span<const ModelInput> batch,
                                  const BinningStats& stats);

/// Mean over the batch of per-sequence mean squared error against
/// `targets`. When `grad` is non-null it receives the exact gradient
/// (overwritten, same shapes as params).
double loss_and_gradient(const ModelParams& params, const ModelConfig& config, std::span<const ModelInput> batch,
                         std::span<const Vector* const> targets, const BinningStats& stats, ModelParams* grad);

}  // namespace graphweave
