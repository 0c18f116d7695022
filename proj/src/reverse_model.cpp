#include "graphweave/reverse_model.hpp"

#include <cmath>
#include <cstring>
#include <random>

#include "graphweave/error.hpp"

namespace graphweave {

void ModelConfig::validate() const {
  if (m < 1 || n_layers < 1 || n_heads < 1 || ffn_hidden < 1 || num_bins < 1 || n_functions < 1 || max_step < 1) {
    throw PreconditionError("model config: every size must be >= 1");
  }
  if (m % n_heads != 0) {
    throw PreconditionError("model config: embedding dimension " + std::to_string(m) + " not divisible by " +
                            std::to_string(n_heads) + " heads");
  }
}

namespace {

template <class Params, class Ref>
std::vector<Ref> collect(Params& p) {
  std::vector<Ref> out;
  auto add = [&](std::string name, auto& t) { out.push_back(Ref{std::move(name), t.data(), t.rows(), t.cols()}); };
  add("value_embeddings", p.value_embeddings);
  add("function_embeddings", p.function_embeddings);
  add("step_embeddings", p.step_embeddings);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    auto& layer = p.layers[l];
    const std::string pre = "layers." + std::to_string(l) + ".";
    add(pre + "ln1_gain", layer.ln1_gain);
    add(pre + "ln1_bias", layer.ln1_bias);
    add(pre + "wq", layer.wq);
    add(pre + "wk", layer.wk);
    add(pre + "wv", layer.wv);
    add(pre + "wo", layer.wo);
    add(pre + "ln2_gain", layer.ln2_gain);
    add(pre + "ln2_bias", layer.ln2_bias);
    add(pre + "w1", layer.w1);
    add(pre + "b1", layer.b1);
    add(pre + "w2", layer.w2);
    add(pre + "b2", layer.b2);
  }
  add("proj_w", p.proj_w);
  add("proj_b", p.proj_b);
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::vector<TensorRef> tensors(ModelParams& params) { return collect<ModelParams, TensorRef>(params); }

std::vector<ConstTensorRef> tensors(const ModelParams& params) {
  return collect<const ModelParams, ConstTensorRef>(params);
}

ModelParams zero_params(const ModelConfig& config) {
  config.validate();
  const int m = config.m;
  ModelParams p;
  p.value_embeddings = Matrix::Zero(config.num_bins, m);
  p.function_embeddings = Matrix::Zero(config.n_functions, m);
  p.step_embeddings = Matrix::Zero(config.max_step, m);
  p.layers.resize(static_cast<std::size_t>(config.n_layers));
  for (auto& layer : p.layers) {
    layer.ln1_gain = Vector::Zero(m);
    layer.ln1_bias = Vector::Zero(m);
    layer.wq = Matrix::Zero(m, m);
    layer.wk = Matrix::Zero(m, m);
    layer.wv = Matrix::Zero(m, m);
    layer.wo = Matrix::Zero(m, m);
    layer.ln2_gain = Vector::Zero(m);
    layer.ln2_bias = Vector::Zero(m);
    layer.w1 = Matrix::Zero(m, config.ffn_hidden);
    layer.b1 = Vector::Zero(config.ffn_hidden);
    layer.w2 = Matrix::Zero(config.ffn_hidden, m);
    layer.b2 = Vector::Zero(m);
  }
  p.proj_w = Vector::Zero(m);
  p.proj_b = Vector::Zero(1);
  return p;
}

ModelParams init_model(const ModelConfig& config) {
  ModelParams p = zero_params(config);
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& t : tensors(p)) {
    if (ends_with(t.name, "embeddings")) {
      for (Eigen::Index i = 0; i < t.size(); ++i) t.data[i] = 0.02 * normal(rng);
    } else if (ends_with(t.name, "_gain")) {
      std::fill(t.data, t.data + t.size(), 1.0);
    } else if (ends_with(t.name, "_bias") || t.name == "proj_b" || ends_with(t.name, ".b1") || ends_with(t.name, ".b2")) {
      std::fill(t.data, t.data + t.size(), 0.0);
    } else {
      const double scale = 1.0 / std::sqrt(static_cast<double>(t.rows));
      for (Eigen::Index i = 0; i < t.size(); ++i) t.data[i] = scale * normal(rng);
    }
  }
  return p;
}

std::string parameter_checksum(const ModelParams& params) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& t : tensors(params)) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(t.data);
    for (std::size_t i = 0; i < static_cast<std::size_t>(t.size()) * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool all_finite(const ModelParams& params) {
  for (const auto& t : tensors(params))
    for (Eigen::Index i = 0; i < t.size(); ++i)
      if (!std::isfinite(t.data[i])) return false;
  return true;
}

namespace {

constexpr double kLayerNormEps = 1e-5;

struct LayerNormCache {
  Matrix xhat;
  Vector rstd;
};

Matrix layer_norm(const Matrix& x, const Vector& gain, const Vector& bias, LayerNormCache& cache) {
  const double width = static_cast<double>(x.cols());
  const Vector mean = x.rowwise().mean();
  const Matrix centered = x.colwise() - mean;
  const Vector var = centered.array().square().rowwise().sum() / width;
  cache.rstd = (var.array() + kLayerNormEps).rsqrt();
  cache.xhat = centered.array().colwise() * cache.rstd.array();
  return (cache.xhat.array().rowwise() * gain.transpose().array()).rowwise() + bias.transpose().array();
}

Matrix layer_norm_backward(const Matrix& dy, const Vector& gain, const LayerNormCache& cache, Vector& dgain,
                           Vector& dbias) {
  dgain += dy.cwiseProduct(cache.xhat).colwise().sum().transpose();
  dbias += dy.colwise().sum().transpose();
  const Matrix dxhat = dy.array().rowwise() * gain.transpose().array();
  const Vector mean_d = dxhat.rowwise().mean();
  const Vector mean_dx = dxhat.cwiseProduct(cache.xhat).rowwise().mean();
  Matrix dx = (dxhat.colwise() - mean_d) - Matrix(cache.xhat.array().colwise() * mean_dx.array());
  return dx.array().colwise() * cache.rstd.array();
}

struct LayerCache {
  LayerNormCache ln1;
  Matrix y1, q, k, v;
  std::vector<Matrix> probs;  // batch * heads, each n x n
  Matrix ctx;
  LayerNormCache ln2;
  Matrix y2, z1, a1;
};

struct ForwardCache {
  int batch = 0;
  int n = 0;
  std::vector<int> bin_index;  // per token
  std::vector<double> value;   // per token
  std::vector<LayerCache> layers;
  Matrix x_out;
};

void check_batch(const ModelConfig& config, std::span<const ModelInput> batch) {
  if (batch.empty()) throw PreconditionError("empty model batch");
  const auto n = batch.front().values->size();
  if (n < 1) throw PreconditionError("model input must have at least one entry");
  for (const auto& in : batch) {
    if (in.values->size() != n) throw PreconditionError("model batch mixes sequence lengths");
    if (in.f_id < 0 || in.f_id >= config.n_functions) {
      throw PreconditionError("start function id " + std::to_string(in.f_id) + " out of range");
    }
    if (in.step < 1 || in.step > config.max_step) {
      throw PreconditionError("step " + std::to_string(in.step) + " outside 1.." + std::to_string(config.max_step));
    }
  }
}

// Returns one prediction per token, stacked sequence-major.
Vector run_forward(const ModelParams& p, const ModelConfig& config, std::span<const ModelInput> batch,
                   const BinningStats& stats, ForwardCache& cache) {
  check_batch(config, batch);
  if (stats.num_bins() != p.value_embeddings.rows()) {
    throw PreconditionError("binning statistics have " + std::to_string(stats.num_bins()) + " bins, model has " +
                            std::to_string(p.value_embeddings.rows()));
  }
  const int n = static_cast<int>(batch.front().values->size());
  const int nb = static_cast<int>(batch.size());
  const int dh = config.head_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  cache.batch = nb;
  cache.n = n;
  cache.bin_index.resize(static_cast<std::size_t>(nb) * n);
  cache.value.resize(static_cast<std::size_t>(nb) * n);

  Matrix x(static_cast<Eigen::Index>(nb) * n, config.m);
  for (int b = 0; b < nb; ++b) {
    const auto& in = batch[static_cast<std::size_t>(b)];
    const Eigen::RowVectorXd cond = p.function_embeddings.row(in.f_id) + p.step_embeddings.row(in.step - 1);
    for (int i = 0; i < n; ++i) {
      const std::size_t t = static_cast<std::size_t>(b) * n + i;
      const double vi = (*in.values)[i];
      const int idx = stats.index(vi);
      cache.bin_index[t] = idx;
      cache.value[t] = vi;
      x.row(static_cast<Eigen::Index>(t)) = vi * p.value_embeddings.row(idx) + cond;
    }
  }

  cache.layers.resize(p.layers.size());
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const auto& w = p.layers[l];
    auto& c = cache.layers[l];
    c.y1 = layer_norm(x, w.ln1_gain, w.ln1_bias, c.ln1);
    c.q.noalias() = c.y1 * w.wq;
    c.k.noalias() = c.y1 * w.wk;
    c.v.noalias() = c.y1 * w.wv;
    c.ctx.resize(x.rows(), x.cols());
    c.probs.resize(static_cast<std::size_t>(nb) * config.n_heads);
    for (int b = 0; b < nb; ++b) {
      for (int h = 0; h < config.n_heads; ++h) {
        const Eigen::Index r0 = static_cast<Eigen::Index>(b) * n, c0 = static_cast<Eigen::Index>(h) * dh;
        Matrix& prob = c.probs[static_cast<std::size_t>(b) * config.n_heads + h];
        prob.noalias() = c.q.block(r0, c0, n, dh) * c.k.block(r0, c0, n, dh).transpose();
        prob *= scale;
        const Vector row_max = prob.rowwise().maxCoeff();
        prob = (prob.colwise() - row_max).array().exp();
        const Vector row_sum = prob.rowwise().sum();
        prob = prob.array().colwise() / row_sum.array();
        c.ctx.block(r0, c0, n, dh).noalias() = prob * c.v.block(r0, c0, n, dh);
      }
    }
    Matrix h = x;
    h.noalias() += c.ctx * w.wo;
    c.y2 = layer_norm(h, w.ln2_gain, w.ln2_bias, c.ln2);
    c.z1.noalias() = c.y2 * w.w1;
    c.z1.rowwise() += w.b1.transpose();
    c.a1 = c.z1.cwiseMax(0.0);
    x = std::move(h);
    x.noalias() += c.a1 * w.w2;
    x.rowwise() += w.b2.transpose();
  }
  cache.x_out = x;
  Vector out = x * p.proj_w;
  out.array() += p.proj_b[0];
  return out;
}

// Accumulates parameter gradients into g and returns d(loss)/d(token embeddings).
Matrix run_backward(const ModelParams& p, const ModelConfig& config, const ForwardCache& cache, const Vector& dout,
                  ModelParams& g) {
  const int n = cache.n;
  const int nb = cache.batch;
  const int dh = config.head_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  g.proj_w += cache.x_out.transpose() * dout;
  g.proj_b[0] += dout.sum();
  Matrix dx = dout * p.proj_w.transpose();

  for (std::size_t l = p.layers.size(); l-- > 0;) {
    const auto& w = p.layers[l];
    auto& gw = g.layers[l];
    const auto& c = cache.layers[l];

    // Feed-forward sublayer: x_out = h + relu(LN2(h) W1 + b1) W2 + b2.
    gw.b2 += dx.colwise().sum().transpose();
    gw.w2.noalias() += c.a1.transpose() * dx;
    Matrix dz = dx * w.w2.transpose();
    dz = dz.cwiseProduct((c.z1.array() > 0.0).cast<double>().matrix());
    gw.b1 += dz.colwise().sum().transpose();
    gw.w1.noalias() += c.y2.transpose() * dz;
    const Matrix dy2 = dz * w.w1.transpose();
    Matrix dh_total = dx + layer_norm_backward(dy2, w.ln2_gain, c.ln2, gw.ln2_gain, gw.ln2_bias);

    // Attention sublayer: h = x + softmax(Q K^T / sqrt(dh)) V Wo per head.
    gw.wo.noalias() += c.ctx.transpose() * dh_total;
    const Matrix dctx = dh_total * w.wo.transpose();
    Matrix dq(dctx.rows(), dctx.cols()), dk(dctx.rows(), dctx.cols()), dv(dctx.rows(), dctx.cols());
    for (int b = 0; b < nb; ++b) {
      for (int h = 0; h < config.n_heads; ++h) {
        const Eigen::Index r0 = static_cast<Eigen::Index>(b) * n, c0 = static_cast<Eigen::Index>(h) * dh;
        const Matrix& prob = c.probs[static_cast<std::size_t>(b) * config.n_heads + h];
        const auto dc = dctx.block(r0, c0, n, dh);
        Matrix dprob = dc * c.v.block(r0, c0, n, dh).transpose();
        dv.block(r0, c0, n, dh).noalias() = prob.transpose() * dc;
        const Vector row_dot = dprob.cwiseProduct(prob).rowwise().sum();
        Matrix ds = prob.cwiseProduct(dprob.colwise() - row_dot);
        ds *= scale;
        dq.block(r0, c0, n, dh).noalias() = ds * c.k.block(r0, c0, n, dh);
        dk.block(r0, c0, n, dh).noalias() = ds.transpose() * c.q.block(r0, c0, n, dh);
      }
    }
    gw.wq.noalias() += c.y1.transpose() * dq;
    gw.wk.noalias() += c.y1.transpose() * dk;
    gw.wv.noalias() += c.y1.transpose() * dv;
    Matrix dy1 = dq * w.wq.transpose();
    dy1.noalias() += dk * w.wk.transpose();
    dy1.noalias() += dv * w.wv.transpose();
    dx = dh_total + layer_norm_backward(dy1, w.ln1_gain, c.ln1, gw.ln1_gain, gw.ln1_bias);
  }
  for (std::size_t t = 0; t < cache.bin_index.size(); ++t) {
    g.value_embeddings.row(cache.bin_index[t]) += cache.value[t] * dx.row(static_cast<Eigen::Index>(t));
  }
  return dx;
}

}  // namespace

std::vector<Vector> forward_batch(const ModelParams& params, const ModelConfig& config, std::span<const ModelInput> batch,
                                  const BinningStats& stats) {
  ForwardCache cache;
  const Vector flat = run_forward(params, config, batch, stats, cache);
  std::vector<Vector> out;
  out.reserve(batch.size());
  for (int b = 0; b < cache.batch; ++b) out.emplace_back(flat.segment(static_cast<Eigen::Index>(b) * cache.n, cache.n));
  return out;
}

Vector forward(const ModelParams& params, const ModelConfig& config, const Vector& v, int f_id, int step,
               const BinningStats& stats) {
  const ModelInput in{&v, f_id, step};
  return forward_batch(params, config, std::span<const ModelInput>(&in, 1), stats).front();
}

double loss_and_gradient(const ModelParams& params, const ModelConfig& config, std::span<const ModelInput> batch,
                         std::span<const Vector* const> targets, const BinningStats& stats, ModelParams* grad) {
  if (targets.size() != batch.size()) throw PreconditionError("one target per input required");
  ForwardCache cache;
  const Vector pred = run_forward(params, config, batch, stats, cache);
  const int n = cache.n;
  const int nb = cache.batch;
  Vector residual(pred.size());
  for (int b = 0; b < nb; ++b) {
    const Vector& target = *targets[static_cast<std::size_t>(b)];
    if (target.size() != n) throw PreconditionError("target length differs from input length");
    residual.segment(static_cast<Eigen::Index>(b) * n, n) = pred.segment(static_cast<Eigen::Index>(b) * n, n) - target;
  }
  const double denom = static_cast<double>(nb) * n;
  const double loss = residual.squaredNorm() / denom;
  if (grad == nullptr) return loss;

  *grad = zero_params(config);
  const Vector dout = residual * (2.0 / denom);
  const Matrix dtokens = run_backward(params, config, cache, dout, *grad);
  for (int b = 0; b < nb; ++b) {
    const Eigen::RowVectorXd sum = dtokens.middleRows(static_cast<Eigen::Index>(b) * n, n).colwise().sum();
    grad->function_embeddings.row(batch[static_cast<std::size_t>(b)].f_id) += sum;
    grad->step_embeddings.row(batch[static_cast<std::size_t>(b)].step - 1) += sum;
  }
  return loss;
}

}  // namespace graphweave
