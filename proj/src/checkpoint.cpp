#include "graphweave/checkpoint.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "graphweave/error.hpp"

namespace graphweave {

std::string hex_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double parse_hex_double(const std::string& s) {
  if (s.empty()) throw FormatError("empty number");
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) throw FormatError("bad number '" + s + "'");
  return x;
}

namespace {

nlohmann::json config_to_json(const ModelConfig& c) {
  return {{"m", c.m},
          {"n_layers", c.n_layers},
          {"n_heads", c.n_heads},
          {"ffn_hidden", c.ffn_hidden},
          {"num_bins", c.num_bins},
          {"n_functions", c.n_functions},
          {"max_step", c.max_step},
          {"seed", c.seed}};
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.m = j.at("m").get<int>();
  c.n_layers = j.at("n_layers").get<int>();
  c.n_heads = j.at("n_heads").get<int>();
  c.ffn_hidden = j.at("ffn_hidden").get<int>();
  c.num_bins = j.at("num_bins").get<int>();
  c.n_functions = j.at("n_functions").get<int>();
  c.max_step = j.at("max_step").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

nlohmann::json checkpoint_to_json(const Checkpoint& ckpt) {
  nlohmann::json tensors_json = nlohmann::json::object();
  for (const auto& t : tensors(ckpt.params)) {
    nlohmann::json data = nlohmann::json::array();
    for (Eigen::Index r = 0; r < t.rows; ++r)
      for (Eigen::Index c = 0; c < t.cols; ++c) data.push_back(hex_double(t.at(r, c)));
    tensors_json[t.name] = {{"shape", {t.rows, t.cols}}, {"data", std::move(data)}};
  }
  nlohmann::json betas = nlohmann::json::array();
  for (const auto& f : ckpt.functions) betas.push_back(f.beta);
  return {{"format_version", kCheckpointFormatVersion},
          {"config", config_to_json(ckpt.config)},
          {"binning_stats",
           {{"mean", hex_double(ckpt.stats.mean)},
            {"stddev", hex_double(ckpt.stats.stddev)},
            {"c", hex_double(ckpt.stats.c)},
            {"bin_lo", ckpt.stats.bin_lo},
            {"bin_hi", ckpt.stats.bin_hi}}},
          {"F", betas},
          {"alpha", hex_double(ckpt.alpha)},
          {"k", ckpt.k},
          {"metadata", ckpt.metadata},
          {"tensors", std::move(tensors_json)}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& doc) {
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw FormatError("checkpoint format version " + std::to_string(version) + " not supported (expected " +
                        std::to_string(kCheckpointFormatVersion) + ")");
    }
    Checkpoint ckpt;
    ckpt.config = config_from_json(doc.at("config"));
    const auto& bs = doc.at("binning_stats");
    ckpt.stats.mean = parse_hex_double(bs.at("mean").get<std::string>());
    ckpt.stats.stddev = parse_hex_double(bs.at("stddev").get<std::string>());
    ckpt.stats.c = parse_hex_double(bs.at("c").get<std::string>());
    ckpt.stats.bin_lo = bs.at("bin_lo").get<int>();
    ckpt.stats.bin_hi = bs.at("bin_hi").get<int>();
    for (const auto& b : doc.at("F")) ckpt.functions.push_back({b.get<int>()});
    ckpt.alpha = parse_hex_double(doc.at("alpha").get<std::string>());
    ckpt.k = doc.at("k").get<int>();
    if (doc.contains("metadata")) ckpt.metadata = doc.at("metadata");

    if (ckpt.stats.num_bins() != ckpt.config.num_bins) throw FormatError("bin range disagrees with model config");
    if (static_cast<int>(ckpt.functions.size()) != ckpt.config.n_functions) {
      throw FormatError("start-function list disagrees with model config");
    }
    ckpt.params = zero_params(ckpt.config);
    const auto& tj = doc.at("tensors");
    for (auto& t : tensors(ckpt.params)) {
      const auto& entry = tj.at(t.name);
      const auto shape = entry.at("shape").get<std::vector<Eigen::Index>>();
      if (shape.size() != 2 || shape[0] != t.rows || shape[1] != t.cols) {
        throw FormatError("tensor " + t.name + " has unexpected shape");
      }
      const auto& data = entry.at("data");
      if (static_cast<Eigen::Index>(data.size()) != t.size()) throw FormatError("tensor " + t.name + " is truncated");
      std::size_t k = 0;
      for (Eigen::Index r = 0; r < t.rows; ++r)
        for (Eigen::Index c = 0; c < t.cols; ++c) {
          const double x = parse_hex_double(data[k++].get<std::string>());
          if (!std::isfinite(x)) throw FormatError("tensor " + t.name + " holds a non-finite value");
          t.data[c * t.rows + r] = x;
        }
    }
    return ckpt;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("corrupt checkpoint: ") + e.what());
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("corrupt checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << checkpoint_to_json(ckpt).dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("corrupt checkpoint " + path.string() + ": " + e.what());
  }
  return checkpoint_from_json(doc);
}

}  // namespace graphweave
