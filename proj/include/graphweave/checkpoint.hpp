#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphweave/reverse_model.hpp"
#include "graphweave/rwt.hpp"

namespace graphweave {

inline constexpr int kCheckpointFormatVersion = 1;

/// Everything needed to run the reverse predictor on new data.
struct Checkpoint {
  ModelConfig config;
  ModelParams params;
  BinningStats stats;
  std::vector<StartFunction> functions;
  double alpha = 0.9;
  int k = 10;
  /// Free-form metadata (resolved pipeline config, training report).
  nlohmann::json metadata = nlohmann::json::object();
};

/// Exact text form of a double ("%a").
std::string hex_double(double x);
/// Inverse of hex_double; also accepts decimal. Throws FormatError.
double parse_hex_double(const std::string& s);

nlohmann::json checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const nlohmann::json& doc);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
/// Throws FormatError on unreadable, truncated or mismatched files.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace graphweave
