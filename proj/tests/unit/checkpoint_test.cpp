#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"

#include "graphweave/checkpoint.hpp"
#include "graphweave/error.hpp"

using namespace graphweave;

namespace {

Checkpoint sample_checkpoint() {
  Checkpoint c;
  c.config.m = 4;
  c.config.n_layers = 1;
  c.config.n_heads = 2;
  c.config.ffn_hidden = 5;
  c.config.num_bins = 7;
  c.config.max_step = 3;
  c.config.seed = 42;
  c.params = init_model(c.config);
  c.stats.mean = 1.0 / 3.0;
  c.stats.stddev = 0.1;
  c.stats.bin_lo = -3;
  c.stats.bin_hi = 3;
  c.functions = default_start_functions();
  c.alpha = 0.9;
  c.k = 3;
  c.metadata["note"] = "x";
  return c;
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "graphweave_checkpoint_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("hex doubles round trip bit-exactly") {
  for (double x : {0.0, -0.0, 1.0 / 3.0, 1e-310, 6.02e23, -2.5}) {
    const double y = parse_hex_double(hex_double(x));
    CHECK(std::memcmp(&x, &y, sizeof x) == 0);
  }
  CHECK(parse_hex_double("0.5") == 0.5);
  CHECK_THROWS_AS(parse_hex_double("0x1.8p"), FormatError);
  CHECK_THROWS_AS(parse_hex_double("1.0abc"), FormatError);
  CHECK_THROWS_AS(parse_hex_double(""), FormatError);
}

TEST_CASE("checkpoint round trip preserves every parameter") {
  const Checkpoint c = sample_checkpoint();
  const auto path = scratch() / "ckpt.json";
  save_checkpoint(c, path);
  const Checkpoint back = load_checkpoint(path);
  CHECK(parameter_checksum(back.params) == parameter_checksum(c.params));
  CHECK(back.stats.mean == c.stats.mean);
  CHECK(back.stats.bin_lo == -3);
  CHECK(back.config.ffn_hidden == 5);
  CHECK(back.config.seed == 42u);
  CHECK(back.k == 3);
  CHECK(back.alpha == 0.9);
  REQUIRE(back.functions.size() == 4);
  CHECK(back.functions[3].beta == c.functions[3].beta);
  CHECK(back.metadata["note"] == "x");

  const Vector v = Vector::LinSpaced(5, 0.2, 1.4);
  CHECK((forward(back.params, back.config, v, 0, 1, back.stats) - forward(c.params, c.config, v, 0, 1, c.stats))
            .norm() == 0.0);
}

TEST_CASE("checkpoint load rejects damaged files") {
  const auto dir = scratch();
  const auto doc = checkpoint_to_json(sample_checkpoint());

  auto bad = doc;
  bad["format_version"] = kCheckpointFormatVersion + 1;
  CHECK_THROWS_AS(checkpoint_from_json(bad), FormatError);

  const std::string text = doc.dump();
  {
    std::ofstream out(dir / "truncated.json");
    out << text.substr(0, text.size() / 2);
  }
  CHECK_THROWS_AS(load_checkpoint(dir / "truncated.json"), FormatError);
  CHECK_THROWS_AS(load_checkpoint(dir / "missing.json"), FormatError);

  auto wrong_shape = doc;
  wrong_shape["tensors"]["proj_w"]["shape"] = {3, 1};
  CHECK_THROWS_AS(checkpoint_from_json(wrong_shape), FormatError);

  auto non_finite = doc;
  non_finite["tensors"]["proj_b"]["data"][0] = hex_double(std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(checkpoint_from_json(non_finite), FormatError);
}
