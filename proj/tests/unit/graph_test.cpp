#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "graphweave/edge_list.hpp"
#include "graphweave/error.hpp"
#include "graphweave/samplers.hpp"

using namespace graphweave;

namespace {

Graph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in, "mem");
}

}  // namespace

TEST_CASE("edge list parsing") {
  const Graph p3 = parse("3 2\n0 1\n1 2\n");
  CHECK(p3.num_nodes() == 3);
  CHECK(p3.degrees() == DegreeSequence{1, 2, 1});

  const Graph tri = parse("3 3\n0 1\n1 2\n0 2");
  CHECK(tri.degrees() == DegreeSequence{2, 2, 2});

  // Order of lines and endpoint orientation do not matter.
  CHECK(parse("3 3\n2 0\n1 0\n2 1\n") == tri);
}

TEST_CASE("edge list rejects malformed input with the line number") {
  auto message = [](const std::string& text) {
    try {
      parse(text);
    } catch (const FormatError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("2 1\n0 0\n").find("mem:2: self-loop") != std::string::npos);
  CHECK(message("3 2\n0 1\n1 0\n").find("mem:3: duplicate") != std::string::npos);
  CHECK(message("3 1\n0 3\n").find("mem:2: node index out of range") != std::string::npos);
  CHECK(message("3 1\n0 x\n").find("mem:2: malformed") != std::string::npos);
  CHECK(message("three 1\n").find("mem:1: malformed header") != std::string::npos);
  CHECK(message("3 2\n0 1\n").find("declares 2 edges") != std::string::npos);
}

TEST_CASE("edge list round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "graphweave_graph_test";
  std::filesystem::create_directories(dir);

  std::ostringstream tri_text;
  write_edge_list(tri_text, testing::triangle());
  CHECK(tri_text.str() == "3 3\n0 1\n0 2\n1 2\n");

  const Graph empty(2, {});
  std::ostringstream empty_text;
  write_edge_list(empty_text, empty);
  CHECK(empty_text.str() == "2 0\n");

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = sample_sbm(30, {0.5, 0.3, 0.2}, 0.8, 0.3, seed);
    save_edge_list(g, dir / "g.edges");
    CHECK(load_edge_list(dir / "g.edges") == g);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("graph construction validates edges") {
  const std::vector<Edge> loop{{1, 1}};
  CHECK_THROWS_AS(Graph(3, loop), PreconditionError);
  const std::vector<Edge> dup{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(Graph(3, dup), PreconditionError);
  const std::vector<Edge> range{{0, 5}};
  CHECK_THROWS_AS(Graph(3, range), PreconditionError);
}

TEST_CASE("connectivity") {
  CHECK(is_connected(testing::triangle()));
  CHECK(is_connected(testing::path(3)));
  const std::vector<Edge> two{{0, 1}, {2, 3}};
  const Graph g(4, two);
  CHECK_FALSE(is_connected(g));
  int count = 0;
  const auto labels = connected_components(g, &count);
  CHECK(count == 2);
  CHECK(labels == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("relabel and hamming distance") {
  const Graph p = testing::path(4);
  const std::vector<int> perm{3, 2, 1, 0};
  CHECK(relabel(p, perm) == p);
  const std::vector<int> swap01{1, 0, 2, 3};
  const Graph q = relabel(p, swap01);
  CHECK(hamming_distance(p, q) == 2);
  CHECK(hamming_distance(p, p) == 0);
}
