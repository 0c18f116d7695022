#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "graphweave/graph.hpp"

namespace graphweave {

// Edge-list text format:
//   <n> <m>
//   <u> <v>      (m lines, 0-indexed, u != v, each unordered pair once)

Graph parse_edge_list(std::istream& in, const std::string& source_name = "<stream>");
Graph load_edge_list(const std::filesystem::path& path);

void write_edge_list(std::ostream& out, const Graph& g);
void save_edge_list(const Graph& g, const std::filesystem::path& path);

/// Every regular file in `dir` with extension ".edges" or ".txt", sorted by name.
std::vector<std::filesystem::path> list_edge_files(const std::filesystem::path& dir);

}  // namespace graphweave
