#include "graphweave/edge_list.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "graphweave/error.hpp"

namespace graphweave {

namespace {

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

// Reads exactly two integers and nothing else.
bool read_pair(const std::string& line, long long& a, long long& b) {
  std::istringstream ss(line);
  if (!(ss >> a >> b)) return false;
  std::string rest;
  return !(ss >> rest);
}

[[noreturn]] void fail(const std::string& source, std::size_t line_no, const std::string& what) {
  throw FormatError(source + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

Graph parse_edge_list(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  long long n = 0, m = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (!read_pair(line, n, m) || n < 1 || m < 0) fail(source_name, line_no, "malformed header '" + line + "'");
    have_header = true;
    break;
  }
  if (!have_header) throw FormatError(source_name + ": missing header line");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::set<std::pair<long long, long long>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    long long u = 0, v = 0;
    if (!read_pair(line, u, v)) fail(source_name, line_no, "malformed edge line '" + line + "'");
    if (u < 0 || v < 0 || u >= n || v >= n) fail(source_name, line_no, "node index out of range in '" + line + "'");
    if (u == v) fail(source_name, line_no, "self-loop '" + line + "'");
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second) fail(source_name, line_no, "duplicate edge '" + line + "'");
    if (static_cast<long long>(edges.size()) == m) fail(source_name, line_no, "more edge lines than declared");
    edges.push_back({static_cast<int>(u), static_cast<int>(v)});
  }
  if (static_cast<long long>(edges.size()) != m) {
    throw FormatError(source_name + ": header declares " + std::to_string(m) + " edges, found " +
                      std::to_string(edges.size()));
  }
  return Graph(static_cast<int>(n), edges);
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return parse_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_edge_list(out, g);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::filesystem::path> list_edge_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw FormatError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension();
    if (ext == ".edges" || ext == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace graphweave
