#include "kbias/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kbias/errors.hpp"

namespace kbias {

namespace {

bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_data_line(in, line, line_no)) throw GraphError("edge list: missing 'n m' header");
  std::istringstream header(line);
  long long n = -1;
  long long m = -1;
  if (!(header >> n >> m) || n <= 0 || m < 0) {
    throw GraphError("edge list line " + std::to_string(line_no) + ": bad header '" + line + "'");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long t = 0; t < m; ++t) {
    if (!next_data_line(in, line, line_no)) {
      throw GraphError("edge list: expected " + std::to_string(m) + " edges, found " + std::to_string(t));
    }
    std::istringstream row(line);
    long long u = -1;
    long long v = -1;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra) || u < 0 || v < 0) {
      throw GraphError("edge list line " + std::to_string(line_no) + ": bad edge '" + line + "'");
    }
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  if (next_data_line(in, line, line_no)) {
    throw GraphError("edge list line " + std::to_string(line_no) + ": trailing data after " +
                     std::to_string(m) + " edges");
  }
  return Graph::build(static_cast<std::size_t>(n), edges);
}

Graph read_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open edge list " + path.string());
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list_file(const std::filesystem::path& path, const Graph& g,
                          const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphError("cannot write edge list " + path.string());
  write_edge_list(out, g, comments);
}

}  // namespace kbias
