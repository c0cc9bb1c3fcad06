#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "kbias/graph.hpp"

namespace kbias {

// Plain-text edge list:
//
//   # optional comment lines
//   n m
//   u v        (m lines, 0-based vertex indices)
//
// write_edge_list(read_edge_list(text)) reproduces `text` byte for byte when
// the text is in this canonical form (single spaces, '\n' line ends, no
// comments).

Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::filesystem::path& path);

/// Each comment is written as "# <comment>" ahead of the header line.
void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>& comments = {});
void write_edge_list_file(const std::filesystem::path& path, const Graph& g,
                          const std::vector<std::string>& comments = {});

}  // namespace kbias
