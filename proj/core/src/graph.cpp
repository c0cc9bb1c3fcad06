#include "kbias/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

#include "kbias/errors.hpp"
#include "kbias/format.hpp"

namespace kbias {

Exploration Exploration::lazy(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("laziness delta must lie in (0, 1), got " + format_double(delta));
  }
  return {ExplorationKind::Lazy, delta};
}

std::string_view kind_name(ExplorationKind kind) {
  switch (kind) {
    case ExplorationKind::Backtracking: return "bt";
    case ExplorationKind::NonBacktracking: return "nb";
    case ExplorationKind::Lazy: return "lazy";
  }
  return "?";
}

ExplorationKind parse_kind(std::string_view name) {
  if (name == "bt") return ExplorationKind::Backtracking;
  if (name == "nb") return ExplorationKind::NonBacktracking;
  if (name == "lazy") return ExplorationKind::Lazy;
  throw ParameterError("unknown exploration kind '" + std::string(name) + "' (expected bt, nb or lazy)");
}

std::string describe(const Exploration& e) {
  std::string out(kind_name(e.kind));
  if (e.kind == ExplorationKind::Lazy) out += "(" + format_double(e.delta) + ")";
  return out;
}

Graph Graph::build(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw GraphError("graph needs at least one vertex");
  if (n > std::numeric_limits<Vertex>::max() ||
      2 * edges.size() > std::numeric_limits<DirectedEdge>::max()) {
    throw GraphError("graph too large for 32-bit indices");
  }
  Graph g;
  g.edges_.assign(edges.begin(), edges.end());
  g.degrees_.assign(n, 0);
  g.loops_.assign(n, 0);

  for (std::size_t t = 0; t < edges.size(); ++t) {
    const auto [u, v] = edges[t];
    if (u >= n || v >= n) {
      throw GraphError("edge " + std::to_string(t) + " = (" + std::to_string(u) + ", " +
                       std::to_string(v) + ") has an endpoint outside [0, " + std::to_string(n) + ")");
    }
    ++g.degrees_[u];
    ++g.degrees_[v];
    if (u == v) {
      ++g.loops_[u];
      ++g.total_loops_;
    }
  }

  // Half-edge CSR: directed edge 2t has tail u, 2t + 1 has tail v.
  g.out_offset_.assign(n + 1, 0);
  for (Vertex v = 0; v < n; ++v) g.out_offset_[v + 1] = g.out_offset_[v] + g.degrees_[v];
  g.out_edges_.resize(g.out_offset_[n]);
  std::vector<std::size_t> cursor(g.out_offset_.begin(), g.out_offset_.end() - 1);
  for (std::size_t t = 0; t < edges.size(); ++t) {
    const auto [u, v] = edges[t];
    g.out_edges_[cursor[u]++] = static_cast<DirectedEdge>(2 * t);
    g.out_edges_[cursor[v]++] = static_cast<DirectedEdge>(2 * t + 1);
  }

  // Neighbor lists with multiplicity. A self-loop shows up twice among the
  // out-edges of its vertex but counts once in A_ii.
  g.neighbor_offset_.assign(n + 1, 0);
  std::vector<Vertex> heads;
  for (Vertex v = 0; v < n; ++v) {
    heads.clear();
    for (DirectedEdge e : g.out_edges(v)) heads.push_back(g.head(e));
    std::sort(heads.begin(), heads.end());
    for (std::size_t a = 0; a < heads.size();) {
      std::size_t b = a;
      while (b < heads.size() && heads[b] == heads[a]) ++b;
      auto count = static_cast<std::uint32_t>(b - a);
      if (heads[a] == v) count /= 2;
      if (count > 1) g.has_multi_edges_ = true;
      g.neighbors_.push_back({heads[a], count});
      a = b;
    }
    g.neighbor_offset_[v + 1] = g.neighbors_.size();
  }

  g.min_degree_ = *std::min_element(g.degrees_.begin(), g.degrees_.end());
  g.max_degree_ = *std::max_element(g.degrees_.begin(), g.degrees_.end());
  for (auto d : g.degrees_) g.degree_square_sum_ += static_cast<std::uint64_t>(d) * d;
  return g;
}

bool ComponentInfo::all_regular() const noexcept {
  return std::all_of(components.begin(), components.end(), [](const auto& c) { return c.regular; });
}

bool ComponentInfo::all_regular_or_biregular_bipartite() const noexcept {
  return std::all_of(components.begin(), components.end(),
                     [](const auto& c) { return c.regular || c.biregular_bipartite; });
}

bool ComponentInfo::any_bipartite() const noexcept {
  return std::any_of(components.begin(), components.end(), [](const auto& c) { return c.bipartite; });
}

ComponentInfo analyze_components(const Graph& g) {
  constexpr auto kUnseen = std::numeric_limits<std::uint32_t>::max();
  const std::size_t n = g.num_vertices();
  ComponentInfo info;
  info.component_of.assign(n, kUnseen);
  std::vector<std::int8_t> color(n, -1);
  std::deque<Vertex> queue;

  for (Vertex start = 0; start < n; ++start) {
    if (info.component_of[start] != kUnseen) continue;
    const auto label = static_cast<std::uint32_t>(info.components.size());
    ComponentSummary summary;
    summary.bipartite = true;
    std::uint32_t side_degree[2] = {kUnseen, kUnseen};
    bool side_constant[2] = {true, true};
    const std::uint32_t first_degree = g.degree(start);
    summary.regular = true;

    info.component_of[start] = label;
    color[start] = 0;
    queue.push_back(start);
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      ++summary.size;
      summary.degree_sum += g.degree(v);
      if (g.degree(v) != first_degree) summary.regular = false;
      const int side = color[v];
      if (side_degree[side] == kUnseen) side_degree[side] = g.degree(v);
      else if (side_degree[side] != g.degree(v)) side_constant[side] = false;

      for (const auto& nb : g.neighbors(v)) {
        const Vertex w = nb.vertex;
        if (info.component_of[w] == kUnseen) {
          info.component_of[w] = label;
          color[w] = static_cast<std::int8_t>(1 - side);
          queue.push_back(w);
        } else if (color[w] == side) {
          summary.bipartite = false;  // includes self-loops
        }
      }
    }
    summary.biregular_bipartite = summary.bipartite && side_constant[0] && side_constant[1];
    info.components.push_back(summary);
  }
  return info;
}

ValidationReport validate_for_exploration(const Graph& g, ExplorationKind kind) {
  ValidationReport report;
  report.min_degree = g.min_degree();
  if (kind == ExplorationKind::NonBacktracking) {
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (g.degree(v) < 2) report.violating.push_back(v);
    }
    report.min_degree_at_least_3 = g.min_degree() >= 3;
    if (!report.violating.empty()) {
      report.valid = false;
      report.reason = "non-backtracking exploration needs minimum degree 2; " +
                      std::to_string(report.violating.size()) + " vertices have degree < 2";
    }
  } else {
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (g.degree(v) == 0 || g.self_loops(v) > 0) report.violating.push_back(v);
    }
    if (!report.violating.empty()) {
      report.valid = false;
      report.reason = std::string(kind_name(kind)) +
                      " exploration needs a graph without self-loops and isolated vertices; " +
                      std::to_string(report.violating.size()) + " vertices violate this";
    }
  }
  return report;
}

Subgraph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
  constexpr auto kDropped = std::numeric_limits<Vertex>::max();
  Subgraph out;
  out.original.assign(keep.begin(), keep.end());
  std::sort(out.original.begin(), out.original.end());
  out.original.erase(std::unique(out.original.begin(), out.original.end()), out.original.end());
  if (out.original.empty()) throw GraphError("induced subgraph on an empty vertex set");

  std::vector<Vertex> relabel(g.num_vertices(), kDropped);
  for (std::size_t i = 0; i < out.original.size(); ++i) {
    if (out.original[i] >= g.num_vertices()) throw GraphError("induced subgraph vertex out of range");
    relabel[out.original[i]] = static_cast<Vertex>(i);
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (relabel[e.u] != kDropped && relabel[e.v] != kDropped) edges.push_back({relabel[e.u], relabel[e.v]});
  }
  out.graph = Graph::build(out.original.size(), edges);
  return out;
}

Subgraph largest_component(const Graph& g) {
  const auto info = analyze_components(g);
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < info.count(); ++c) {
    if (info.components[c].size > info.components[best].size) best = c;
  }
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (info.component_of[v] == best) keep.push_back(v);
  }
  return induced_subgraph(g, keep);
}

Subgraph drop_isolated(const Graph& g) {
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (g.degree(v) > 0) keep.push_back(v);
  }
  if (keep.empty()) throw GraphError("graph has no edges; nothing left after dropping isolated vertices");
  return induced_subgraph(g, keep);
}

Subgraph two_core(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> degree(g.degrees().begin(), g.degrees().end());
  std::vector<bool> removed(n, false);
  std::vector<Vertex> stack;
  for (Vertex v = 0; v < n; ++v) {
    if (degree[v] < 2) stack.push_back(v);
  }
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    if (removed[v]) continue;
    removed[v] = true;
    for (DirectedEdge e : g.out_edges(v)) {
      const Vertex w = g.head(e);
      if (w == v || removed[w]) continue;
      if (--degree[w] < 2) stack.push_back(w);
    }
  }
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < n; ++v) {
    if (!removed[v]) keep.push_back(v);
  }
  if (keep.empty()) throw GraphError("2-core is empty");
  return induced_subgraph(g, keep);
}

}  // namespace kbias
