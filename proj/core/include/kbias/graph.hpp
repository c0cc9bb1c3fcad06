#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kbias/exploration.hpp"

namespace kbias {

using Vertex = std::uint32_t;
/// Index into the 2|E| directed (half-)edges. Undirected edge t owns
/// directed edges 2t (u -> v) and 2t + 1 (v -> u), so twin(e) == e ^ 1.
using DirectedEdge = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  Vertex vertex = 0;
  /// Number of edges joining the two endpoints. For vertex == self this is
  /// the number of self-loops, each of which adds 2 to the degree.
  std::uint32_t multiplicity = 0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Immutable undirected multigraph on vertices {0, ..., n-1}.
///
/// Holds the edge multiset in input order, per-vertex degrees, sorted
/// neighbor/multiplicity lists, and the half-edge arrays used by the
/// directed-edge (non-backtracking) chain. Safe to share across threads.
class Graph {
 public:
  Graph() = default;

  /// Throws GraphError when n == 0 or an endpoint is out of range.
  static Graph build(std::size_t n, std::span<const Edge> edges);
  static Graph build(std::size_t n, const std::vector<Edge>& edges) {
    return build(n, std::span<const Edge>(edges));
  }

  std::size_t num_vertices() const noexcept { return degrees_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t num_directed_edges() const noexcept { return 2 * edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }
  std::uint32_t degree(Vertex v) const { return degrees_[v]; }

  std::span<const Neighbor> neighbors(Vertex v) const {
    return {neighbors_.data() + neighbor_offset_[v], neighbors_.data() + neighbor_offset_[v + 1]};
  }
  /// Directed edges with tail v, ordered by directed-edge index.
  std::span<const DirectedEdge> out_edges(Vertex v) const {
    return {out_edges_.data() + out_offset_[v], out_edges_.data() + out_offset_[v + 1]};
  }

  Vertex tail(DirectedEdge e) const {
    const Edge& edge = edges_[e >> 1];
    return (e & 1U) ? edge.v : edge.u;
  }
  Vertex head(DirectedEdge e) const {
    const Edge& edge = edges_[e >> 1];
    return (e & 1U) ? edge.u : edge.v;
  }
  static constexpr DirectedEdge twin(DirectedEdge e) noexcept { return e ^ 1U; }

  std::uint32_t self_loops(Vertex v) const { return loops_[v]; }
  bool has_self_loops() const noexcept { return total_loops_ > 0; }
  bool has_multi_edges() const noexcept { return has_multi_edges_; }
  bool is_simple() const noexcept { return !has_self_loops() && !has_multi_edges(); }

  std::uint32_t min_degree() const noexcept { return min_degree_; }
  std::uint32_t max_degree() const noexcept { return max_degree_; }
  /// Σ_i d_i = 2|E|.
  std::uint64_t degree_sum() const noexcept { return 2 * static_cast<std::uint64_t>(edges_.size()); }
  /// Σ_i d_i², exact.
  std::uint64_t degree_square_sum() const noexcept { return degree_square_sum_; }

 private:
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> degrees_;
  std::vector<std::uint32_t> loops_;
  std::vector<std::size_t> neighbor_offset_;
  std::vector<Neighbor> neighbors_;
  std::vector<std::size_t> out_offset_;
  std::vector<DirectedEdge> out_edges_;
  std::uint64_t total_loops_ = 0;
  std::uint64_t degree_square_sum_ = 0;
  bool has_multi_edges_ = false;
  std::uint32_t min_degree_ = 0;
  std::uint32_t max_degree_ = 0;
};

struct ComponentSummary {
  std::size_t size = 0;
  std::uint64_t degree_sum = 0;
  bool bipartite = false;
  bool regular = false;
  /// Bipartite with constant degree on each side. Regular bipartite
  /// components are bi-regular too.
  bool biregular_bipartite = false;
};

struct ComponentInfo {
  /// component_of[v] is the component label of v; labels follow the order of
  /// each component's smallest vertex.
  std::vector<std::uint32_t> component_of;
  std::vector<ComponentSummary> components;

  std::size_t count() const noexcept { return components.size(); }
  bool connected() const noexcept { return components.size() == 1; }
  bool all_regular() const noexcept;
  bool all_regular_or_biregular_bipartite() const noexcept;
  bool any_bipartite() const noexcept;
};

ComponentInfo analyze_components(const Graph& g);

struct ValidationReport {
  bool valid = true;
  std::string reason;
  std::vector<Vertex> violating;
  std::uint32_t min_degree = 0;
  /// Degree at least 3 everywhere; reported for non-backtracking only.
  bool min_degree_at_least_3 = false;
};

/// Non-backtracking needs degree ≥ 2 everywhere; backtracking and lazy
/// exploration need no self-loops and no isolated vertices.
ValidationReport validate_for_exploration(const Graph& g, ExplorationKind kind);

/// Subgraph together with the original index of each of its vertices.
struct Subgraph {
  Graph graph;
  std::vector<Vertex> original;
};

/// Induced subgraph on `keep` (any order; relabelled in increasing original
/// index). Edge order follows the parent graph.
Subgraph induced_subgraph(const Graph& g, std::span<const Vertex> keep);
/// Largest connected component; ties go to the lowest component label.
Subgraph largest_component(const Graph& g);
/// Removes degree-0 vertices.
Subgraph drop_isolated(const Graph& g);
/// 2-core: repeatedly strip vertices of degree < 2. Throws GraphError if empty.
Subgraph two_core(const Graph& g);

}  // namespace kbias
