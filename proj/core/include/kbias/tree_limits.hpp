#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "kbias/graph.hpp"
#include "kbias/measures.hpp"
#include "kbias/offspring_law.hpp"
#include "kbias/rng.hpp"

namespace kbias {

enum class TreeMode {
  /// Root offspring ~ p, every other vertex ~ p★.
  Unimodular,
  /// Every vertex ~ p (plain Galton-Watson).
  IidRoot,
};

/// Galton-Watson tree realized to a fixed depth, vertices in breadth-first
/// order. Offspring counts are drawn for every realized vertex, including
/// those on the last level whose children are not realized.
struct TruncatedTree {
  std::vector<std::uint32_t> offspring;
  /// Vertices of level l are [level_offset[l], level_offset[l + 1]).
  std::vector<std::size_t> level_offset;
  std::size_t depth = 0;

  std::size_t num_vertices() const noexcept { return offspring.size(); }
  std::size_t level_size(std::size_t l) const { return level_offset[l + 1] - level_offset[l]; }
  /// Graph degree: the root has degree = offspring, others offspring + 1.
  std::uint32_t degree(std::size_t v) const { return offspring[v] + (v == 0 ? 0 : 1); }
};

TruncatedTree sample_truncated_gw(const OffspringLaw& p, std::size_t depth, std::uint64_t seed,
                                  TreeMode mode = TreeMode::Unimodular);

/// Exact non-backtracking Δ_φ^(k) on the tree: the walk only descends, so
/// the law at generation k follows from one pass carrying path weights
/// 1/d_φ, then 1/offspring. Throws ParameterError unless 1 ≤ k ≤ depth and
/// KernelError when a vertex above level k has no offspring.
double nb_bias_on_tree(const TruncatedTree& t, std::size_t k);

/// Finite unimodular tree grown to extinction (root = vertex 0), or nullopt
/// once it exceeds `cap` vertices.
std::optional<Graph> sample_unimodular_finite_tree(const OffspringLaw& p, Rng& rng, std::size_t cap = 1'000'000);

/// Σ_j P^k(φ, j) d_j - d_φ under the lazy kernel with laziness delta (every
/// tree is bipartite, so the plain walk does not converge). 0 on a tree
/// without edges.
double bt_bias_on_finite_tree(const Graph& tree, Vertex root, std::size_t k, double delta = 0.5);

/// Δ_φ★ = Σ_j d_j² / Σ_j d_j - d_φ, with 0 for a single vertex.
double stationary_tree_bias(const Graph& tree, Vertex root);

struct MonteCarloMeasure {
  EmpiricalMeasure measure;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  /// Trees discarded for exceeding the size cap.
  std::size_t rejected = 0;
};

/// Draws of m^(2)/m^(1) - D with D ~ p; sample i uses seed mix(seed, i).
MonteCarloMeasure sample_mu(const OffspringLaw& p, std::size_t samples, std::uint64_t seed);

/// Draws of Δ_φ★ over finite unimodular trees. Throws ParameterError unless
/// E[p★] < 1.
MonteCarloMeasure sample_mu_star(const OffspringLaw& p, std::size_t samples, std::uint64_t seed,
                                 std::size_t cap = 1'000'000);

/// μ itself: atoms m^(2)/m^(1) - d with weight p_d.
EmpiricalMeasure exact_mu(const OffspringLaw& p);

/// Law of Δ_φ^(k) over unimodular trees (non-backtracking), one tree per
/// sample with seed mix(seed, i).
MonteCarloMeasure sample_tree_bias(const OffspringLaw& p, std::size_t k, std::size_t samples, std::uint64_t seed);

}  // namespace kbias
