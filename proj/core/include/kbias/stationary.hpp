#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kbias/exploration.hpp"
#include "kbias/graph.hpp"
#include "kbias/kernels.hpp"
#include "kbias/measures.hpp"

namespace kbias {

/// π(i) = d_i / Σ_j d_j. Throws KernelError on an isolated vertex.
DistVector pi_vertex(const Graph& g);

/// Uniform law on the directed edges, stationary for the edge chain.
DistVector pi_edges(const Graph& g);

/// π^(c)(i) = d_i / Σ_{j ∈ C(i)} d_j: one probability vector per component,
/// stored side by side. Throws KernelError on an isolated vertex.
std::vector<double> pi_component(const Graph& g);

enum class BiasScope { Global, Component };

std::string_view scope_name(BiasScope scope);
BiasScope parse_scope(std::string_view name);

/// Δ^(st)_i = Σ_j π(j) d_j - d_i = Σd² / Σd - d_i, with the sums taken over
/// the whole graph or over the component of i.
std::vector<double> stationary_bias_values(const Graph& g, BiasScope scope = BiasScope::Global);
/// μ_n^(∞) (global) or μ_n^(∞,c) (component).
EmpiricalMeasure stationary_bias(const Graph& g, BiasScope scope = BiasScope::Global);

/// ½ Σ |a - b|. Throws ParameterError when the supports differ.
double tv_distance(const DistVector& a, const DistVector& b);

struct MixingOptions {
  std::size_t k_max = 100;
  std::vector<double> eps{0.25, 1e-2, 1e-4};
  /// Number of start states drawn without replacement (0 = every start).
  /// A sampled profile is a lower bound of the worst case.
  std::size_t sample_starts = 0;
  std::uint64_t seed = 0;
  /// A start whose distance falls below stop_fraction * min(eps) is no
  /// longer pushed; its last distance stands in for later steps (an upper
  /// bound, since distance to stationarity never increases). Crossings of
  /// every requested eps stay exact. 0 disables.
  double stop_fraction = 0.1;
};

/// D_n(k) = max over start states of the total-variation distance between
/// the k-step law and the stationary law, for k = 1..k_max.
struct MixingProfile {
  Exploration exploration;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> k_values;
  /// Vertex chain for bt and lazy; edge chain (start = each directed edge)
  /// for nb.
  std::vector<double> D_values;
  /// nb only: vertex-level laws (lifted starts projected to heads) against
  /// the degree-proportional law.
  std::vector<double> D_vertex_values;
  std::vector<double> eps;
  std::vector<std::optional<std::size_t>> crossings;
  std::vector<std::optional<std::size_t>> vertex_crossings;
  /// D is still above 1e-12 (and above the early-stop threshold) at k_max and
  /// has dropped by less than 1% since ceil(k_max / 2): a periodic or
  /// reducible chain, or k_max too small.
  bool plateau = false;
  std::size_t starts_used = 0;
  bool sampled = false;

  /// First k with D(k) ≤ eps, on the edge chain for nb.
  std::optional<std::size_t> crossing(double eps) const;

  /// CSV `k,D,kind,n,seed`; nb writes edge-level rows with kind "nb" and
  /// vertex-level rows with kind "nb-vertex".
  void write_csv(std::ostream& out, const std::vector<std::string>& comments = {}) const;
};

/// Throws KernelError when the graph is not valid for the exploration and
/// ParameterError on k_max = 0 or an eps outside (0, 1).
MixingProfile mixing_profile(const Graph& g, const Exploration& e, const MixingOptions& options = {});

}  // namespace kbias
