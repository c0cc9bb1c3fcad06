#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kbias/exploration.hpp"
#include "kbias/generators.hpp"
#include "kbias/graph.hpp"
#include "kbias/measures.hpp"

namespace kbias {

enum class Support { Vertices, DirectedEdges };

/// Probability vector over the vertices or the directed edges of a graph.
///
/// The checked factories validate non-negativity and renormalize; push
/// operations return their raw result without renormalizing, so
/// accumulated drift stays observable.
class DistVector {
 public:
  DistVector() = default;

  /// Throws ParameterError on negative/non-finite weights or zero total,
  /// and when the total is off from 1 by more than 1e-9.
  static DistVector normalized(Support support, std::vector<double> weights);
  static DistVector dirac(Support support, std::size_t size, std::size_t index);
  static DistVector uniform(Support support, std::size_t size);
  /// No checks, no renormalization.
  static DistVector raw(Support support, std::vector<double> weights);

  Support support() const noexcept { return support_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  double total() const;

 private:
  DistVector(Support support, std::vector<double> weights) : support_(support), weights_(std::move(weights)) {}

  Support support_ = Support::Vertices;
  std::vector<double> weights_;
};

/// One step of the simple random walk: d ↦ d P with P(i, j) = A_ij / d_i.
/// Throws KernelError if d puts mass on an isolated vertex.
DistVector bt_push(const Graph& g, const DistVector& d);

/// d ↦ δ d + (1 - δ) d P. Throws ParameterError unless 0 < δ < 1.
DistVector lazy_push(const Graph& g, const DistVector& d, double delta);

/// One step of the non-backtracking chain on directed edges: mass on
/// u → v spreads uniformly over the out-edges of v other than v → u (the
/// twin half-edge), i.e. weight 1 / (d_v - 1) each. Throws KernelError if
/// mass reaches a vertex of degree < 2.
DistVector edge_push(const Graph& g, const DistVector& d);

/// Vertex law of the head of a directed-edge distribution.
DistVector project_to_heads(const Graph& g, const DistVector& edges);
/// Uniform law over the out-edges of `start`.
DistVector lift_start(const Graph& g, Vertex start);

/// Non-backtracking k-step law from `start`: δ_start for k = 0, otherwise
/// lift, k - 1 edge-chain steps, project. Throws KernelError when the graph
/// has a vertex of degree < 2.
DistVector nb_k_step(const Graph& g, Vertex start, std::size_t k);

/// k-step law P^(k)(start, ·) for any exploration (k = 0 is δ_start).
DistVector k_step(const Graph& g, Vertex start, std::size_t k, const Exploration& e);

/// Δ_i^(k) = Σ_j P^(k)(i, j) d_j - d_i from the forward k-step law.
double bias_k(const Graph& g, Vertex i, std::size_t k, const Exploration& e);

struct BiasProfile {
  std::size_t k = 0;
  Exploration exploration;
  /// Δ_i^(k) per vertex.
  std::vector<double> values;
  /// μ_n^(k) = (1/n) Σ δ_{Δ_i^(k)}.
  EmpiricalMeasure measure;
  /// Δ_[n]^(k) = (1/n) Σ Δ_i^(k).
  double mean = 0.0;
  /// μ_n^(k)([0, ∞)).
  double nonneg_fraction = 0.0;
};

/// Throws KernelError if the graph is not valid for the exploration.
void require_valid(const Graph& g, const Exploration& e);

/// All vertex biases at level k via the backward recursion y_k = P y_{k-1},
/// y_0 = degrees (edge-chain analogue for non-backtracking): O(k |E|) for
/// every vertex at once.
BiasProfile bias_all(const Graph& g, std::size_t k, const Exploration& e);

/// Calls visit(k, values) for k = 1..k_max with the per-vertex biases at
/// level k, reusing the backward recursion between levels.
void for_each_bias_level(const Graph& g, std::size_t k_max, const Exploration& e,
                         const std::function<void(std::size_t, std::span<const double>)>& visit);

/// Builds the BiasProfile for already-computed per-vertex values.
BiasProfile make_bias_profile(std::size_t k, const Exploration& e, std::vector<double> values);

struct AnnealedBias {
  std::size_t replicas = 0;
  /// Equal-weight mixture of the per-replica μ_n^(k).
  EmpiricalMeasure measure;
  /// Per-replica mean biases Δ_[n]^(k).
  std::vector<double> replica_means;
  double mean = 0.0;
  /// Standard error of `mean` across replicas (0 for a single replica).
  double std_error = 0.0;
};

/// Monte Carlo estimate of the annealed measure E_n[μ_n^(k)]. Replica r uses
/// spec with seed mix(spec.seed, r). Errors from a replica are rethrown with
/// the replica index in the message.
AnnealedBias annealed_bias(const GenSpec& spec, std::size_t k, const Exploration& e, std::size_t replicas);

}  // namespace kbias
