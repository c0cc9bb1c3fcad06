#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kbias/exploration.hpp"
#include "kbias/graph.hpp"
#include "kbias/kernels.hpp"
#include "kbias/offspring_law.hpp"

namespace kbias {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kOracleMaxVertices = 10;
inline constexpr std::size_t kOracleMaxSteps = 6;

/// All k-walks of a graph, as vertex sequences. Parallel edges and the two
/// half-edges of a self-loop give distinct edge-level walks; walks with the
/// same vertex sequence are collapsed and counted in `multiplicity`.
struct WalkSet {
  ExplorationKind kind = ExplorationKind::Backtracking;
  std::size_t k = 0;
  std::vector<std::vector<Vertex>> walks;
  std::vector<std::uint64_t> multiplicity;

  std::size_t size() const noexcept { return walks.size(); }
};

/// Backtracking walks (any neighbor each step) or non-backtracking walks
/// (never back along the half-edge just crossed). Throws ParameterError for
/// a lazy kind and PreconditionError beyond 10 vertices or 6 steps.
WalkSet enumerate_walks(const Graph& g, std::size_t k, ExplorationKind kind);

/// P^(k)(start, ·) summed over walks: weight Π_{l<k} 1/d_{i_l} for
/// backtracking, 1/d_{i_0} Π_{0<l<k} 1/(d_{i_l} - 1) for non-backtracking.
/// The lazy kind uses the k-th power of the dense matrix δI + (1-δ)P with δ
/// taken exactly from its binary value.
std::vector<Rational> oracle_k_step_exact(const Graph& g, Vertex start, std::size_t k, const Exploration& e);
DistVector oracle_k_step(const Graph& g, Vertex start, std::size_t k, const Exploration& e);

struct OracleAverageBias {
  /// (1/n) Σ_i (Σ_j P^(k)(i, j) d_j - d_i).
  Rational definitional;
  /// (1/2n) Σ_walks (mult / Π_{0<l<k} w_l) (d_{i_k} - d_{i_0})² / (d_{i_k} d_{i_0}),
  /// w_l = d_{i_l} (backtracking) or d_{i_l} - 1 (non-backtracking).
  Rational symmetrized;
};

/// Average bias by walk enumeration, both forms (bt and nb only).
OracleAverageBias oracle_avg_bias(const Graph& g, std::size_t k, ExplorationKind kind);

/// Exact average bias by a rational backward recursion over vertices (bt,
/// lazy) or directed edges (nb). No size guard; used for exhaustive sweeps.
Rational exact_avg_bias(const Graph& g, std::size_t k, const Exploration& e);

/// Exact per-vertex biases by the same recursion.
std::vector<Rational> exact_biases(const Graph& g, std::size_t k, const Exploration& e);

struct TreeEnumeration {
  /// Σ over finite unimodular trees with ≤ max_vertices vertices of
  /// P{tree} · value(tree).
  double partial_mean = 0.0;
  double covered_mass = 0.0;
  /// 1 - covered_mass: trees that are larger (or infinite).
  double residual_mass = 0.0;
  /// |true mean - partial_mean| ≤ error_bound.
  double error_bound = 0.0;
};

/// Expectation of Δ_φ★ by enumerating unimodular trees vertex by vertex.
/// Every tree has |Δ_φ★| ≤ the largest possible degree, which bounds the
/// truncation error.
TreeEnumeration enumerate_mu_star_mean(const OffspringLaw& p, std::size_t max_vertices = 12);

/// Expectation of m^(2)/m^(1) - d_φ by enumerating the root degree.
double enumerate_mu_mean(const OffspringLaw& p);

}  // namespace kbias
