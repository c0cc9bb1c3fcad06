#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbias/graph.hpp"
#include "kbias/offspring_law.hpp"

namespace kbias {

enum class GraphModel { ErdosRenyi, Configuration };

/// Post-pass applied after generation (and after erasure). TwoCore is the
/// 2-core of the largest component.
enum class Restriction { None, DropIsolated, Giant, TwoCore };

std::string_view restriction_name(Restriction r);

/// Everything needed to reproduce one random graph.
struct GenSpec {
  GraphModel model = GraphModel::ErdosRenyi;
  std::size_t n = 0;
  /// Mean degree; Erdős–Rényi only (edge probability lambda / n).
  double lambda = 0.0;
  /// Configuration model: either a degree law sampled i.i.d. per vertex...
  std::optional<OffspringLaw> degree_pmf;
  /// ...or an explicit degree sequence (takes precedence; n is its length).
  std::vector<std::uint32_t> degree_seq;
  std::uint64_t seed = 0;
  /// Collapse multi-edges and delete self-loops after generation.
  bool erase = false;
  Restriction restrict = Restriction::None;

  /// Throws ParameterError on invalid combinations.
  void validate() const;
  nlohmann::json to_json() const;
  /// Throws ConfigError on malformed JSON.
  static GenSpec from_json(const nlohmann::json& j);
};

struct GraphMeta {
  std::string model;
  std::size_t model_n = 0;
  std::uint64_t seed = 0;
  bool parity_fixed = false;
  bool erased = false;
  std::size_t loops_removed = 0;
  std::size_t multi_edges_removed = 0;
  std::string restriction = "none";
  std::size_t n = 0;
  std::size_t edges = 0;

  nlohmann::json to_json() const;
};

struct GeneratedGraph {
  Graph graph;
  GraphMeta meta;
  /// Vertex of the raw model output that each vertex of `graph` came from.
  std::vector<Vertex> original;
};

/// G(n, p) with p = lambda / n, sampled by geometric skipping over the
/// n(n-1)/2 pairs. Throws ParameterError unless n ≥ 2 and 0 < lambda < n.
Graph gen_erdos_renyi(std::size_t n, double lambda, std::uint64_t seed);

/// Uniform perfect matching of half-edges. Keeps self-loops and
/// multi-edges. Throws ParameterError on an odd degree sum.
Graph gen_configuration_model(std::span<const std::uint32_t> degrees, std::uint64_t seed);

struct DegreeSequence {
  std::vector<std::uint32_t> degrees;
  bool parity_fixed = false;
};

/// n i.i.d. draws from `pmf`; an odd total is fixed by adding 1 to the
/// degree of one uniformly chosen vertex.
DegreeSequence sample_degree_sequence(const OffspringLaw& pmf, std::size_t n, std::uint64_t seed);

struct EraseResult {
  Graph graph;
  std::size_t loops_removed = 0;
  std::size_t multi_edges_removed = 0;
};

/// Simple graph keeping the first copy of each edge, without self-loops.
EraseResult erase_to_simple(const Graph& g);

/// Full pipeline: model draw, optional erasure, restriction. The degree
/// sequence uses seed mix(seed, 1) and the matching mix(seed, 2); ER uses
/// `seed` directly.
GeneratedGraph generate(const GenSpec& spec);

}  // namespace kbias
