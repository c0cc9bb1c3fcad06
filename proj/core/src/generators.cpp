#include "kbias/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "kbias/errors.hpp"
#include "kbias/format.hpp"
#include "kbias/rng.hpp"

namespace kbias {

std::string_view restriction_name(Restriction r) {
  switch (r) {
    case Restriction::None: return "none";
    case Restriction::DropIsolated: return "drop_isolated";
    case Restriction::Giant: return "giant";
    case Restriction::TwoCore: return "two_core";
  }
  return "?";
}

namespace {

Restriction parse_restriction(const std::string& s) {
  for (auto r : {Restriction::None, Restriction::DropIsolated, Restriction::Giant, Restriction::TwoCore}) {
    if (s == restriction_name(r)) return r;
  }
  throw ConfigError("unknown restriction '" + s + "' (none, drop_isolated, giant, two_core)");
}

}  // namespace

void GenSpec::validate() const {
  if (model == GraphModel::ErdosRenyi) {
    if (n < 2) throw ParameterError("Erdős–Rényi needs n ≥ 2");
    if (!(lambda > 0.0) || !(lambda < static_cast<double>(n))) {
      throw ParameterError("Erdős–Rényi needs 0 < lambda < n, got lambda = " + format_double(lambda));
    }
    return;
  }
  if (!degree_seq.empty()) {
    const auto total = std::accumulate(degree_seq.begin(), degree_seq.end(), std::uint64_t{0});
    if (total % 2 != 0) throw ParameterError("configuration model degree sequence has odd sum");
    return;
  }
  if (!degree_pmf) throw ParameterError("configuration model needs degree_pmf or degree_seq");
  if (n == 0) throw ParameterError("configuration model needs n ≥ 1");
}

nlohmann::json GenSpec::to_json() const {
  nlohmann::json j;
  if (model == GraphModel::ErdosRenyi) {
    j["model"] = "erdos_renyi";
    j["n"] = n;
    j["lambda"] = lambda;
  } else {
    j["model"] = "configuration";
    if (!degree_seq.empty()) {
      j["degree_seq"] = degree_seq;
    } else {
      j["n"] = n;
      if (degree_pmf) j["degree_pmf"] = degree_pmf->to_json();
    }
  }
  j["seed"] = seed;
  j["erase"] = erase;
  j["restrict"] = std::string(restriction_name(restrict));
  return j;
}

GenSpec GenSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("graph spec must be a JSON object");
  GenSpec spec;
  try {
    const auto model = j.at("model").get<std::string>();
    if (model == "erdos_renyi") {
      spec.model = GraphModel::ErdosRenyi;
      spec.n = j.at("n").get<std::size_t>();
      spec.lambda = j.at("lambda").get<double>();
    } else if (model == "configuration") {
      spec.model = GraphModel::Configuration;
      if (j.contains("degree_seq")) {
        spec.degree_seq = j.at("degree_seq").get<std::vector<std::uint32_t>>();
        spec.n = spec.degree_seq.size();
      } else {
        spec.n = j.at("n").get<std::size_t>();
        spec.degree_pmf = OffspringLaw::from_json(j.at("degree_pmf"));
      }
    } else {
      throw ConfigError("unknown graph model '" + model + "' (erdos_renyi, configuration)");
    }
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.erase = j.value("erase", false);
    spec.restrict = parse_restriction(j.value("restrict", std::string("none")));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("graph spec: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("graph spec: ") + e.what());
  }
  return spec;
}

nlohmann::json GraphMeta::to_json() const {
  return {{"model", model},
          {"model_n", model_n},
          {"seed", seed},
          {"rng", std::string(kRngAlgorithm)},
          {"parity_fixed", parity_fixed},
          {"erased", erased},
          {"loops_removed", loops_removed},
          {"multi_edges_removed", multi_edges_removed},
          {"restriction", restriction},
          {"n", n},
          {"edges", edges}};
}

Graph gen_erdos_renyi(std::size_t n, double lambda, std::uint64_t seed) {
  if (n < 2) throw ParameterError("Erdős–Rényi needs n ≥ 2");
  if (!(lambda > 0.0) || !(lambda < static_cast<double>(n))) {
    throw ParameterError("Erdős–Rényi needs 0 < lambda < n, got lambda = " + format_double(lambda));
  }
  const double p = lambda / static_cast<double>(n);
  const double log_q = std::log1p(-p);
  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(lambda * static_cast<double>(n) / 2.0 * 1.1) + 16);

  // Batagelj–Brandes: walk the pairs (w, v), w < v, in lexicographic order of
  // (v, w), jumping over Geometric(p) non-edges at a time.
  std::uint64_t v = 1;
  std::int64_t w = -1;
  while (v < n) {
    const double skip = std::floor(std::log1p(-rng.uniform()) / log_q);
    if (skip > 4.0 * static_cast<double>(n) * static_cast<double>(n)) break;
    w += 1 + static_cast<std::int64_t>(skip);
    while (w >= static_cast<std::int64_t>(v) && v < n) {
      w -= static_cast<std::int64_t>(v);
      ++v;
    }
    if (v < n) edges.push_back({static_cast<Vertex>(w), static_cast<Vertex>(v)});
  }
  return Graph::build(n, edges);
}

Graph gen_configuration_model(std::span<const std::uint32_t> degrees, std::uint64_t seed) {
  if (degrees.empty()) throw ParameterError("configuration model needs at least one vertex");
  const auto total = std::accumulate(degrees.begin(), degrees.end(), std::uint64_t{0});
  if (total % 2 != 0) throw ParameterError("configuration model degree sequence has odd sum");
  std::vector<Vertex> stubs;
  stubs.reserve(total);
  for (std::size_t v = 0; v < degrees.size(); ++v) stubs.insert(stubs.end(), degrees[v], static_cast<Vertex>(v));

  Rng rng(seed);
  for (std::size_t i = stubs.size(); i > 1; --i) {
    std::swap(stubs[i - 1], stubs[rng.below(i)]);
  }
  std::vector<Edge> edges(stubs.size() / 2);
  for (std::size_t t = 0; t < edges.size(); ++t) edges[t] = {stubs[2 * t], stubs[2 * t + 1]};
  return Graph::build(degrees.size(), edges);
}

DegreeSequence sample_degree_sequence(const OffspringLaw& pmf, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("degree sequence needs n ≥ 1");
  Rng rng(seed);
  DegreeSequence out;
  out.degrees.resize(n);
  std::uint64_t total = 0;
  for (auto& d : out.degrees) {
    d = pmf.sample(rng);
    total += d;
  }
  if (total % 2 != 0) {
    ++out.degrees[rng.below(n)];
    out.parity_fixed = true;
  }
  return out;
}

EraseResult erase_to_simple(const Graph& g) {
  EraseResult out;
  std::set<std::pair<Vertex, Vertex>> seen;
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    if (e.u == e.v) {
      ++out.loops_removed;
      continue;
    }
    const auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second) {
      ++out.multi_edges_removed;
      continue;
    }
    edges.push_back(e);
  }
  out.graph = Graph::build(g.num_vertices(), edges);
  return out;
}

GeneratedGraph generate(const GenSpec& spec) {
  spec.validate();
  GeneratedGraph out;
  out.meta.seed = spec.seed;
  Graph raw;
  if (spec.model == GraphModel::ErdosRenyi) {
    out.meta.model = "erdos_renyi";
    out.meta.model_n = spec.n;
    raw = gen_erdos_renyi(spec.n, spec.lambda, spec.seed);
  } else {
    out.meta.model = "configuration";
    std::vector<std::uint32_t> degrees = spec.degree_seq;
    if (degrees.empty()) {
      auto seq = sample_degree_sequence(*spec.degree_pmf, spec.n, mix_seed(spec.seed, 1));
      degrees = std::move(seq.degrees);
      out.meta.parity_fixed = seq.parity_fixed;
    }
    out.meta.model_n = degrees.size();
    raw = gen_configuration_model(degrees, mix_seed(spec.seed, 2));
  }

  if (spec.erase) {
    auto erased = erase_to_simple(raw);
    raw = std::move(erased.graph);
    out.meta.erased = true;
    out.meta.loops_removed = erased.loops_removed;
    out.meta.multi_edges_removed = erased.multi_edges_removed;
  }

  out.meta.restriction = std::string(restriction_name(spec.restrict));
  if (spec.restrict == Restriction::None) {
    out.original.resize(raw.num_vertices());
    std::iota(out.original.begin(), out.original.end(), Vertex{0});
    out.graph = std::move(raw);
  } else {
    Subgraph sub;
    switch (spec.restrict) {
      case Restriction::DropIsolated: sub = drop_isolated(raw); break;
      case Restriction::Giant: sub = largest_component(raw); break;
      case Restriction::TwoCore: {
        // 2-core of the giant; stripping leaves keeps it connected.
        const auto giant = largest_component(raw);
        sub = two_core(giant.graph);
        for (auto& v : sub.original) v = giant.original[v];
        break;
      }
      case Restriction::None: break;
    }
    out.graph = std::move(sub.graph);
    out.original = std::move(sub.original);
  }
  out.meta.n = out.graph.num_vertices();
  out.meta.edges = out.graph.num_edges();
  return out;
}

}  // namespace kbias
