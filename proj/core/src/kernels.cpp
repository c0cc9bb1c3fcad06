#include "kbias/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kbias/errors.hpp"
#include "kbias/format.hpp"
#include "kbias/parallel.hpp"
#include "kbias/rng.hpp"

namespace kbias {

namespace {

// Biases this close below zero count as non-negative (kernel round-off).
constexpr double kNonnegTolerance = 1e-12;

void require_support(const Graph& g, const DistVector& d, Support support) {
  const std::size_t expected = support == Support::Vertices ? g.num_vertices() : g.num_directed_edges();
  if (d.support() != support || d.size() != expected) {
    throw KernelError(support == Support::Vertices ? "expected a distribution over the graph's vertices"
                                                   : "expected a distribution over the graph's directed edges");
  }
}

// y ↦ P y with P(i, j) = A_ij / d_i, summing over half-edges in out-edge order.
void apply_transition(const Graph& g, std::span<const double> y, std::span<double> out) {
  for (Vertex i = 0; i < g.num_vertices(); ++i) {
    double sum = 0.0;
    for (DirectedEdge e : g.out_edges(i)) sum += y[g.head(e)];
    out[i] = sum / static_cast<double>(g.degree(i));
  }
}

// f ↦ P_edge f: f'(u → v) = (Σ_{v → w} f(v → w) - f(v → u)) / (d_v - 1).
void apply_edge_transition(const Graph& g, std::span<const double> f, std::span<double> vertex_sum,
                           std::span<double> out) {
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    double sum = 0.0;
    for (DirectedEdge e : g.out_edges(v)) sum += f[e];
    vertex_sum[v] = sum;
  }
  for (DirectedEdge e = 0; e < g.num_directed_edges(); ++e) {
    const Vertex v = g.head(e);
    out[e] = (vertex_sum[v] - f[Graph::twin(e)]) / static_cast<double>(g.degree(v) - 1);
  }
}

}  // namespace

DistVector DistVector::normalized(Support support, std::vector<double> weights) {
  long double total = 0.0L;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw ParameterError("distribution weights must be finite and non-negative");
    total += w;
  }
  if (!(total > 0.0L)) throw ParameterError("distribution has zero total weight");
  if (std::abs(static_cast<double>(total - 1.0L)) > 1e-9) {
    throw ParameterError("distribution weights sum to " + format_double(static_cast<double>(total)));
  }
  for (double& w : weights) w = static_cast<double>(w / total);
  return DistVector(support, std::move(weights));
}

DistVector DistVector::dirac(Support support, std::size_t size, std::size_t index) {
  if (index >= size) throw ParameterError("Dirac index out of range");
  std::vector<double> w(size, 0.0);
  w[index] = 1.0;
  return DistVector(support, std::move(w));
}

DistVector DistVector::uniform(Support support, std::size_t size) {
  if (size == 0) throw ParameterError("uniform distribution on an empty set");
  return DistVector(support, std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

DistVector DistVector::raw(Support support, std::vector<double> weights) {
  return DistVector(support, std::move(weights));
}

double DistVector::total() const {
  long double t = 0.0L;
  for (double w : weights_) t += w;
  return static_cast<double>(t);
}

DistVector bt_push(const Graph& g, const DistVector& d) {
  require_support(g, d, Support::Vertices);
  std::vector<double> out(g.num_vertices(), 0.0);
  for (Vertex i = 0; i < g.num_vertices(); ++i) {
    const double mass = d[i];
    if (mass == 0.0) continue;
    if (g.degree(i) == 0) throw KernelError("mass on isolated vertex " + std::to_string(i));
    const double share = mass / static_cast<double>(g.degree(i));
    for (DirectedEdge e : g.out_edges(i)) out[g.head(e)] += share;
  }
  return DistVector::raw(Support::Vertices, std::move(out));
}

DistVector lazy_push(const Graph& g, const DistVector& d, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("laziness delta must lie in (0, 1), got " + format_double(delta));
  }
  const DistVector moved = bt_push(g, d);
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = delta * d[i] + (1.0 - delta) * moved[i];
  return DistVector::raw(Support::Vertices, std::move(out));
}

DistVector edge_push(const Graph& g, const DistVector& d) {
  require_support(g, d, Support::DirectedEdges);
  std::vector<double> inflow(g.num_vertices(), 0.0);
  for (DirectedEdge e = 0; e < g.num_directed_edges(); ++e) inflow[g.head(e)] += d[e];
  std::vector<double> out(g.num_directed_edges(), 0.0);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (inflow[v] == 0.0) continue;
    if (g.degree(v) < 2) throw KernelError("non-backtracking walk reached vertex " + std::to_string(v) + " of degree < 2");
    const double denom = static_cast<double>(g.degree(v) - 1);
    for (DirectedEdge f : g.out_edges(v)) out[f] = (inflow[v] - d[Graph::twin(f)]) / denom;
  }
  return DistVector::raw(Support::DirectedEdges, std::move(out));
}

DistVector project_to_heads(const Graph& g, const DistVector& edges) {
  require_support(g, edges, Support::DirectedEdges);
  std::vector<double> out(g.num_vertices(), 0.0);
  for (DirectedEdge e = 0; e < g.num_directed_edges(); ++e) out[g.head(e)] += edges[e];
  return DistVector::raw(Support::Vertices, std::move(out));
}

DistVector lift_start(const Graph& g, Vertex start) {
  if (start >= g.num_vertices()) throw ParameterError("start vertex out of range");
  if (g.degree(start) == 0) throw KernelError("cannot leave isolated vertex " + std::to_string(start));
  std::vector<double> w(g.num_directed_edges(), 0.0);
  const double share = 1.0 / static_cast<double>(g.degree(start));
  for (DirectedEdge e : g.out_edges(start)) w[e] += share;
  return DistVector::raw(Support::DirectedEdges, std::move(w));
}

void require_valid(const Graph& g, const Exploration& e) {
  if (e.kind == ExplorationKind::Lazy && !(e.delta > 0.0 && e.delta < 1.0)) {
    throw ParameterError("laziness delta must lie in (0, 1), got " + format_double(e.delta));
  }
  const auto report = validate_for_exploration(g, e.kind);
  if (!report.valid) throw KernelError(report.reason);
}

DistVector nb_k_step(const Graph& g, Vertex start, std::size_t k) {
  require_valid(g, Exploration::non_backtracking());
  if (start >= g.num_vertices()) throw ParameterError("start vertex out of range");
  if (k == 0) return DistVector::dirac(Support::Vertices, g.num_vertices(), start);
  DistVector d = lift_start(g, start);
  for (std::size_t step = 1; step < k; ++step) d = edge_push(g, d);
  return project_to_heads(g, d);
}

DistVector k_step(const Graph& g, Vertex start, std::size_t k, const Exploration& e) {
  if (e.kind == ExplorationKind::NonBacktracking) return nb_k_step(g, start, k);
  require_valid(g, e);
  if (start >= g.num_vertices()) throw ParameterError("start vertex out of range");
  DistVector d = DistVector::dirac(Support::Vertices, g.num_vertices(), start);
  for (std::size_t step = 0; step < k; ++step) {
    d = e.kind == ExplorationKind::Lazy ? lazy_push(g, d, e.delta) : bt_push(g, d);
  }
  return d;
}

double bias_k(const Graph& g, Vertex i, std::size_t k, const Exploration& e) {
  const DistVector d = k_step(g, i, k, e);
  double expected = 0.0;
  for (Vertex j = 0; j < g.num_vertices(); ++j) expected += d[j] * static_cast<double>(g.degree(j));
  return expected - static_cast<double>(g.degree(i));
}

void for_each_bias_level(const Graph& g, std::size_t k_max, const Exploration& e,
                         const std::function<void(std::size_t, std::span<const double>)>& visit) {
  require_valid(g, e);
  const std::size_t n = g.num_vertices();
  std::vector<double> degree(n);
  for (Vertex i = 0; i < n; ++i) degree[i] = static_cast<double>(g.degree(i));
  std::vector<double> bias(n);

  if (e.kind == ExplorationKind::NonBacktracking) {
    // f_m(e) = expected degree after m more edge-chain steps from e, counted
    // at the head. Vertex level k reads f_{k-1} averaged over out-edges.
    const std::size_t m = g.num_directed_edges();
    std::vector<double> f(m);
    std::vector<double> next(m);
    std::vector<double> vertex_sum(n);
    for (DirectedEdge d = 0; d < m; ++d) f[d] = degree[g.head(d)];
    for (std::size_t k = 1; k <= k_max; ++k) {
      if (k > 1) {
        apply_edge_transition(g, f, vertex_sum, next);
        f.swap(next);
      }
      for (Vertex i = 0; i < n; ++i) {
        double sum = 0.0;
        for (DirectedEdge d : g.out_edges(i)) sum += f[d];
        bias[i] = sum / degree[i] - degree[i];
      }
      visit(k, bias);
    }
    return;
  }

  std::vector<double> y = degree;
  std::vector<double> moved(n);
  for (std::size_t k = 1; k <= k_max; ++k) {
    apply_transition(g, y, moved);
    if (e.kind == ExplorationKind::Lazy) {
      for (Vertex i = 0; i < n; ++i) y[i] = e.delta * y[i] + (1.0 - e.delta) * moved[i];
    } else {
      y.swap(moved);
    }
    for (Vertex i = 0; i < n; ++i) bias[i] = y[i] - degree[i];
    visit(k, bias);
  }
}

BiasProfile make_bias_profile(std::size_t k, const Exploration& e, std::vector<double> values) {
  BiasProfile profile;
  profile.k = k;
  profile.exploration = e;
  double sum = 0.0;
  std::size_t nonneg = 0;
  for (double v : values) {
    sum += v;
    if (v >= -kNonnegTolerance) ++nonneg;
  }
  const auto n = static_cast<double>(values.size());
  profile.mean = sum / n;
  profile.nonneg_fraction = static_cast<double>(nonneg) / n;
  profile.measure = EmpiricalMeasure::from_values(values);
  profile.values = std::move(values);
  return profile;
}

BiasProfile bias_all(const Graph& g, std::size_t k, const Exploration& e) {
  if (k == 0) {
    require_valid(g, e);
    return make_bias_profile(0, e, std::vector<double>(g.num_vertices(), 0.0));
  }
  std::vector<double> values;
  for_each_bias_level(g, k, e, [&](std::size_t level, std::span<const double> bias) {
    if (level == k) values.assign(bias.begin(), bias.end());
  });
  return make_bias_profile(k, e, std::move(values));
}

AnnealedBias annealed_bias(const GenSpec& spec, std::size_t k, const Exploration& e, std::size_t replicas) {
  if (replicas == 0) throw ParameterError("annealed bias needs at least one replica");
  std::vector<EmpiricalMeasure> measures(replicas);
  std::vector<double> means(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    GenSpec replica = spec;
    replica.seed = mix_seed(spec.seed, r);
    try {
      const auto generated = generate(replica);
      auto profile = bias_all(generated.graph, k, e);
      measures[r] = std::move(profile.measure);
      means[r] = profile.mean;
    } catch (const KernelError& ex) {
      throw KernelError("replica " + std::to_string(r) + ": " + ex.what());
    } catch (const ParameterError& ex) {
      throw ParameterError("replica " + std::to_string(r) + ": " + ex.what());
    } catch (const GraphError& ex) {
      throw GraphError("replica " + std::to_string(r) + ": " + ex.what());
    }
  });

  AnnealedBias out;
  out.replicas = replicas;
  out.measure = EmpiricalMeasure::mixture(measures);
  out.replica_means = means;
  out.mean = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(replicas);
  if (replicas > 1) {
    double ss = 0.0;
    for (double m : means) ss += (m - out.mean) * (m - out.mean);
    out.std_error = std::sqrt(ss / static_cast<double>(replicas - 1) / static_cast<double>(replicas));
  }
  return out;
}

}  // namespace kbias
