#include "kbias/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "kbias/errors.hpp"
#include "kbias/format.hpp"
#include "kbias/parallel.hpp"
#include "kbias/rng.hpp"

namespace kbias {

namespace {

void require_no_isolated(const Graph& g) {
  for (Vertex i = 0; i < g.num_vertices(); ++i) {
    if (g.degree(i) == 0) throw KernelError("stationary law undefined: vertex " + std::to_string(i) + " is isolated");
  }
}

double tv(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

// Dense in-place stepping for the mixing scan; the DistVector pushes
// allocate per call, which dominates for many starts.
class Stepper {
 public:
  Stepper(const Graph& g, const Exploration& e) : g_(g), e_(e) {}

  void vertex_step(std::vector<double>& x, std::vector<double>& scratch) const {
    std::fill(scratch.begin(), scratch.end(), 0.0);
    for (Vertex i = 0; i < g_.num_vertices(); ++i) {
      if (x[i] == 0.0) continue;
      const double share = x[i] / static_cast<double>(g_.degree(i));
      for (DirectedEdge d : g_.out_edges(i)) scratch[g_.head(d)] += share;
    }
    if (e_.kind == ExplorationKind::Lazy) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = e_.delta * x[i] + (1.0 - e_.delta) * scratch[i];
    } else {
      x.swap(scratch);
    }
  }

  void edge_step(std::vector<double>& x, std::vector<double>& scratch, std::vector<double>& inflow) const {
    std::fill(inflow.begin(), inflow.end(), 0.0);
    for (DirectedEdge d = 0; d < x.size(); ++d) inflow[g_.head(d)] += x[d];
    for (Vertex v = 0; v < g_.num_vertices(); ++v) {
      const double denom = static_cast<double>(g_.degree(v) - 1);
      for (DirectedEdge f : g_.out_edges(v)) scratch[f] = (inflow[v] - x[Graph::twin(f)]) / denom;
    }
    x.swap(scratch);
  }

  void project(const std::vector<double>& x, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (DirectedEdge d = 0; d < x.size(); ++d) out[g_.head(d)] += x[d];
  }

 private:
  const Graph& g_;
  Exploration e_;
};

std::optional<std::size_t> first_crossing(const std::vector<double>& D, double eps) {
  for (std::size_t k = 0; k < D.size(); ++k) {
    if (D[k] <= eps) return k + 1;
  }
  return std::nullopt;
}

void fill_from(std::span<double> row, std::size_t from, double value) {
  std::fill(row.begin() + static_cast<std::ptrdiff_t>(from), row.end(), value);
}

}  // namespace

DistVector pi_vertex(const Graph& g) {
  require_no_isolated(g);
  const auto total = static_cast<double>(g.degree_sum());
  std::vector<double> w(g.num_vertices());
  for (Vertex i = 0; i < g.num_vertices(); ++i) w[i] = static_cast<double>(g.degree(i)) / total;
  return DistVector::raw(Support::Vertices, std::move(w));
}

DistVector pi_edges(const Graph& g) {
  if (g.num_edges() == 0) throw KernelError("graph has no edges");
  return DistVector::uniform(Support::DirectedEdges, g.num_directed_edges());
}

std::vector<double> pi_component(const Graph& g) {
  require_no_isolated(g);
  const auto info = analyze_components(g);
  std::vector<double> w(g.num_vertices());
  for (Vertex i = 0; i < g.num_vertices(); ++i) {
    const auto total = static_cast<double>(info.components[info.component_of[i]].degree_sum);
    w[i] = static_cast<double>(g.degree(i)) / total;
  }
  return w;
}

std::string_view scope_name(BiasScope scope) {
  return scope == BiasScope::Global ? "global" : "component";
}

BiasScope parse_scope(std::string_view name) {
  if (name == "global") return BiasScope::Global;
  if (name == "component") return BiasScope::Component;
  throw ParameterError("unknown stationary scope '" + std::string(name) + "' (expected global or component)");
}

std::vector<double> stationary_bias_values(const Graph& g, BiasScope scope) {
  require_no_isolated(g);
  std::vector<double> out(g.num_vertices());
  if (scope == BiasScope::Global) {
    const double ratio = static_cast<double>(g.degree_square_sum()) / static_cast<double>(g.degree_sum());
    for (Vertex i = 0; i < g.num_vertices(); ++i) out[i] = ratio - static_cast<double>(g.degree(i));
    return out;
  }
  const auto info = analyze_components(g);
  std::vector<std::uint64_t> squares(info.count(), 0);
  for (Vertex i = 0; i < g.num_vertices(); ++i) {
    squares[info.component_of[i]] += static_cast<std::uint64_t>(g.degree(i)) * g.degree(i);
  }
  for (Vertex i = 0; i < g.num_vertices(); ++i) {
    const auto c = info.component_of[i];
    const double ratio = static_cast<double>(squares[c]) / static_cast<double>(info.components[c].degree_sum);
    out[i] = ratio - static_cast<double>(g.degree(i));
  }
  return out;
}

EmpiricalMeasure stationary_bias(const Graph& g, BiasScope scope) {
  const auto values = stationary_bias_values(g, scope);
  auto m = EmpiricalMeasure::from_values(values);
  m.meta["scope"] = std::string(scope_name(scope));
  return m;
}

double tv_distance(const DistVector& a, const DistVector& b) {
  if (a.support() != b.support() || a.size() != b.size()) {
    throw ParameterError("total variation distance between laws on different supports");
  }
  return tv(a.weights(), b.weights());
}

std::optional<std::size_t> MixingProfile::crossing(double e) const {
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] == e) return crossings[i];
  }
  return first_crossing(D_values, e);
}

void MixingProfile::write_csv(std::ostream& out, const std::vector<std::string>& comments) const {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "k,D,kind,n,seed\n";
  const std::string kind(kind_name(exploration.kind));
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    out << k_values[i] << ',' << format_double(D_values[i]) << ',' << kind << ',' << n << ',' << seed << '\n';
  }
  for (std::size_t i = 0; i < D_vertex_values.size(); ++i) {
    out << k_values[i] << ',' << format_double(D_vertex_values[i]) << ",nb-vertex," << n << ',' << seed << '\n';
  }
}

MixingProfile mixing_profile(const Graph& g, const Exploration& e, const MixingOptions& options) {
  if (options.k_max == 0) throw ParameterError("mixing profile needs k_max ≥ 1");
  if (options.eps.empty()) throw ParameterError("mixing profile needs at least one eps");
  for (double eps : options.eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("mixing eps must lie in (0, 1), got " + format_double(eps));
  }
  require_valid(g, e);
  if (g.num_edges() == 0) throw KernelError("graph has no edges");

  const bool nb = e.kind == ExplorationKind::NonBacktracking;
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_directed_edges();
  const std::size_t k_max = options.k_max;
  const double stop = options.stop_fraction * *std::min_element(options.eps.begin(), options.eps.end());

  const std::size_t total_starts = nb ? m : n;
  std::vector<std::size_t> starts(total_starts);
  std::iota(starts.begin(), starts.end(), std::size_t{0});
  bool sampled = false;
  if (options.sample_starts > 0 && options.sample_starts < total_starts) {
    Rng rng(options.seed);
    for (std::size_t i = 0; i < options.sample_starts; ++i) {
      std::swap(starts[i], starts[i + rng.below(total_starts - i)]);
    }
    starts.resize(options.sample_starts);
    std::sort(starts.begin(), starts.end());
    sampled = true;
  }
  // NB vertex-level rows use vertex starts; sample them alongside.
  std::vector<std::size_t> vertex_starts;
  if (nb) {
    vertex_starts.resize(n);
    std::iota(vertex_starts.begin(), vertex_starts.end(), std::size_t{0});
    if (sampled && options.sample_starts < n) {
      Rng rng(mix_seed(options.seed, 1));
      for (std::size_t i = 0; i < options.sample_starts; ++i) {
        std::swap(vertex_starts[i], vertex_starts[i + rng.below(n - i)]);
      }
      vertex_starts.resize(options.sample_starts);
      std::sort(vertex_starts.begin(), vertex_starts.end());
    }
  }

  const Stepper stepper(g, e);
  const DistVector pi = pi_vertex(g);
  const std::vector<double> pi_v(pi.weights().begin(), pi.weights().end());
  const std::vector<double> pi_e(m, 1.0 / static_cast<double>(m));

  constexpr std::size_t kBlock = 32;
  auto run_blocks = [&](std::size_t count, auto&& one_start) {
    const std::size_t blocks = (count + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> block_max(blocks, std::vector<double>(k_max, 0.0));
    parallel_for(blocks, [&](std::size_t b) {
      std::vector<double> row(k_max);
      const std::size_t end = std::min(count, (b + 1) * kBlock);
      for (std::size_t s = b * kBlock; s < end; ++s) {
        one_start(s, std::span<double>(row));
        for (std::size_t k = 0; k < k_max; ++k) block_max[b][k] = std::max(block_max[b][k], row[k]);
      }
    });
    std::vector<double> D(k_max, 0.0);
    for (const auto& bm : block_max) {
      for (std::size_t k = 0; k < k_max; ++k) D[k] = std::max(D[k], bm[k]);
    }
    return D;
  };

  MixingProfile profile;
  profile.exploration = e;
  profile.n = n;
  profile.seed = options.seed;
  profile.eps = options.eps;
  profile.sampled = sampled;
  profile.starts_used = starts.size();
  profile.k_values.resize(k_max);
  std::iota(profile.k_values.begin(), profile.k_values.end(), std::size_t{1});

  if (!nb) {
    profile.D_values = run_blocks(starts.size(), [&](std::size_t s, std::span<double> row) {
      std::vector<double> x(n, 0.0);
      std::vector<double> scratch(n);
      x[starts[s]] = 1.0;
      for (std::size_t k = 0; k < k_max; ++k) {
        stepper.vertex_step(x, scratch);
        row[k] = tv(x, pi_v);
        if (row[k] < stop) {
          fill_from(row, k + 1, row[k]);
          return;
        }
      }
    });
  } else {
    profile.D_values = run_blocks(starts.size(), [&](std::size_t s, std::span<double> row) {
      std::vector<double> x(m, 0.0);
      std::vector<double> scratch(m);
      std::vector<double> inflow(n);
      x[starts[s]] = 1.0;
      for (std::size_t k = 0; k < k_max; ++k) {
        stepper.edge_step(x, scratch, inflow);
        row[k] = tv(x, pi_e);
        if (row[k] < stop) {
          fill_from(row, k + 1, row[k]);
          return;
        }
      }
    });
    profile.D_vertex_values = run_blocks(vertex_starts.size(), [&](std::size_t s, std::span<double> row) {
      const Vertex start = static_cast<Vertex>(vertex_starts[s]);
      std::vector<double> x(m, 0.0);
      std::vector<double> scratch(m);
      std::vector<double> inflow(n);
      std::vector<double> heads(n);
      const double share = 1.0 / static_cast<double>(g.degree(start));
      for (DirectedEdge d : g.out_edges(start)) x[d] += share;
      for (std::size_t k = 0; k < k_max; ++k) {
        if (k > 0) stepper.edge_step(x, scratch, inflow);
        stepper.project(x, heads);
        row[k] = tv(heads, pi_v);
        const double edge_tv = tv(x, pi_e);
        if (edge_tv < stop) {
          fill_from(row, k + 1, edge_tv);
          return;
        }
      }
    });
    profile.starts_used += vertex_starts.size();
  }

  for (double eps : profile.eps) {
    profile.crossings.push_back(first_crossing(profile.D_values, eps));
    if (nb) profile.vertex_crossings.push_back(first_crossing(profile.D_vertex_values, eps));
  }
  const double last = profile.D_values.back();
  const double mid = profile.D_values[(k_max + 1) / 2 - 1];
  // Once every start is below the stop threshold the tail is frozen, not flat.
  profile.plateau = last > std::max(1e-12, stop) && last >= 0.99 * mid;
  return profile;
}

}  // namespace kbias
