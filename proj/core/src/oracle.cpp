#include "kbias/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "kbias/errors.hpp"

namespace kbias {

namespace {

void guard(const Graph& g, std::size_t k) {
  if (g.num_vertices() > kOracleMaxVertices || k > kOracleMaxSteps) {
    throw PreconditionError("oracle enumeration is limited to " + std::to_string(kOracleMaxVertices) +
                            " vertices and " + std::to_string(kOracleMaxSteps) + " steps");
  }
}

void require_walk_kind(ExplorationKind kind) {
  if (kind == ExplorationKind::Lazy) throw ParameterError("walk enumeration covers bt and nb only");
}

// Edge-level DFS from `start`, collapsing to vertex sequences.
void enumerate_from(const Graph& g, Vertex start, std::size_t k, bool non_backtracking,
                    std::map<std::vector<Vertex>, std::uint64_t>& out) {
  std::vector<Vertex> path{start};
  std::function<void(DirectedEdge, bool)> extend = [&](DirectedEdge last, bool has_last) {
    if (path.size() == k + 1) {
      ++out[path];
      return;
    }
    for (DirectedEdge d : g.out_edges(path.back())) {
      if (non_backtracking && has_last && d == Graph::twin(last)) continue;
      path.push_back(g.head(d));
      extend(d, true);
      path.pop_back();
    }
  };
  extend(0, false);
}

Rational walk_weight(const Graph& g, const std::vector<Vertex>& walk, std::uint64_t mult, bool non_backtracking) {
  Rational w(mult);
  const std::size_t k = walk.size() - 1;
  for (std::size_t l = 0; l < k; ++l) {
    const std::uint32_t d = g.degree(walk[l]);
    const std::uint32_t denom = (non_backtracking && l > 0) ? d - 1 : d;
    if (denom == 0) return Rational(0);
    w /= denom;
  }
  return w;
}

std::vector<Rational> dense_lazy_row(const Graph& g, Vertex start, std::size_t k, double delta) {
  const std::size_t n = g.num_vertices();
  const Rational lazy(delta);
  const Rational move = Rational(1) - lazy;
  std::vector<Rational> x(n, Rational(0));
  x[start] = 1;
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<Rational> next(n, Rational(0));
    for (Vertex i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      next[i] += lazy * x[i];
      const Rational share = move * x[i] / g.degree(i);
      for (const auto& nb : g.neighbors(i)) {
        const std::uint32_t count = nb.vertex == i ? 2 * nb.multiplicity : nb.multiplicity;
        next[nb.vertex] += share * count;
      }
    }
    x.swap(next);
  }
  return x;
}

}  // namespace

WalkSet enumerate_walks(const Graph& g, std::size_t k, ExplorationKind kind) {
  require_walk_kind(kind);
  guard(g, k);
  std::map<std::vector<Vertex>, std::uint64_t> collapsed;
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    enumerate_from(g, s, k, kind == ExplorationKind::NonBacktracking, collapsed);
  }
  WalkSet set;
  set.kind = kind;
  set.k = k;
  for (auto& [walk, mult] : collapsed) {
    set.walks.push_back(walk);
    set.multiplicity.push_back(mult);
  }
  return set;
}

std::vector<Rational> oracle_k_step_exact(const Graph& g, Vertex start, std::size_t k, const Exploration& e) {
  guard(g, k);
  if (start >= g.num_vertices()) throw ParameterError("start vertex out of range");
  if (e.kind == ExplorationKind::Lazy) return dense_lazy_row(g, start, k, e.delta);
  const bool nb = e.kind == ExplorationKind::NonBacktracking;
  std::map<std::vector<Vertex>, std::uint64_t> walks;
  enumerate_from(g, start, k, nb, walks);
  std::vector<Rational> law(g.num_vertices(), Rational(0));
  for (const auto& [walk, mult] : walks) law[walk.back()] += walk_weight(g, walk, mult, nb);
  return law;
}

DistVector oracle_k_step(const Graph& g, Vertex start, std::size_t k, const Exploration& e) {
  const auto exact = oracle_k_step_exact(g, start, k, e);
  std::vector<double> w(exact.size());
  for (std::size_t i = 0; i < exact.size(); ++i) w[i] = exact[i].convert_to<double>();
  return DistVector::raw(Support::Vertices, std::move(w));
}

OracleAverageBias oracle_avg_bias(const Graph& g, std::size_t k, ExplorationKind kind) {
  const WalkSet set = enumerate_walks(g, k, kind);
  const bool nb = kind == ExplorationKind::NonBacktracking;
  const std::size_t n = g.num_vertices();
  OracleAverageBias out;
  for (std::size_t w = 0; w < set.size(); ++w) {
    const auto& walk = set.walks[w];
    const Rational a(g.degree(walk.back()));
    const Rational b(g.degree(walk.front()));
    out.definitional += walk_weight(g, walk, set.multiplicity[w], nb) * (a - b);

    Rational c(set.multiplicity[w]);
    for (std::size_t l = 1; l < k; ++l) {
      const std::uint32_t d = g.degree(walk[l]);
      c /= nb ? d - 1 : d;
    }
    out.symmetrized += c * (a - b) * (a - b) / (a * b);
  }
  out.definitional /= n;
  out.symmetrized /= 2 * n;
  return out;
}

std::vector<Rational> exact_biases(const Graph& g, std::size_t k, const Exploration& e) {
  require_valid(g, e);
  const std::size_t n = g.num_vertices();
  std::vector<Rational> degree(n);
  for (Vertex i = 0; i < n; ++i) degree[i] = g.degree(i);
  if (k == 0) return std::vector<Rational>(n, Rational(0));

  std::vector<Rational> y(n);
  if (e.kind == ExplorationKind::NonBacktracking) {
    const std::size_t m = g.num_directed_edges();
    std::vector<Rational> f(m);
    for (DirectedEdge d = 0; d < m; ++d) f[d] = degree[g.head(d)];
    for (std::size_t step = 1; step < k; ++step) {
      std::vector<Rational> sum(n, Rational(0));
      for (DirectedEdge d = 0; d < m; ++d) sum[g.tail(d)] += f[d];
      std::vector<Rational> next(m);
      for (DirectedEdge d = 0; d < m; ++d) {
        const Vertex v = g.head(d);
        next[d] = (sum[v] - f[Graph::twin(d)]) / (g.degree(v) - 1);
      }
      f.swap(next);
    }
    for (Vertex i = 0; i < n; ++i) {
      Rational s(0);
      for (DirectedEdge d : g.out_edges(i)) s += f[d];
      y[i] = s / g.degree(i);
    }
  } else {
    const Rational lazy = e.kind == ExplorationKind::Lazy ? Rational(e.delta) : Rational(0);
    y = degree;
    for (std::size_t step = 0; step < k; ++step) {
      std::vector<Rational> next(n);
      for (Vertex i = 0; i < n; ++i) {
        Rational s(0);
        for (DirectedEdge d : g.out_edges(i)) s += y[g.head(d)];
        next[i] = lazy * y[i] + (Rational(1) - lazy) * s / g.degree(i);
      }
      y.swap(next);
    }
  }
  for (Vertex i = 0; i < n; ++i) y[i] -= degree[i];
  return y;
}

Rational exact_avg_bias(const Graph& g, std::size_t k, const Exploration& e) {
  Rational total(0);
  for (const auto& b : exact_biases(g, k, e)) total += b;
  return total / g.num_vertices();
}

TreeEnumeration enumerate_mu_star_mean(const OffspringLaw& p, std::size_t max_vertices) {
  if (max_vertices == 0) throw ParameterError("tree enumeration needs max_vertices ≥ 1");
  const OffspringLaw star = size_bias(p);
  const std::size_t max_degree = std::max<std::size_t>(p.support_max(), star.support_max() + 1);

  long double mean = 0.0L;
  long double covered = 0.0L;
  // pending: vertices whose offspring is still undrawn.
  std::function<void(std::size_t, std::size_t, std::uint64_t, std::uint64_t, std::uint32_t, long double)> grow =
      [&](std::size_t pending, std::size_t vertices, std::uint64_t sum, std::uint64_t squares, std::uint32_t root,
          long double prob) {
        if (pending == 0) {
          covered += prob;
          if (sum > 0) {
            mean += prob * (static_cast<long double>(squares) / static_cast<long double>(sum) - root);
          }
          return;
        }
        for (std::size_t c = 0; c < star.pmf().size(); ++c) {
          if (star[c] <= 0.0 || vertices + c > max_vertices) continue;
          const std::uint64_t d = c + 1;
          grow(pending - 1 + c, vertices + c, sum + d, squares + d * d, root, prob * star[c]);
        }
      };
  for (std::size_t d = 0; d < p.pmf().size(); ++d) {
    if (p[d] <= 0.0 || 1 + d > max_vertices) continue;
    grow(d, 1 + d, d, static_cast<std::uint64_t>(d) * d, static_cast<std::uint32_t>(d), p[d]);
  }

  TreeEnumeration out;
  out.partial_mean = static_cast<double>(mean);
  out.covered_mass = static_cast<double>(covered);
  out.residual_mass = std::max(0.0, 1.0 - out.covered_mass);
  out.error_bound = out.residual_mass * static_cast<double>(max_degree);
  return out;
}

double enumerate_mu_mean(const OffspringLaw& p) {
  long double m1 = 0.0L;
  long double m2 = 0.0L;
  for (std::size_t d = 0; d < p.pmf().size(); ++d) {
    m1 += p[d] * static_cast<long double>(d);
    m2 += p[d] * static_cast<long double>(d) * d;
  }
  if (!(m1 > 0.0L)) throw ParameterError("limit law μ needs E[D] > 0");
  long double mean = 0.0L;
  for (std::size_t d = 0; d < p.pmf().size(); ++d) mean += p[d] * (m2 / m1 - static_cast<long double>(d));
  return static_cast<double>(mean);
}

}  // namespace kbias
