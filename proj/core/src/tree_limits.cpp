#include "kbias/tree_limits.hpp"

#include <cmath>

#include "kbias/errors.hpp"
#include "kbias/exploration.hpp"
#include "kbias/kernels.hpp"
#include "kbias/parallel.hpp"

namespace kbias {

namespace {

MonteCarloMeasure summarize(std::vector<double> values, std::size_t rejected) {
  MonteCarloMeasure out;
  out.samples = values.size();
  out.rejected = rejected;
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  long double ss = 0.0L;
  for (double v : values) ss += (v - mean) * (v - mean);
  out.mean = static_cast<double>(mean);
  if (values.size() > 1) {
    out.std_error = static_cast<double>(std::sqrt(ss / static_cast<long double>(values.size() - 1) /
                                                  static_cast<long double>(values.size())));
  }
  out.measure = EmpiricalMeasure::from_values(values);
  return out;
}

void require_samples(std::size_t samples) {
  if (samples == 0) throw ParameterError("Monte Carlo estimate needs at least one sample");
}

// Degree sums of one finite unimodular tree, or nothing past the cap.
struct TreeSums {
  std::uint64_t sum = 0;
  std::uint64_t square_sum = 0;
  std::uint32_t root_degree = 0;
};

std::optional<TreeSums> grow_tree_sums(const OffspringLaw& p, const OffspringLaw& star, Rng& rng,
                                       std::size_t cap) {
  TreeSums s;
  s.root_degree = p.sample(rng);
  s.sum = s.root_degree;
  s.square_sum = static_cast<std::uint64_t>(s.root_degree) * s.root_degree;
  std::uint64_t pending = s.root_degree;
  std::uint64_t vertices = 1 + pending;
  while (pending > 0) {
    if (vertices > cap) return std::nullopt;
    const std::uint64_t d = star.sample(rng) + 1ULL;
    s.sum += d;
    s.square_sum += d * d;
    pending += d - 2;
    vertices += d - 1;
  }
  return s;
}

}  // namespace

TruncatedTree sample_truncated_gw(const OffspringLaw& p, std::size_t depth, std::uint64_t seed, TreeMode mode) {
  const OffspringLaw star = mode == TreeMode::Unimodular ? size_bias(p) : p;
  Rng rng(seed);
  TruncatedTree t;
  t.depth = depth;
  t.level_offset = {0, 1};
  t.offspring.push_back(p.sample(rng));
  for (std::size_t level = 1; level <= depth; ++level) {
    std::size_t children = 0;
    for (std::size_t v = t.level_offset[level - 1]; v < t.level_offset[level]; ++v) children += t.offspring[v];
    for (std::size_t c = 0; c < children; ++c) t.offspring.push_back(star.sample(rng));
    t.level_offset.push_back(t.offspring.size());
  }
  return t;
}

double nb_bias_on_tree(const TruncatedTree& t, std::size_t k) {
  if (k == 0 || k > t.depth) throw ParameterError("tree bias level must satisfy 1 ≤ k ≤ depth");
  std::vector<double> weight{1.0};
  for (std::size_t level = 0; level < k; ++level) {
    std::vector<double> next;
    next.reserve(t.level_size(level + 1));
    for (std::size_t i = 0; i < weight.size(); ++i) {
      const std::size_t v = t.level_offset[level] + i;
      const std::uint32_t off = t.offspring[v];
      if (off == 0) {
        throw KernelError("tree vertex " + std::to_string(v) + " at level " + std::to_string(level) +
                          " has no offspring");
      }
      const double share = weight[i] / static_cast<double>(off);
      next.insert(next.end(), off, share);
    }
    weight.swap(next);
  }
  double expected = 0.0;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    expected += weight[i] * static_cast<double>(t.degree(t.level_offset[k] + i));
  }
  return expected - static_cast<double>(t.degree(0));
}

std::optional<Graph> sample_unimodular_finite_tree(const OffspringLaw& p, Rng& rng, std::size_t cap) {
  const OffspringLaw star = size_bias(p);
  std::vector<Edge> edges;
  std::vector<std::uint32_t> offspring{p.sample(rng)};
  for (std::size_t v = 0; v < offspring.size(); ++v) {
    for (std::uint32_t c = 0; c < offspring[v]; ++c) {
      if (offspring.size() >= cap) return std::nullopt;
      edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>(offspring.size())});
      offspring.push_back(star.sample(rng));
    }
  }
  return Graph::build(offspring.size(), edges);
}

double bt_bias_on_finite_tree(const Graph& tree, Vertex root, std::size_t k, double delta) {
  if (root >= tree.num_vertices()) throw ParameterError("root out of range");
  if (tree.num_edges() == 0) return 0.0;
  return bias_k(tree, root, k, Exploration::lazy(delta));
}

double stationary_tree_bias(const Graph& tree, Vertex root) {
  if (root >= tree.num_vertices()) throw ParameterError("root out of range");
  if (tree.num_edges() == 0) return 0.0;
  return static_cast<double>(tree.degree_square_sum()) / static_cast<double>(tree.degree_sum()) -
         static_cast<double>(tree.degree(root));
}

MonteCarloMeasure sample_mu(const OffspringLaw& p, std::size_t samples, std::uint64_t seed) {
  require_samples(samples);
  if (!(p.mean() > 0.0)) throw ParameterError("limit law μ needs E[D] > 0");
  const double ratio = p.second_moment() / p.mean();
  std::vector<double> values(samples);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    values[i] = ratio - static_cast<double>(p.sample(rng));
  });
  return summarize(std::move(values), 0);
}

MonteCarloMeasure sample_mu_star(const OffspringLaw& p, std::size_t samples, std::uint64_t seed, std::size_t cap) {
  require_samples(samples);
  const OffspringLaw star = size_bias(p);
  if (!(star.mean() < 1.0)) {
    throw ParameterError("μ★ needs a subcritical size-biased law, got E[p★] = " + std::to_string(star.mean()));
  }
  std::vector<double> values(samples);
  std::vector<std::size_t> rejected(samples, 0);
  parallel_for(samples, [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    for (;;) {
      const auto sums = grow_tree_sums(p, star, rng, cap);
      if (!sums) {
        ++rejected[i];
        continue;
      }
      values[i] = sums->sum == 0 ? 0.0
                                 : static_cast<double>(sums->square_sum) / static_cast<double>(sums->sum) -
                                       static_cast<double>(sums->root_degree);
      return;
    }
  });
  std::size_t total_rejected = 0;
  for (auto r : rejected) total_rejected += r;
  return summarize(std::move(values), total_rejected);
}

EmpiricalMeasure exact_mu(const OffspringLaw& p) {
  if (!(p.mean() > 0.0)) throw ParameterError("limit law μ needs E[D] > 0");
  const double ratio = p.second_moment() / p.mean();
  std::vector<Atom> atoms;
  for (std::size_t d = 0; d < p.pmf().size(); ++d) {
    if (p[d] > 0.0) atoms.push_back({ratio - static_cast<double>(d), p[d]});
  }
  return EmpiricalMeasure::from_atoms(std::move(atoms));
}

MonteCarloMeasure sample_tree_bias(const OffspringLaw& p, std::size_t k, std::size_t samples, std::uint64_t seed) {
  require_samples(samples);
  std::vector<double> values(samples);
  parallel_for(samples, [&](std::size_t i) {
    values[i] = nb_bias_on_tree(sample_truncated_gw(p, k, mix_seed(seed, i)), k);
  });
  return summarize(std::move(values), 0);
}

}  // namespace kbias
