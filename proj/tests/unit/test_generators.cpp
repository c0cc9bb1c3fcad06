#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <gtest/gtest.h>

#include "kbias/errors.hpp"
#include "kbias/generators.hpp"

namespace kbias {
namespace {

std::vector<Edge> sorted_edges(const Graph& g) {
  std::vector<Edge> e;
  for (auto x : g.edges()) e.push_back({std::min(x.u, x.v), std::max(x.u, x.v)});
  std::sort(e.begin(), e.end(), [](Edge a, Edge b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  return e;
}

TEST(ErdosRenyi, DeterministicGivenSeed) {
  const auto a = gen_erdos_renyi(4, 3.0, 42);
  const auto b = gen_erdos_renyi(4, 3.0, 42);
  EXPECT_EQ(sorted_edges(a), sorted_edges(b));
  EXPECT_TRUE(a.is_simple());
}

TEST(ErdosRenyi, MeanDegreeConcentrates) {
  const double exact = 1999.0 * 5.0 / 2000.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = gen_erdos_renyi(2000, 5.0, seed);
    const double mean = static_cast<double>(g.degree_sum()) / 2000.0;
    EXPECT_NEAR(mean, exact, 0.1 * 5.0);
    EXPECT_TRUE(g.is_simple());
  }
}

TEST(ErdosRenyi, AverageEdgeCountMatchesBinomialMean) {
  double total = 0.0;
  const int reps = 200;
  for (int s = 0; s < reps; ++s) total += static_cast<double>(gen_erdos_renyi(60, 3.0, s).num_edges());
  const double p = 3.0 / 60.0;
  const double pairs = 60.0 * 59.0 / 2.0;
  const double se = std::sqrt(pairs * p * (1 - p) / reps);
  EXPECT_NEAR(total / reps, pairs * p, 4 * se);
}

TEST(ErdosRenyi, TinyLambdaGivesValidGraph) {
  const auto g = gen_erdos_renyi(3, 3e-9, 1);
  EXPECT_EQ(g.num_vertices(), 3u);
  EXPECT_EQ(g.num_edges(), 0u);
}

TEST(ErdosRenyi, RejectsLambdaAtLeastN) {
  EXPECT_THROW(gen_erdos_renyi(4, 4.0, 0), ParameterError);
  EXPECT_THROW(gen_erdos_renyi(1, 0.5, 0), ParameterError);
}

TEST(ConfigurationModel, SingleEdge) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::vector<std::uint32_t> d{1, 1};
    const auto g = gen_configuration_model(d, s);
    ASSERT_EQ(g.num_edges(), 1u);
    EXPECT_EQ(sorted_edges(g).front(), (Edge{0, 1}));
  }
}

TEST(ConfigurationModel, OddSumRejected) {
  const std::vector<std::uint32_t> d{1, 2};
  EXPECT_THROW(gen_configuration_model(d, 0), ParameterError);
}

// Enumerates the 15 perfect matchings of stubs {0a,0b,1a,1b,2a,2b} and
// counts those that form a triangle.
double exact_triangle_fraction() {
  const int owner[6] = {0, 0, 1, 1, 2, 2};
  int total = 0;
  int triangles = 0;
  std::vector<int> open{0, 1, 2, 3, 4, 5};
  std::vector<std::pair<int, int>> pairs;
  std::function<void(std::vector<int>)> rec = [&](std::vector<int> rest) {
    if (rest.empty()) {
      ++total;
      bool loop = false;
      for (auto [a, b] : pairs) loop |= owner[a] == owner[b];
      std::map<std::pair<int, int>, int> count;
      for (auto [a, b] : pairs) ++count[{std::min(owner[a], owner[b]), std::max(owner[a], owner[b])}];
      if (!loop && count.size() == 3) ++triangles;
      return;
    }
    const int first = rest.front();
    for (std::size_t i = 1; i < rest.size(); ++i) {
      std::vector<int> next;
      for (std::size_t j = 1; j < rest.size(); ++j)
        if (j != i) next.push_back(rest[j]);
      pairs.push_back({first, rest[i]});
      rec(next);
      pairs.pop_back();
    }
  };
  rec(open);
  EXPECT_EQ(total, 15);
  return static_cast<double>(triangles) / total;
}

TEST(ConfigurationModel, TriangleFractionMatchesMatchingEnumeration) {
  const double exact = exact_triangle_fraction();
  const std::vector<std::uint32_t> d{2, 2, 2};
  int triangles = 0;
  const int reps = 10000;
  for (int s = 0; s < reps; ++s) {
    const auto g = gen_configuration_model(d, static_cast<std::uint64_t>(s));
    if (g.is_simple()) ++triangles;
  }
  const double se = std::sqrt(exact * (1 - exact) / reps);
  EXPECT_NEAR(static_cast<double>(triangles) / reps, exact, 4 * se);
}

TEST(ConfigurationModel, StubConservation) {
  const std::vector<std::uint32_t> d(1000, 3);
  const auto g = gen_configuration_model(d, 5);
  EXPECT_EQ(g.degree_sum(), 3000u);
  EXPECT_EQ(g.num_edges(), 1500u);
  for (Vertex v = 0; v < 1000; ++v) EXPECT_EQ(g.degree(v), 3u);
}

TEST(DegreeSequence, ParityFixOnDirac) {
  const auto s = sample_degree_sequence(OffspringLaw::dirac(3), 5, 1);
  EXPECT_TRUE(s.parity_fixed);
  EXPECT_EQ(std::count(s.degrees.begin(), s.degrees.end(), 4u), 1);
  EXPECT_EQ(std::count(s.degrees.begin(), s.degrees.end(), 3u), 4);
}

TEST(DegreeSequence, NoFixWhenEven) {
  const auto s = sample_degree_sequence(OffspringLaw::dirac(1), 4, 1);
  EXPECT_FALSE(s.parity_fixed);
  EXPECT_EQ(s.degrees, (std::vector<std::uint32_t>{1, 1, 1, 1}));
}

TEST(DegreeSequence, EmpiricalFractionNearPmf) {
  // P{|X/n - 1/2| > 0.02} for X ~ Bin(10^4, 1/2) is below 7e-5 by Hoeffding
  // (2 exp(-2 n 0.02^2) = 2 e^{-8}).
  const auto p = OffspringLaw::from_map({{3, 0.5}, {4, 0.5}});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = sample_degree_sequence(p, 10000, seed);
    const double threes = static_cast<double>(std::count(s.degrees.begin(), s.degrees.end(), 3u)) / 10000.0;
    EXPECT_GE(threes, 0.48);
    EXPECT_LE(threes, 0.52);
  }
}

TEST(GenSpec, JsonRoundTripAndDeterminism) {
  GenSpec spec;
  spec.model = GraphModel::Configuration;
  spec.n = 300;
  spec.degree_pmf = OffspringLaw::from_map({{3, 0.5}, {4, 0.5}});
  spec.seed = 99;
  spec.erase = true;
  spec.restrict = Restriction::Giant;
  const auto back = GenSpec::from_json(spec.to_json());
  EXPECT_EQ(back.to_json(), spec.to_json());
  const auto a = generate(spec);
  const auto b = generate(back);
  EXPECT_EQ(sorted_edges(a.graph), sorted_edges(b.graph));
  EXPECT_TRUE(a.graph.is_simple());
  EXPECT_TRUE(analyze_components(a.graph).connected());
  EXPECT_EQ(a.meta.to_json()["rng"], "mt19937_64+splitmix64/v1");
}

TEST(GenSpec, ValidationErrors) {
  EXPECT_THROW(GenSpec::from_json({{"model", "nope"}}), ConfigError);
  GenSpec odd;
  odd.model = GraphModel::Configuration;
  odd.degree_seq = {1, 1, 1};
  EXPECT_THROW(odd.validate(), ParameterError);
}

TEST(EraseToSimple, CollapsesMultiEdgesAndLoops) {
  const auto g = Graph::build(3, std::vector<Edge>{{0, 1}, {1, 0}, {1, 1}, {1, 2}});
  const auto r = erase_to_simple(g);
  EXPECT_TRUE(r.graph.is_simple());
  EXPECT_EQ(r.graph.num_edges(), 2u);
  EXPECT_EQ(r.loops_removed, 1u);
  EXPECT_EQ(r.multi_edges_removed, 1u);
}

}  // namespace
}  // namespace kbias
