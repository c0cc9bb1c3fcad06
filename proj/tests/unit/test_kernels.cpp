#include <cmath>

#include <gtest/gtest.h>

#include "graphs.hpp"
#include "kbias/errors.hpp"
#include "kbias/generators.hpp"
#include "kbias/kernels.hpp"
#include "kbias/stationary.hpp"

namespace kbias {
namespace {

using testing::complete;
using testing::cycle;
using testing::path;
using testing::star;

const Exploration kBt = Exploration::backtracking();
const Exploration kNb = Exploration::non_backtracking();

void expect_law(const DistVector& d, std::vector<double> expected, double tol = 1e-15) {
  ASSERT_EQ(d.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(d[i], expected[i], tol) << "index " << i;
}

DistVector vdirac(const Graph& g, Vertex i) { return DistVector::dirac(Support::Vertices, g.num_vertices(), i); }

TEST(BtPush, PathExamples) {
  const auto g = path(3);
  expect_law(bt_push(g, vdirac(g, 1)), {0.5, 0.0, 0.5});
  expect_law(bt_push(g, vdirac(g, 0)), {0.0, 1.0, 0.0});
}

TEST(BtPush, TriangleKeepsUniform) {
  const auto g = cycle(3);
  expect_law(bt_push(g, DistVector::uniform(Support::Vertices, 3)), {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

TEST(BtPush, MassOnIsolatedVertex) {
  const auto g = Graph::build(3, std::vector<Edge>{{0, 1}});
  EXPECT_THROW(bt_push(g, vdirac(g, 2)), KernelError);
}

TEST(LazyPush, Definition) {
  const auto g = path(3);
  expect_law(lazy_push(g, vdirac(g, 0), 0.5), {0.5, 0.5, 0.0});
  EXPECT_THROW(lazy_push(g, vdirac(g, 0), 0.0), ParameterError);
  EXPECT_THROW(lazy_push(g, vdirac(g, 0), 1.0), ParameterError);
  EXPECT_THROW(Exploration::lazy(1.5), ParameterError);
}

TEST(LazyPush, StationaryFixedPoint) {
  for (const auto& g : {path(4), star(3), testing::figure_a()}) {
    const auto pi = pi_vertex(g);
    const auto next = lazy_push(g, pi, 0.3);
    EXPECT_LE(tv_distance(next, pi), 1e-15);
  }
}

TEST(LazyPush, BipartitePathConverges) {
  // Oracle: the 3x3 lazy matrix M = ½I + ½P; its powers from δ_0 approach π.
  const double M[3][3] = {{0.5, 0.5, 0.0}, {0.25, 0.5, 0.25}, {0.0, 0.5, 0.5}};
  std::vector<double> row{1.0, 0.0, 0.0};
  const auto g = path(3);
  DistVector lazy = vdirac(g, 0);
  DistVector plain = vdirac(g, 0);
  for (int k = 1; k <= 60; ++k) {
    std::vector<double> next(3, 0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) next[j] += row[i] * M[i][j];
    row = next;
    lazy = lazy_push(g, lazy, 0.5);
    plain = bt_push(g, plain);
    expect_law(lazy, row, 1e-15);
  }
  expect_law(lazy, {0.25, 0.5, 0.25}, 1e-12);
  expect_law(plain, {0.5, 0.0, 0.5});
}

TEST(NbKStep, K4TwoSteps) {
  expect_law(nb_k_step(complete(4), 0, 2), {0.0, 1.0 / 3, 1.0 / 3, 1.0 / 3});
}

TEST(NbKStep, ZeroStepsIsDirac) {
  expect_law(nb_k_step(complete(4), 2, 0), {0.0, 0.0, 1.0, 0.0});
}

TEST(NbKStep, TriangleCirculates) {
  expect_law(nb_k_step(cycle(3), 0, 3), {1.0, 0.0, 0.0});
}

TEST(NbKStep, RejectsDegreeOne) {
  EXPECT_THROW(nb_k_step(path(3), 0, 2), KernelError);
  const auto g = path(3);
  const auto lifted = lift_start(g, 1);
  EXPECT_THROW(edge_push(g, lifted), KernelError);
}

TEST(EdgePush, MultigraphForbidsOnlyTheTwin) {
  // Double edge 0=1 plus triangle edges: from 0 -> 1 along copy a, the walk
  // may return to 0 along copy b.
  const auto g = Graph::build(3, std::vector<Edge>{{0, 1}, {0, 1}, {1, 2}, {2, 0}});
  auto start = DistVector::dirac(Support::DirectedEdges, g.num_directed_edges(), 0);  // 0 -> 1, copy a
  const auto next = edge_push(g, start);
  EXPECT_DOUBLE_EQ(next[3], 0.5);  // 1 -> 0 along copy b
  EXPECT_DOUBLE_EQ(next[4], 0.5);  // 1 -> 2
  EXPECT_DOUBLE_EQ(next[1], 0.0);  // twin
}

TEST(BiasK, RegularGraphsHaveZeroBias) {
  const auto lazy = Exploration::lazy(0.4);
  for (const auto& g : {cycle(5), complete(4), complete(5)}) {
    for (Vertex i = 0; i < g.num_vertices(); ++i) {
      for (std::size_t k = 0; k <= 5; ++k) {
        // The forward law sums rounded path weights; the backward route is exact.
        EXPECT_NEAR(bias_k(g, i, k, kBt), 0.0, 1e-14);
        EXPECT_NEAR(bias_k(g, i, k, kNb), 0.0, 1e-14);
        EXPECT_NEAR(bias_k(g, i, k, lazy), 0.0, 1e-14);
        if (k > 0) {
          EXPECT_EQ(bias_all(g, k, kBt).values[i], 0.0);
          EXPECT_EQ(bias_all(g, k, kNb).values[i], 0.0);
        }
      }
    }
  }
}

TEST(BiasK, PathOneStep) {
  EXPECT_DOUBLE_EQ(bias_k(path(3), 0, 1, kBt), 1.0);
  EXPECT_DOUBLE_EQ(bias_k(path(3), 1, 1, kBt), -1.0);
}

TEST(BiasK, StarTwoSteps) {
  for (Vertex i = 0; i < 4; ++i) EXPECT_NEAR(bias_k(star(3), i, 2, kBt), 0.0, 1e-15);
}

TEST(BiasAll, KindIndependenceAtLevelOne) {
  for (const auto& g : {testing::figure_a(), testing::figure_b(), complete(5)}) {
    const auto bt = bias_all(g, 1, kBt);
    const auto nb = bias_all(g, 1, kNb);
    EXPECT_EQ(bt.values, nb.values);
    EXPECT_EQ(bt.measure.to_json()["atoms"].dump(), nb.measure.to_json()["atoms"].dump());
  }
}

TEST(BiasAll, FigureANonBacktrackingZeroAtThree) {
  const auto p = bias_all(testing::figure_a(), 3, kNb);
  EXPECT_NEAR(p.mean, 0.0, 1e-15);
  EXPECT_GT(bias_all(testing::figure_a(), 1, kNb).mean, 0.0);
}

TEST(BiasAll, StarMeasure) {
  const auto p = bias_all(star(3), 1, kBt);
  ASSERT_EQ(p.measure.size(), 2u);
  EXPECT_EQ(p.measure.atoms()[0].value, -2.0);
  EXPECT_EQ(p.measure.atoms()[0].weight, 0.25);
  EXPECT_EQ(p.measure.atoms()[1].value, 2.0);
  EXPECT_EQ(p.measure.atoms()[1].weight, 0.75);
  EXPECT_EQ(p.mean, 1.0);
  EXPECT_EQ(p.nonneg_fraction, 0.75);
}

TEST(BiasAll, BackwardRouteMatchesForwardRoute) {
  const auto lazy = Exploration::lazy(0.3);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GenSpec spec;
    spec.model = GraphModel::Configuration;
    spec.n = 80;
    spec.degree_pmf = OffspringLaw::from_map({{2, 0.3}, {3, 0.4}, {5, 0.3}});
    spec.seed = seed;
    const auto g = generate(spec).graph;
    const auto simple = erase_to_simple(g).graph;
    const auto bt_graph = drop_isolated(simple).graph;
    for (std::size_t k : {0u, 1u, 2u, 5u}) {
      const auto nb = bias_all(g, k, kNb);
      const auto bt = bias_all(bt_graph, k, kBt);
      const auto lz = bias_all(bt_graph, k, lazy);
      for (Vertex i = 0; i < g.num_vertices(); i += 7) EXPECT_NEAR(nb.values[i], bias_k(g, i, k, kNb), 1e-12);
      for (Vertex i = 0; i < bt_graph.num_vertices(); i += 7) {
        EXPECT_NEAR(bt.values[i], bias_k(bt_graph, i, k, kBt), 1e-12);
        EXPECT_NEAR(lz.values[i], bias_k(bt_graph, i, k, lazy), 1e-12);
      }
    }
  }
}

TEST(BiasAll, LevelsVisitInOrder) {
  std::vector<std::size_t> seen;
  for_each_bias_level(testing::figure_a(), 4, kBt, [&](std::size_t k, std::span<const double> v) {
    seen.push_back(k);
    EXPECT_EQ(v.size(), 5u);
  });
  EXPECT_EQ(seen, (std::vector<std::size_t>{1, 2, 3, 4}));
}

TEST(KStep, RowStochastic) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto g = two_core(gen_erdos_renyi(200, 4.0, seed)).graph;
    for (const auto& e : {kBt, kNb, Exploration::lazy(0.5)}) {
      for (Vertex i = 0; i < g.num_vertices(); i += 17) {
        for (std::size_t k = 0; k <= 6; ++k) EXPECT_NEAR(k_step(g, i, k, e).total(), 1.0, 1e-12);
      }
    }
  }
}

TEST(KStep, NonBacktrackingEdgeChainDoublyStochastic) {
  const auto g = two_core(gen_erdos_renyi(150, 4.0, 3)).graph;
  const auto u = DistVector::uniform(Support::DirectedEdges, g.num_directed_edges());
  EXPECT_LE(tv_distance(edge_push(g, u), u), 1e-12);
}

TEST(AnnealedBias, RegularSpecGivesZero) {
  // The raw 3-regular multigraph stays exactly regular.
  GenSpec spec;
  spec.model = GraphModel::Configuration;
  spec.n = 200;
  spec.degree_pmf = OffspringLaw::dirac(3);
  spec.seed = 1;
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_EQ(annealed_bias(spec, k, kNb, 4).mean, 0.0);
}

TEST(AnnealedBias, SingleReplicaEqualsBiasAll) {
  GenSpec spec;
  spec.model = GraphModel::ErdosRenyi;
  spec.n = 300;
  spec.lambda = 4.0;
  spec.seed = 77;
  spec.restrict = Restriction::DropIsolated;
  const auto a = annealed_bias(spec, 2, kBt, 1);
  GenSpec replica = spec;
  replica.seed = mix_seed(spec.seed, 0);
  const auto direct = bias_all(generate(replica).graph, 2, kBt);
  EXPECT_EQ(a.measure, direct.measure);
  EXPECT_EQ(a.mean, direct.mean);
  EXPECT_EQ(a.std_error, 0.0);
}

TEST(AnnealedBias, ErdosRenyiLevelOneMatchesDegreeMoments) {
  // Closed form per replica: Δ_[n]^(1) = (1/n) Σ_{edges uv} (d_u/d_v + d_v/d_u) - mean degree.
  GenSpec spec;
  spec.model = GraphModel::ErdosRenyi;
  spec.n = 500;
  spec.lambda = 4.0;
  spec.seed = 5;
  spec.restrict = Restriction::DropIsolated;
  const std::size_t R = 100;
  const auto a = annealed_bias(spec, 1, kBt, R);
  double closed = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    GenSpec at = spec;
    at.seed = mix_seed(spec.seed, r);
    const auto g = generate(at).graph;
    double s = 0.0;
    for (const auto& e : g.edges()) {
      const double du = g.degree(e.u);
      const double dv = g.degree(e.v);
      s += du / dv + dv / du;
    }
    const double n = static_cast<double>(g.num_vertices());
    closed += s / n - static_cast<double>(g.degree_sum()) / n;
  }
  closed /= static_cast<double>(R);
  EXPECT_NEAR(a.mean, closed, 1e-12);
  // Var/mean of Binomial(n-1, λ/n) is 1 - λ/n; dropping isolated vertices
  // shifts this only slightly.
  EXPECT_NEAR(a.mean, 1.0 - 4.0 / 500.0, 0.1);
  EXPECT_GT(a.std_error, 0.0);
}

TEST(AnnealedBias, ReplicaErrorNamesReplica) {
  GenSpec spec;
  spec.model = GraphModel::ErdosRenyi;
  spec.n = 100;
  spec.lambda = 1.0;
  try {
    annealed_bias(spec, 1, kNb, 3);
    FAIL() << "expected KernelError";
  } catch (const KernelError& e) {
    EXPECT_NE(std::string(e.what()).find("replica 0"), std::string::npos);
  }
  EXPECT_THROW(annealed_bias(spec, 1, kNb, 0), ParameterError);
}

TEST(DistVectorChecks, NormalizedFactory) {
  EXPECT_THROW(DistVector::normalized(Support::Vertices, {0.5, -0.1, 0.6}), ParameterError);
  EXPECT_THROW(DistVector::normalized(Support::Vertices, {0.5, 0.4}), ParameterError);
  const auto d = DistVector::normalized(Support::Vertices, {0.5, 0.5 + 1e-12});
  EXPECT_NEAR(d.total(), 1.0, 1e-15);
}

}  // namespace
}  // namespace kbias
