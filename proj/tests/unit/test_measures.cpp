#include <sstream>

#include <gtest/gtest.h>

#include "kbias/errors.hpp"
#include "kbias/generators.hpp"
#include "kbias/measures.hpp"
#include "kbias/psi_window.hpp"
#include "kbias/rng.hpp"
#include "kbias/stationary.hpp"

namespace kbias {
namespace {

EmpiricalMeasure random_measure(Rng& rng) {
  std::vector<double> values(1 + rng.below(6));
  for (auto& v : values) v = static_cast<double>(rng.below(7)) * 0.5 - 1.5;
  return EmpiricalMeasure::from_values(values);
}

TEST(Moments, Examples) {
  EXPECT_EQ(EmpiricalMeasure::dirac(0.0).mean(), 0.0);
  const auto m = EmpiricalMeasure::from_atoms({{-2, 0.25}, {2, 0.75}});
  EXPECT_EQ(m.mean(), 1.0);
  EXPECT_EQ(m.moment(2), 4.0);
  EXPECT_THROW(m.moment(0), ParameterError);
  EXPECT_EQ(m.cdf(-3), 0.0);
  EXPECT_EQ(m.cdf(-2), 0.25);
  EXPECT_EQ(m.mass_at_least(0), 0.75);
}

TEST(Construction, SortsAndMerges) {
  const std::vector<double> v{3.0, 1.0, 1.0 + 1e-13, 2.0};
  const auto m = EmpiricalMeasure::from_values(v);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.atoms()[0], (Atom{1.0, 0.5}));
  EXPECT_EQ(m.atoms()[2].value, 3.0);
  EXPECT_THROW(EmpiricalMeasure::from_values(std::vector<double>{}), ParameterError);
  EXPECT_THROW(EmpiricalMeasure::from_atoms({{0, 0.5}}), ParameterError);
  EXPECT_THROW(EmpiricalMeasure::from_atoms({{0, -0.5}, {1, 1.5}}), ParameterError);
}

TEST(Mixture, AveragesParts) {
  const std::vector<EmpiricalMeasure> parts{EmpiricalMeasure::dirac(0), EmpiricalMeasure::dirac(1)};
  const auto m = EmpiricalMeasure::mixture(parts);
  EXPECT_EQ(m, EmpiricalMeasure::from_atoms({{0, 0.5}, {1, 0.5}}));
}

TEST(Distances, IdenticalMeasures) {
  const auto m = EmpiricalMeasure::from_atoms({{-2, 0.25}, {2, 0.75}});
  EXPECT_EQ(levy_distance(m, m), 0.0);
  EXPECT_EQ(ks_distance(m, m), 0.0);
  EXPECT_EQ(w1_distance(m, m), 0.0);
}

TEST(Distances, UnitDiracs) {
  const auto a = EmpiricalMeasure::dirac(0);
  const auto b = EmpiricalMeasure::dirac(1);
  EXPECT_EQ(ks_distance(a, b), 1.0);
  EXPECT_EQ(w1_distance(a, b), 1.0);
  // Any ε < 1 fails at x just below 1: F_b(x) = 0 < F_a(x - ε) - ε = 1 - ε.
  EXPECT_EQ(levy_distance(a, b), 1.0);
}

TEST(Distances, SmallShift) {
  EXPECT_LE(levy_distance(EmpiricalMeasure::dirac(0), EmpiricalMeasure::dirac(1e-3)), 1e-3);
  EXPECT_NEAR(levy_distance(EmpiricalMeasure::dirac(0), EmpiricalMeasure::dirac(1e-3)), 1e-3, 1e-12);
}

TEST(Distances, LevyExactOnTwoAtomShift) {
  // Half the mass moves by 0.2: the Lévy distance is the shift, capped by the
  // moved mass.
  const auto a = EmpiricalMeasure::from_atoms({{0, 0.5}, {1, 0.5}});
  const auto b = EmpiricalMeasure::from_atoms({{0, 0.5}, {1.2, 0.5}});
  EXPECT_NEAR(levy_distance(a, b), 0.2, 1e-12);
  const auto c = EmpiricalMeasure::from_atoms({{0, 0.9}, {5, 0.1}});
  EXPECT_NEAR(levy_distance(c, EmpiricalMeasure::dirac(0)), 0.1, 1e-12);
}

TEST(Distances, RandomTripleProperties) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_measure(rng);
    const auto b = random_measure(rng);
    const auto c = random_measure(rng);
    const double ab = levy_distance(a, b);
    EXPECT_NEAR(ab, levy_distance(b, a), 1e-12);
    EXPECT_LE(ab, levy_distance(a, c) + levy_distance(c, b) + 1e-12);
    EXPECT_LE(ab, ks_distance(a, b) + 1e-12);
    EXPECT_LE(ks_distance(a, b), ks_distance(a, c) + ks_distance(c, b) + 1e-12);
    EXPECT_LE(w1_distance(a, b), w1_distance(a, c) + w1_distance(c, b) + 1e-12);
  }
}

TEST(Distances, MergingAtomsChangesNothing) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_measure(rng);
    const auto b = random_measure(rng);
    // Split every atom of a in two equal halves at the same value.
    std::vector<Atom> split;
    for (const auto& x : a.atoms()) {
      split.push_back({x.value, x.weight / 2});
      split.push_back({x.value, x.weight / 2});
    }
    const auto a2 = EmpiricalMeasure::from_atoms(split);
    EXPECT_EQ(a2.size(), a.size());
    EXPECT_EQ(levy_distance(a2, b), levy_distance(a, b));
    EXPECT_EQ(ks_distance(a2, b), ks_distance(a, b));
    EXPECT_EQ(w1_distance(a2, b), w1_distance(a, b));
  }
}

TEST(Json, RoundTrip) {
  auto m = EmpiricalMeasure::from_atoms({{-0.1, 0.3}, {2.5, 0.7}});
  m.meta["k"] = 3;
  const auto j = m.to_json();
  EXPECT_EQ(j["atoms"][0][0], -0.1);
  const auto back = EmpiricalMeasure::from_json(j);
  EXPECT_EQ(back, m);
  EXPECT_EQ(back.meta["k"], 3);
  EXPECT_THROW(EmpiricalMeasure::from_json({{"atoms", {{1.0}}}}), ParameterError);
}

TEST(Histogram, BinsAndComments) {
  const auto m = EmpiricalMeasure::from_atoms({{0.0, 0.25}, {0.5, 0.25}, {1.0, 0.5}});
  const auto edges = uniform_bin_edges(0.0, 1.0, 2);
  std::ostringstream out;
  write_histogram_csv(out, m, edges, {"hello"});
  EXPECT_EQ(out.str(), "# hello\nbin_left,bin_right,mass\n0,0.5,0.25\n0.5,1,0.75\n");
  const auto degenerate = auto_bin_edges(EmpiricalMeasure::dirac(2.0), 4);
  EXPECT_EQ(degenerate.front(), 1.5);
  EXPECT_EQ(degenerate.back(), 2.5);
  EXPECT_THROW(uniform_bin_edges(1, 1, 3), ParameterError);
}

TEST(PsiWindow, RegularSpecIsZero) {
  GenSpec spec;
  spec.model = GraphModel::Configuration;
  spec.degree_pmf = OffspringLaw::dirac(4);
  spec.seed = 2;
  // The raw multigraph keeps every degree at 4; loops rule out bt.
  const auto w = psi_window(spec, {Exploration::non_backtracking()}, 2, 6, {50, 100});
  EXPECT_EQ(w.value, 0.0);
  EXPECT_EQ(w.table.size(), 2u * 5u);
}

TEST(PsiWindow, PostMixingWindowIsBoundedByTv) {
  // |Δ^(k)_i - Δ^st_i| ≤ D(k)·(d_max - d_min), and the Lévy distance is at
  // most the largest value gap.
  GenSpec spec;
  spec.model = GraphModel::Configuration;
  spec.n = 150;
  spec.degree_pmf = OffspringLaw::from_map({{3, 1.0 / 3}, {4, 1.0 / 3}, {5, 1.0 / 3}});
  // First seed whose multigraph is already simple, so degrees stay in {3,4,5}.
  while (!generate(spec).graph.is_simple()) ++spec.seed;
  const auto g = generate(spec).graph;
  std::uint32_t lo = g.degree(0);
  std::uint32_t hi = lo;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    lo = std::min(lo, g.degree(v));
    hi = std::max(hi, g.degree(v));
  }
  ASSERT_LE(hi - lo, 2u);
  MixingOptions opt;
  opt.k_max = 500;
  opt.eps = {0.01};
  opt.stop_fraction = 0.0;
  const auto profile = mixing_profile(g, Exploration::lazy(0.5), opt);
  ASSERT_TRUE(profile.crossings[0].has_value());
  const std::size_t start = *profile.crossings[0];
  const std::size_t end = start + 20;
  const auto w = psi_window(spec, {Exploration::lazy(0.5)}, start, end, {150});
  double max_d = 0.0;
  for (std::size_t k = start; k <= end; ++k) max_d = std::max(max_d, profile.D_values[k - 1]);
  EXPECT_GT(w.value, 0.0);
  EXPECT_LE(w.value, max_d * (hi - lo));
  EXPECT_LE(w.value, 2 * max_d);
}

TEST(PsiWindow, EmptyWindowRejected) {
  GenSpec spec;
  spec.model = GraphModel::ErdosRenyi;
  spec.lambda = 3.0;
  EXPECT_THROW(psi_window(spec, {Exploration::backtracking()}, 500, 600, {100, 200}), ParameterError);
  EXPECT_THROW(psi_window(spec, {Exploration::backtracking()}, 5, 4, {100}), ParameterError);
}

}  // namespace
}  // namespace kbias
