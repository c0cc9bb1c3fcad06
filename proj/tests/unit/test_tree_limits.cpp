#include <cmath>

#include <gtest/gtest.h>

#include "graphs.hpp"
#include "kbias/errors.hpp"
#include "kbias/oracle.hpp"
#include "kbias/tree_limits.hpp"

namespace kbias {
namespace {

TruncatedTree hand_tree(std::vector<std::uint32_t> offspring, std::vector<std::size_t> level_offset) {
  TruncatedTree t;
  t.offspring = std::move(offspring);
  t.level_offset = std::move(level_offset);
  t.depth = t.level_offset.size() - 2;
  return t;
}

TEST(SizeBias, Examples) {
  const auto regular = size_bias(OffspringLaw::dirac(3));
  EXPECT_EQ(regular[2], 1.0);
  EXPECT_EQ(regular.support_max(), 2u);
  const auto two_four = size_bias(OffspringLaw::from_map({{2, 0.5}, {4, 0.5}}));
  EXPECT_NEAR(two_four[1], 1.0 / 3, 1e-15);
  EXPECT_NEAR(two_four[3], 2.0 / 3, 1e-15);
  EXPECT_EQ(two_four[0] + two_four[2], 0.0);
  EXPECT_THROW(size_bias(OffspringLaw::dirac(0)), ParameterError);
}

TEST(SizeBias, PoissonSelfDuality) {
  for (double lambda : {1.0, 4.0}) {
    const auto p = OffspringLaw::poisson(lambda);
    const auto s = size_bias(p);
    for (std::size_t k = 0; k + 1 < p.pmf().size(); ++k) EXPECT_NEAR(s[k], p[k], 1e-11);
  }
}

TEST(SizeBias, NormalizationAndMeanIdentity) {
  const std::vector<OffspringLaw> laws{
      OffspringLaw::from_map({{1, 0.75}, {2, 0.25}}), OffspringLaw::from_map({{3, 0.5}, {4, 0.5}}),
      OffspringLaw::from_map({{0, 0.2}, {1, 0.3}, {5, 0.5}}), OffspringLaw::poisson(1.0), OffspringLaw::poisson(4.0)};
  for (const auto& p : laws) {
    const auto s = size_bias(p);
    double total = 0.0;
    for (double w : s.pmf()) total += w;
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(s.mean() + 1.0, p.second_moment() / p.mean(), 1e-12);
  }
}

TEST(TruncatedGw, RegularTree) {
  const auto t = sample_truncated_gw(OffspringLaw::dirac(3), 2, 1);
  EXPECT_EQ(t.level_size(0), 1u);
  EXPECT_EQ(t.level_size(1), 3u);
  EXPECT_EQ(t.level_size(2), 6u);
  EXPECT_EQ(t.offspring[0], 3u);
  for (std::size_t v = 1; v < t.num_vertices(); ++v) EXPECT_EQ(t.degree(v), 3u);
}

TEST(TruncatedGw, IidUnitLawIsAPath) {
  const auto t = sample_truncated_gw(OffspringLaw::dirac(1), 5, 3, TreeMode::IidRoot);
  EXPECT_EQ(t.num_vertices(), 6u);
  for (std::size_t l = 0; l <= 5; ++l) EXPECT_EQ(t.level_size(l), 1u);
}

TEST(TruncatedGw, DeterministicGivenSeed) {
  const auto p = OffspringLaw::from_map({{2, 0.5}, {4, 0.5}});
  EXPECT_EQ(sample_truncated_gw(p, 4, 17).offspring, sample_truncated_gw(p, 4, 17).offspring);
}

TEST(TruncatedGw, RootOffspringFollowsP) {
  const auto p = OffspringLaw::from_map({{2, 0.5}, {4, 0.5}});
  const int reps = 100000;
  int twos = 0;
  for (int s = 0; s < reps; ++s) twos += sample_truncated_gw(p, 1, static_cast<std::uint64_t>(s)).offspring[0] == 2;
  const double frac = static_cast<double>(twos) / reps;
  EXPECT_LE(std::abs(frac - 0.5), 0.01);
}

TEST(NbBiasOnTree, RegularTreeIsExactlyZero) {
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto t = sample_truncated_gw(OffspringLaw::dirac(3), k, 5);
    EXPECT_EQ(nb_bias_on_tree(t, k), 0.0);
  }
}

TEST(NbBiasOnTree, HandExamples) {
  // Root with two children of offspring 1 and 3; grandchildren are leaves.
  const auto t = hand_tree({2, 1, 3, 0, 0, 0, 0}, {0, 1, 3, 7});
  EXPECT_EQ(nb_bias_on_tree(t, 1), 1.0);
  EXPECT_EQ(nb_bias_on_tree(t, 2), -1.0);
  EXPECT_THROW(nb_bias_on_tree(t, 0), ParameterError);
  EXPECT_THROW(nb_bias_on_tree(t, 3), ParameterError);
  const auto dead = hand_tree({1, 0}, {0, 1, 2, 2});
  EXPECT_THROW(nb_bias_on_tree(dead, 2), KernelError);
}

TEST(NbBiasOnTree, MeanDegreeAtLevelFour) {
  // E[d_{X_k}] = E[D²]/E[D] = 10/3 and E[d_φ] = 3.
  const auto p = OffspringLaw::from_map({{2, 0.5}, {4, 0.5}});
  const auto mc = sample_tree_bias(p, 4, 100000, 21);
  EXPECT_NEAR(mc.mean, 10.0 / 3 - 3.0, 3 * mc.std_error);
}

TEST(FiniteTree, StationaryTreeBiasExamples) {
  EXPECT_EQ(stationary_tree_bias(testing::path(2), 0), 0.0);
  EXPECT_EQ(stationary_tree_bias(testing::path(3), 0), 0.5);
  EXPECT_EQ(stationary_tree_bias(testing::star(3), 0), -1.0);
  EXPECT_EQ(stationary_tree_bias(Graph::build(1, std::vector<Edge>{}), 0), 0.0);
}

TEST(FiniteTree, LazyBiasTendsToClosedForm) {
  const auto p4 = testing::path(4);
  EXPECT_DOUBLE_EQ(bt_bias_on_finite_tree(p4, 0, 1), 0.5);
  EXPECT_NEAR(bt_bias_on_finite_tree(p4, 0, 200), stationary_tree_bias(p4, 0), 1e-12);
  EXPECT_NEAR(bt_bias_on_finite_tree(testing::star(3), 0, 200), -1.0, 1e-12);
  EXPECT_EQ(bt_bias_on_finite_tree(Graph::build(1, std::vector<Edge>{}), 0, 3), 0.0);
}

TEST(FiniteTree, SampledTreesAreSubcriticalTrees) {
  const auto p = OffspringLaw::from_map({{1, 0.75}, {2, 0.25}});
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto t = sample_unimodular_finite_tree(p, rng);
    ASSERT_TRUE(t.has_value());
    EXPECT_EQ(t->num_edges() + 1, t->num_vertices());
    EXPECT_TRUE(analyze_components(*t).connected());
  }
}

TEST(SampleMu, RegularLawIsDiracZero) {
  const auto mc = sample_mu(OffspringLaw::dirac(3), 1000, 1);
  EXPECT_EQ(mc.measure, EmpiricalMeasure::dirac(0.0));
  EXPECT_EQ(exact_mu(OffspringLaw::dirac(3)), EmpiricalMeasure::dirac(0.0));
}

TEST(SampleMu, MeanIsVarianceOverMean) {
  for (double lambda : {1.0, 4.0}) {
    const auto mc = sample_mu(OffspringLaw::poisson(lambda), 100000, 8);
    EXPECT_NEAR(mc.mean, 1.0, 3 * mc.std_error);
  }
  const auto p = OffspringLaw::from_map({{3, 0.5}, {4, 0.5}});
  EXPECT_NEAR(exact_mu(p).mean(), p.variance() / p.mean(), 1e-12);
  EXPECT_DOUBLE_EQ(exact_mu(p).atoms()[0].value, 25.0 / 7 - 4);
}

TEST(SampleMuStar, DegenerateLawGivesDiracZero) {
  const auto p = OffspringLaw::from_map({{0, 0.5}, {1, 0.5}});
  const auto mc = sample_mu_star(p, 2000, 3);
  EXPECT_EQ(mc.measure, EmpiricalMeasure::dirac(0.0));
  EXPECT_EQ(mc.rejected, 0u);
  const auto e = enumerate_mu_star_mean(p);
  EXPECT_EQ(e.partial_mean, 0.0);
  EXPECT_NEAR(e.covered_mass, 1.0, 1e-15);
}

TEST(SampleMuStar, SupercriticalRejected) {
  EXPECT_THROW(sample_mu_star(OffspringLaw::dirac(3), 10, 0), ParameterError);
  EXPECT_THROW(sample_mu_star(OffspringLaw::from_map({{1, 0.25}, {3, 0.75}}), 10, 0), ParameterError);
}

TEST(SampleMuStar, CapCountsRejections) {
  const auto p = OffspringLaw::from_map({{1, 0.75}, {2, 0.25}});
  const auto mc = sample_mu_star(p, 500, 9, 3);
  EXPECT_GT(mc.rejected, 0u);
  EXPECT_EQ(mc.samples, 500u);
}

TEST(ShortLevel, TreeBiasApproachesMu) {
  const auto p = OffspringLaw::from_map({{3, 0.5}, {4, 0.5}});
  const auto mu = exact_mu(p);
  double last = 1.0;
  for (std::size_t k : {2, 4, 6, 8}) {
    const double d = levy_distance(sample_tree_bias(p, k, 20000, 5).measure, mu);
    EXPECT_LT(d, last) << "k=" << k;
    last = d;
  }
}

TEST(NonCommutation, MeansOfMuAndMuStarDiffer) {
  const auto p = OffspringLaw::from_map({{1, 0.75}, {2, 0.25}});
  const auto mu = sample_mu(p, 100000, 1);
  const auto star = sample_mu_star(p, 100000, 2);
  const double se = std::hypot(mu.std_error, star.std_error);
  EXPECT_GT(std::abs(mu.mean - star.mean), 5 * se);
  EXPECT_NEAR(mu.mean, enumerate_mu_mean(p), 3 * mu.std_error);
  const auto e = enumerate_mu_star_mean(p, 12);
  EXPECT_NEAR(star.mean, e.partial_mean, 3 * star.std_error + e.error_bound);
}

}  // namespace
}  // namespace kbias
