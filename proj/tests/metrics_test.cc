// Copyright 2026 The Regulab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>

#include "regulab/errors.h"
#include "regulab/metrics.h"
#include "regulab/scenarios.h"

namespace regulab {
namespace {

SampleSet uniform_samples(double lo, double hi, std::size_t n, std::uint64_t seed) {
  return draw(DistributionSpec::uniform(lo, hi), SeedSpec{seed, {}}, n);
}

TEST(Tv, IdenticalAndDisjointLaws) {
  const auto grid = BinGrid::regular({0.0}, {2.0}, {20});
  const SampleSet a = uniform_samples(0.0, 1.0, 10000, 1);
  const SampleSet b = uniform_samples(1.0, 2.0, 10000, 2);
  EXPECT_DOUBLE_EQ(tv(bin(a, grid), bin(a, grid)), 0.0);
  EXPECT_DOUBLE_EQ(tv(bin(a, grid), bin(b, grid)), 1.0);
}

TEST(Tv, ShiftedUniformsMatchClosedForm) {
  const auto grid = BinGrid::regular({0.0}, {1.5}, {150});
  const SampleSet a = uniform_samples(0.0, 1.0, 200000, 3);
  const SampleSet b = uniform_samples(0.3, 1.3, 200000, 4);
  EXPECT_NEAR(tv(bin(a, grid), bin(b, grid)), 0.3, 0.015);
}

TEST(Tv, OverflowCountsAsOneBin) {
  const auto grid = BinGrid::regular({0.0}, {1.0}, {10});
  const SampleSet a = uniform_samples(2.0, 3.0, 1000, 5);
  const BinnedLaw p = bin(a, grid);
  EXPECT_DOUBLE_EQ(p.overflow, 1.0);
  EXPECT_DOUBLE_EQ(tv(p, p), 0.0);
}

TEST(BinGrid, LocateAndLabels) {
  const auto grid = BinGrid::regular({0.0, 0.0}, {1.0, 1.0}, {2, 4});
  EXPECT_EQ(grid.bin_count(), 8u);
  EXPECT_DOUBLE_EQ(grid.bin_volume(), 0.125);
  const double inside[] = {0.75, 0.1};
  const double outside[] = {1.5, 0.1};
  EXPECT_TRUE(grid.locate(inside).has_value());
  EXPECT_FALSE(grid.locate(outside).has_value());
  const auto labels = BinGrid::labels({-1.0, 1.0});
  const double minus[] = {-1.0};
  const double zero[] = {0.0};
  EXPECT_TRUE(labels.locate(minus).has_value());
  EXPECT_FALSE(labels.locate(zero).has_value());
}

TEST(TvProbe, RejectsBadRadii) {
  const auto s = frac_scenarios();
  const double x0[] = {0.0};
  const double increasing[] = {0.1, 0.5};
  EXPECT_THROW(tv_limit_probe(s.l1, x0, increasing, 100, SeedSpec{}), ConfigError);
}

TEST(TvProbe, ShiftScenarioDecreases) {
  const auto s = frac_scenarios();
  const double x0[] = {0.5};
  const double radii[] = {0.4, 0.1};
  const TvProbeTable t = tv_limit_probe(s.l1, x0, radii, 50000, SeedSpec{6, {}});
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_NEAR(t.rows[0].binned_tv, 0.4, 0.04);
  EXPECT_NEAR(t.rows[1].binned_tv, 0.1, 0.04);
}

TEST(Ks, UniformAndShifted) {
  const SampleSet u = uniform_samples(0.0, 1.0, 20000, 7);
  EXPECT_LT(ks_uniform(u.data()), 0.015);
  const SampleSet v = uniform_samples(0.2, 1.2, 20000, 8);
  EXPECT_NEAR(ks_two_sample(u.data(), v.data()), 0.2, 0.02);
  EXPECT_NEAR(ks_statistic({0.5}, [](double t) { return std::clamp(t, 0.0, 1.0); }), 0.5,
              1e-12);
}

TEST(Correlation, PearsonAndSpearman) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{1, 4, 9, 16, 25};
  const std::vector<double> c{5, 4, 3, 2, 1};
  EXPECT_NEAR(spearman_correlation(a, b), 1.0, 1e-12);
  EXPECT_NEAR(spearman_correlation(a, c), -1.0, 1e-12);
  EXPECT_LT(pearson_correlation(a, b), 1.0);
  EXPECT_NEAR(pearson_correlation(a, c), -1.0, 1e-12);
  // Tied ranks are averaged.
  const std::vector<double> t{1, 1, 2, 2, 3};
  EXPECT_NEAR(spearman_correlation(t, t), 1.0, 1e-12);
}

TEST(Jumps, StepIsFlaggedSmoothIsNot) {
  std::vector<double> grid, smooth, step, se(41, 0.001);
  for (int i = 0; i <= 40; ++i) {
    const double x = -1.0 + i * 0.05;
    grid.push_back(x);
    smooth.push_back(0.5 + 0.2 * std::sin(x));
    step.push_back(x < 0.01 ? 0.9 : 0.1);
  }
  EXPECT_TRUE(modulus_and_jumps(grid, smooth, se).jumps.empty());
  const CurveReport r = modulus_and_jumps(grid, step, se);
  ASSERT_EQ(r.jumps.size(), 1u);
  EXPECT_NEAR(r.jumps[0].size, 0.8, 1e-12);
  EXPECT_NEAR(r.jumps[0].location, 0.025, 1e-12);
  // The modulus is non-decreasing in delta.
  for (std::size_t k = 1; k < r.modulus.size(); ++k) {
    EXPECT_GE(r.modulus[k].sup_difference, r.modulus[k - 1].sup_difference);
  }
}

TEST(Jumps, NoiseWithinErrorBarsIsIgnored) {
  std::vector<double> grid{0.0, 0.1, 0.2}, values{0.5, 0.8, 0.5}, se{0.1, 0.1, 0.1};
  EXPECT_TRUE(modulus_and_jumps(grid, values, se).jumps.empty());
}

TEST(Boxes, UnionVolume) {
  BoxSet set({Box{{0.0, 0.0}, {2.0, 1.0}}, Box{{1.0, 0.0}, {3.0, 2.0}}});
  EXPECT_NEAR(set.union_volume(), 2.0 + 4.0 - 1.0, 1e-12);
  const double p[] = {2.5, 1.5};
  EXPECT_TRUE(set.contains(p));
  const double q[] = {0.0, 2.0};
  EXPECT_NEAR(set.distance(q), 1.0, 1e-12);
}

// Outer band of width delta around [0,1]^2 under U[0,2]^2.
double annulus_oracle(double delta) {
  return (2.0 * delta + M_PI * delta * delta / 4.0) / 4.0;
}

TEST(Annulus, SampleAndBinnedAgreeWithClippedArea) {
  const BoxSet j({Box{{0.0, 0.0}, {1.0, 1.0}}});
  const SampleSet law = draw(DistributionSpec::uniform(0.0, 2.0, 2), SeedSpec{9, {}}, 200000);
  for (double delta : {0.2, 0.05}) {
    EXPECT_NEAR(annulus_mass(j, law, delta), annulus_oracle(delta), 0.004) << delta;
  }
  const auto grid = BinGrid::regular({0.0, 0.0}, {2.0, 2.0}, {40, 40});
  EXPECT_NEAR(annulus_mass(j, bin(law, grid), 0.2), annulus_oracle(0.2), 0.01);
}

TEST(BoxCover, DiscIsCoveredWithinEpsilon) {
  const auto disc = [](std::span<const double> p) {
    return (p[0] - 0.5) * (p[0] - 0.5) + (p[1] - 0.5) * (p[1] - 0.5) <= 0.16;
  };
  const BoxCover c = box_cover(disc, Box{{0.0, 0.0}, {1.0, 1.0}}, 0.05, SeedSpec{10, {}});
  EXPECT_TRUE(c.achieved);
  EXPECT_LE(c.symmetric_difference, 0.05);
  EXPECT_NEAR(c.cover.union_volume(), M_PI * 0.16, 0.05);
}

}  // namespace
}  // namespace regulab
