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
#include <numeric>
#include <set>

#include "regulab/errors.h"
#include "regulab/parallel.h"
#include "regulab/sampling.h"

namespace regulab {
namespace {

// Published known-answer vectors for Philox4x32-10.
TEST(Philox, KnownAnswers) {
  using W = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}),
            (W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          {0xa4093822, 0x299f31d0}),
            (W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Seeds, SplitIsDeterministicAndDistinct) {
  const SeedSpec root{7, {}};
  EXPECT_EQ(split(root, 3), split(root, 3));
  EXPECT_EQ(split(split(root, 1), 2), split(root, {1, 2}));
  std::set<std::uint64_t> firsts;
  for (std::uint64_t i = 0; i < 200; ++i) {
    RandomStream s(split(root, i));
    firsts.insert(s());
  }
  EXPECT_EQ(firsts.size(), 200u);
  RandomStream a(split(root, 5));
  RandomStream b(split(root, 5));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(RandomStream, UniformAndGaussianMoments) {
  RandomStream s(SeedSpec{11, {}});
  const int n = 200000;
  double su = 0.0, su2 = 0.0, sg = 0.0, sg2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    su2 += u * u;
    const double g = s.gaussian();
    sg += g;
    sg2 += g * g;
  }
  EXPECT_NEAR(su / n, 0.5, 0.003);
  EXPECT_NEAR(su2 / n - std::pow(su / n, 2), 1.0 / 12.0, 0.002);
  EXPECT_NEAR(sg / n, 0.0, 0.01);
  EXPECT_NEAR(sg2 / n, 1.0, 0.01);
}

TEST(RandomStream, OpenUniformAvoidsEndpoints) {
  RandomStream s(SeedSpec{3, {}});
  for (int i = 0; i < 100000; ++i) {
    const double u = s.open_uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RandomStream, UnitDirectionHasUnitNorm) {
  RandomStream s(SeedSpec{4, {}});
  for (int i = 0; i < 100; ++i) {
    const Point d = s.unit_direction(3);
    EXPECT_NEAR(std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]), 1.0, 1e-12);
  }
}

TEST(Distribution, CategoricalFrequencies) {
  const auto spec = DistributionSpec::categorical({0.25, 0.75});
  const SampleSet s = draw(spec, SeedSpec{5, {}}, 100000);
  double ones = 0.0;
  for (double v : s.data()) ones += v;
  EXPECT_NEAR(ones / 100000.0, 0.75, 0.005);
  EXPECT_FALSE(spec.absolutely_continuous());
}

TEST(Distribution, UniformRangeAndDimension) {
  const SampleSet s = draw(DistributionSpec::uniform(-2.0, 3.0, 2), SeedSpec{6, {}}, 5000);
  EXPECT_EQ(s.dimension(), 2u);
  EXPECT_EQ(s.size(), 5000u);
  for (double v : s.data()) {
    EXPECT_GE(v, -2.0);
    EXPECT_LE(v, 3.0);
  }
}

TEST(Distribution, InvalidSpecsThrow) {
  EXPECT_THROW(DistributionSpec::uniform(1.0, 1.0).validate(), ConfigError);
  EXPECT_THROW(DistributionSpec::gaussian(0.0, -1.0).validate(), ConfigError);
  EXPECT_THROW(DistributionSpec::categorical({}).validate(), ConfigError);
}

TEST(NoiseSpec, BlocksConcatenate) {
  NoiseSpec spec({DistributionSpec::uniform(0.0, 1.0, 2), DistributionSpec::gaussian(5.0, 0.1)});
  EXPECT_EQ(spec.dimension(), 3u);
  const SampleSet s = draw(spec, SeedSpec{8, {}}, 2000);
  double mean = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_LE(s(i, 0), 1.0);
    mean += s(i, 2);
  }
  EXPECT_NEAR(mean / 2000.0, 5.0, 0.02);
}

TEST(Draw, IndependentOfWorkerCount) {
  const auto spec = DistributionSpec::gaussian(0.0, 1.0, 2);
  set_worker_count(1);
  const SampleSet a = draw(spec, SeedSpec{9, {1}}, 30000);
  set_worker_count(4);
  const SampleSet b = draw(spec, SeedSpec{9, {1}}, 30000);
  set_worker_count(0);
  EXPECT_EQ(a.data(), b.data());
}

TEST(SampleSet, RowsAndColumns) {
  SampleSet s(0, 2);
  const double r0[] = {1.0, 2.0};
  const double r1[] = {3.0, 4.0};
  s.push_back(r0);
  s.push_back(r1);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.column(1), (std::vector<double>{2.0, 4.0}));
  EXPECT_EQ(s.point(1), (Point{3.0, 4.0}));
}

}  // namespace
}  // namespace regulab
