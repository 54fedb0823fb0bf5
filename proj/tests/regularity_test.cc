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
#include "regulab/regularity.h"
#include "regulab/scenarios.h"

namespace regulab {
namespace {

Factorization discrete_factorization(const std::string& t_map) {
  Factorization f;
  f.name = t_map;
  f.input_domain = InputDomain::box({-1.0}, {1.0});
  f.noise = DistributionSpec::uniform(-1.0, 1.0);
  f.t_map = named_t_map(t_map);
  f.latent = LatentSpace::discrete({-1.0, 0.0, 1.0});
  return f;
}

RegularityConfig small_config(Point x0) {
  RegularityConfig cfg;
  cfg.x0 = std::move(x0);
  cfg.n = 20000;
  return cfg;
}

TEST(Discrete, NoisyThresholdIsConsistent) {
  const RegularityReport r =
      discrete_regularity_probe(discrete_factorization("sign_diff"), small_config({0.0}),
                                SeedSpec{1, {}});
  EXPECT_EQ(r.kind, RegularityReport::Kind::kDiscrete);
  ASSERT_EQ(r.mismatch.size(), 3u);
  // P(sign(x - R) != sign(-R)) = |x| / 2 for R ~ U[-1,1].
  EXPECT_NEAR(r.mismatch[0].fraction, 0.25, 0.02);
  EXPECT_LT(r.mismatch.back().fraction, 0.05);
  EXPECT_EQ(r.verdict, Verdict::kConsistent);
}

TEST(Discrete, InputThresholdIsViolated) {
  const RegularityReport r = discrete_regularity_probe(discrete_factorization("sign_x"),
                                                       small_config({0.0}), SeedSpec{2, {}});
  EXPECT_EQ(r.verdict, Verdict::kViolated);
  EXPECT_NEAR(r.mismatch.back().fraction, 1.0, 1e-12);
}

TEST(Discrete, AwayFromTheThresholdIsConsistent) {
  const RegularityReport r = discrete_regularity_probe(discrete_factorization("sign_x"),
                                                       small_config({0.6}), SeedSpec{3, {}});
  EXPECT_EQ(r.verdict, Verdict::kConsistent);
}

TEST(Continuous, ShiftIsConsistentProductIsViolated) {
  const auto s = frac_scenarios();
  const RegularityReport good =
      continuous_regularity_probe(s.l1, small_config({0.0}), SeedSpec{4, {}});
  EXPECT_EQ(good.verdict, Verdict::kConsistent);
  EXPECT_TRUE(good.density_bounded);
  EXPECT_NEAR(good.density_estimate, 1.0, 0.3);
  ASSERT_EQ(good.exceedance.size(), 9u);
  // Rows run radius-major; the exceedance for |x| <= radius is 1[radius >= tau].
  EXPECT_NEAR(good.exceedance[0].fraction, 1.0, 1e-12);
  EXPECT_NEAR(good.exceedance.back().fraction, 0.0, 1e-12);

  const RegularityReport bad =
      continuous_regularity_probe(s.l2, small_config({0.0}), SeedSpec{5, {}});
  EXPECT_EQ(bad.verdict, Verdict::kViolated);
  EXPECT_FALSE(bad.density_bounded);
}

TEST(Continuous, ExplicitDensityBoundIsEnforced) {
  const auto s = frac_scenarios();
  RegularityConfig cfg = small_config({0.0});
  cfg.density_bound = 0.5;
  const RegularityReport r = continuous_regularity_probe(s.l1, cfg, SeedSpec{6, {}});
  EXPECT_FALSE(r.density_bounded);
  EXPECT_EQ(r.verdict, Verdict::kViolated);
}

TEST(Config, Validation) {
  RegularityConfig cfg = small_config({0.0});
  cfg.tau_grid = {0.01};
  EXPECT_THROW(cfg.validate(1), ConfigError);
  cfg = small_config({0.0});
  cfg.radii = {0.1, 0.2};
  EXPECT_THROW(cfg.validate(1), ConfigError);
  cfg = small_config({0.0, 0.0});
  EXPECT_THROW(cfg.validate(1), ConfigError);
}

TEST(RegularityProbe, SelectsKindFromLatent) {
  EXPECT_EQ(regularity_probe(discrete_factorization("sign_diff"), small_config({0.0}),
                             SeedSpec{7, {}})
                .kind,
            RegularityReport::Kind::kDiscrete);
  EXPECT_EQ(regularity_probe(frac_scenarios().l1, small_config({0.0}), SeedSpec{7, {}}).kind,
            RegularityReport::Kind::kContinuous);
}

TEST(Certificate, ShiftPassesProductFails) {
  const auto s = frac_scenarios();
  CertificateOptions opts;
  opts.curve_samples = 20000;
  const auto grid = CurveGrid::linspace(-2.0, 2.0, 41);
  const Certificate good = continuity_certificate(s.l1, frac_task(), small_config({0.0}),
                                                  grid, SeedSpec{8, {}}, opts);
  EXPECT_TRUE(good.passed);
  EXPECT_TRUE(good.curve_report.jumps.empty());
  const Certificate bad = continuity_certificate(s.l2, frac_task(), small_config({0.0}), grid,
                                                 SeedSpec{9, {}}, opts);
  EXPECT_FALSE(bad.passed);
  EXPECT_FALSE(bad.curve_report.jumps.empty());
  EXPECT_FALSE(bad.reasons.empty());
}

TEST(Certificate, ConstantTaskPassesDespiteIrregularity) {
  const auto s = frac_scenarios();
  CertificateOptions opts;
  opts.curve_samples = 5000;
  const Certificate c = continuity_certificate(s.l2, constant_task(0.5), small_config({0.0}),
                                               CurveGrid::linspace(-2.0, 2.0, 21),
                                               SeedSpec{10, {}}, opts);
  EXPECT_TRUE(c.f_constant);
  EXPECT_TRUE(c.passed);
}

}  // namespace
}  // namespace regulab
