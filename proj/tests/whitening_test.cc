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
#include <filesystem>
#include <limits>

#include "regulab/errors.h"
#include "regulab/scenarios.h"
#include "regulab/whitening.h"

namespace regulab {
namespace {

TEST(Chain, IdentityIsIdentity) {
  const auto chain = ConditionalCdfChain::identity(1, 2);
  const double x[] = {0.3};
  const double r[] = {0.25, 0.75};
  const Whitened w = chain.whiten(x, r);
  EXPECT_FALSE(w.clamped);
  EXPECT_DOUBLE_EQ(w.c[0], 0.25);
  EXPECT_DOUBLE_EQ(w.c[1], 0.75);
}

TEST(Chain, ShiftModelCdfMatchesClosedForm) {
  const auto model = shift_noise_model();
  const auto fit = model.sample(100000, SeedSpec{1, {}});
  const auto chain = ConditionalCdfChain::fit(fit.x, fit.r);
  double worst = 0.0;
  for (double x : {0.1, 0.5, 0.9}) {
    const double xv[] = {x};
    for (double t = -0.1; t < 2.1; t += 0.02) {
      worst = std::max(worst, std::abs(chain.cdf(xv, {}, t) - std::clamp(t - x, 0.0, 1.0)));
    }
  }
  EXPECT_LT(worst, 0.03);
}

TEST(Chain, PreWhitenedDataGivesNearIdentity) {
  const auto model = white_noise_model();
  const auto fit = model.sample(100000, SeedSpec{2, {}});
  const auto chain = ConditionalCdfChain::fit(fit.x, fit.r);
  const double x[] = {0.4};
  for (double t = 0.05; t < 1.0; t += 0.1) EXPECT_NEAR(chain.cdf(x, {}, t), t, 0.02);
}

TEST(Chain, RoundTripAndQuantileInverse) {
  const auto model = shift_noise_model_2d();
  const auto fit = model.sample(60000, SeedSpec{3, {}});
  const auto chain = ConditionalCdfChain::fit(fit.x, fit.r);
  const auto held = model.sample(500, SeedSpec{4, {}});
  std::size_t checked = 0;
  for (std::size_t i = 0; i < held.x.size(); ++i) {
    const Whitened w = chain.whiten(held.x.row(i), held.r.row(i));
    if (w.clamped) continue;
    ++checked;
    const Point back = chain.unwhiten(held.x.row(i), w.c);
    EXPECT_NEAR(back[0], held.r(i, 0), 1e-9);
    EXPECT_NEAR(back[1], held.r(i, 1), 1e-9);
  }
  EXPECT_GT(checked, 400u);
}

TEST(Chain, WhitenedComponentsAreInUnitInterval) {
  const auto model = shift_noise_model();
  const auto fit = model.sample(20000, SeedSpec{5, {}});
  const auto chain = ConditionalCdfChain::fit(fit.x, fit.r);
  const double x[] = {0.5};
  const double far[] = {10.0};
  const Whitened w = chain.whiten(x, far);
  EXPECT_TRUE(w.clamped);
  EXPECT_GE(w.c[0], 0.0);
  EXPECT_LE(w.c[0], 1.0);
}

TEST(Chain, JsonRoundTripIsExact) {
  const auto model = shift_noise_model_2d();
  const auto fit = model.sample(20000, SeedSpec{6, {}});
  const auto chain = ConditionalCdfChain::fit(fit.x, fit.r);
  const auto copy = ConditionalCdfChain::from_json(chain.to_json());
  EXPECT_EQ(copy.to_json(), chain.to_json());
  const double x[] = {0.37};
  const double r[] = {0.9, 0.8};
  EXPECT_EQ(copy.whiten(x, r).c, chain.whiten(x, r).c);

  const auto path = std::filesystem::temp_directory_path() / "regulab_chain_test.json";
  chain.save(path.string());
  EXPECT_EQ(ConditionalCdfChain::load(path.string()).to_json(), chain.to_json());
  std::filesystem::remove(path);
}

TEST(Chain, RejectsWrongFormatVersion) {
  auto j = ConditionalCdfChain::identity(1, 1).to_json();
  j["version"] = 99;
  EXPECT_THROW(ConditionalCdfChain::from_json(j), DataError);
}

TEST(Chain, FitErrors) {
  SampleSet x(0, 1), r(0, 1);
  const double a[] = {0.5};
  x.push_back(a);
  r.push_back(a);
  EXPECT_THROW(ConditionalCdfChain::fit(x, r), ConfigError);
  ChainConfig tiny;
  tiny.min_pairs = 1;
  EXPECT_THROW(ConditionalCdfChain::fit(x, r, tiny), FitError);
  const auto model = shift_noise_model();
  auto fit = model.sample(5000, SeedSpec{7, {}});
  const double nan[] = {std::numeric_limits<double>::quiet_NaN()};
  fit.r.push_back(nan);
  fit.x.push_back(a);
  EXPECT_THROW(ConditionalCdfChain::fit(fit.x, fit.r), DataError);
}

TEST(Whiteness, FittedPassesIdentityFails) {
  const auto model = shift_noise_model();
  const auto fit = model.sample(100000, SeedSpec{8, {}});
  const auto held = model.sample(50000, SeedSpec{9, {}});
  const auto chain = ConditionalCdfChain::fit(fit.x, fit.r);
  EXPECT_TRUE(verify_whiteness(chain, held.x, held.r).passed);
  const auto identity = ConditionalCdfChain::identity(1, 1);
  const WhitenessReport bad = verify_whiteness(identity, held.x, held.r);
  EXPECT_FALSE(bad.passed);
  EXPECT_GT(bad.max_x_correlation, 0.3);
}

TEST(Whiteness, TwoDimensionalModel) {
  const auto model = shift_noise_model_2d();
  const auto fit = model.sample(100000, SeedSpec{10, {}});
  const auto held = model.sample(50000, SeedSpec{11, {}});
  const auto chain = ConditionalCdfChain::fit(fit.x, fit.r);
  const WhitenessReport rep = verify_whiteness(chain, held.x, held.r);
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.ks.size(), 2u);
}

TEST(WhitenedFactorization, ComposesToTheOriginalMap) {
  const auto model = shift_noise_model();
  const auto fit = model.sample(50000, SeedSpec{12, {}});
  auto chain = std::make_shared<const ConditionalCdfChain>(
      ConditionalCdfChain::fit(fit.x, fit.r));
  const WhitenedFactorization wf = whiten_model(model, chain);
  const Factorization f = wf.factorization();
  EXPECT_EQ(f.noise.dimension(), 1u);
  const double x[] = {0.2};
  const double r[] = {0.7};
  const Whitened w = chain->whiten(x, r);
  EXPECT_NEAR(wf.t_prime(x, w.c)[0], model.t_map(x, r)[0], 1e-9);
  EXPECT_NEAR(f.evaluate(x, w.c)[0], 0.7, 1e-9);
}

}  // namespace
}  // namespace regulab
