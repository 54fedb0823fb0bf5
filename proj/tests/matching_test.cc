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

#include <algorithm>
#include <numeric>

#include "regulab/errors.h"
#include "regulab/matching.h"

namespace regulab {
namespace {

Preference linear(Point w) {
  Preference p;
  p.w = std::move(w);
  return p;
}

// Scalar features 0, 1, 2 on both sides. Men 0 and 1 like high features,
// man 2 likes low ones; women 0 and 2 like high features, woman 1 low ones.
MatchingMarket hand_market() {
  MatchingMarket m;
  m.men_features = {{0.0}, {1.0}, {2.0}};
  m.women_features = {{0.0}, {1.0}, {2.0}};
  m.men_preferences = {linear({1.0}), linear({1.0}), linear({-1.0})};
  m.women_preferences = {linear({1.0}), linear({-1.0}), linear({1.0})};
  return m;
}

TEST(DeferredAcceptance, HandExample) {
  // Men 0 and 1 both want woman 2, man 2 wants woman 0.
  // Woman 2 prefers the higher feature, so keeps man 1; man 0 then tries
  // woman 1, who is free.
  const MatchOutcome out = deferred_acceptance(hand_market());
  EXPECT_EQ(out.wife_of, (std::vector<std::size_t>{1, 2, 0}));
  EXPECT_EQ(out.husband_of, (std::vector<std::size_t>{2, 0, 1}));
  EXPECT_EQ(out.focal_partner, 1u);
  EXPECT_EQ(out.focal_partner_features, (Point{1.0}));
  EXPECT_TRUE(blocking_pairs(hand_market(), out.wife_of).empty());
}

TEST(BlockingPairs, DetectsUnstableMatching) {
  const auto pairs = blocking_pairs(hand_market(), {2, 1, 0});
  // Man 1 would rather have woman 2, and she prefers him to man 0.
  ASSERT_FALSE(pairs.empty());
  EXPECT_NE(std::find(pairs.begin(), pairs.end(), std::make_pair<std::size_t, std::size_t>(1, 2)),
            pairs.end());
  EXPECT_THROW(blocking_pairs(hand_market(), {0, 0, 1}), ConfigError);
}

TEST(DeferredAcceptance, TiesFollowPolicy) {
  MatchingMarket m = hand_market();
  m.women_features = {{1.0}, {1.0}, {2.0}};
  EXPECT_THROW(deferred_acceptance(m), DegenerateDrawError);
  m.ties = TiePolicy::kBreakByIndex;
  const MatchOutcome out = deferred_acceptance(m);
  EXPECT_TRUE(blocking_pairs(m, out.wife_of).empty());
}

TEST(Preference, Kinds) {
  Preference p = linear({1.0, 2.0});
  const double z[] = {1.0, 1.0};
  EXPECT_DOUBLE_EQ(p(z), 3.0);
  p.kind = PreferenceKind::kStep;
  p.v = {1.0, 0.0};
  p.jump = 0.5;
  EXPECT_DOUBLE_EQ(p(z), 3.5);
  p.kind = PreferenceKind::kLinearBump;
  p.amplitude = 1.0;
  p.center = {1.0, 1.0};
  p.scale = 0.5;
  EXPECT_DOUBLE_EQ(p(z), 4.0);
  EXPECT_EQ(preference_kind_from_string(to_string(PreferenceKind::kLinearBump)),
            PreferenceKind::kLinearBump);
  EXPECT_THROW(preference_kind_from_string("quadratic"), ConfigError);
}

// Man-optimal stable matching by exhaustive search.
std::vector<std::size_t> brute_force(const MatchingMarket& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> stable;
  do {
    if (blocking_pairs(m, perm).empty()) stable.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (const auto& s : stable) {
    bool best = true;
    for (const auto& t : stable) {
      for (std::size_t a = 0; a < n; ++a) {
        if (m.men_preferences[a](m.women_features[t[a]]) >
            m.men_preferences[a](m.women_features[s[a]])) {
          best = false;
        }
      }
    }
    if (best) return s;
  }
  return {};
}

TEST(DeferredAcceptance, MatchesBruteForceOnRandomMarkets) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    MarketModel model;
    model.n_agents = 4 + i % 2;
    model.preference = i % 3 == 0 ? PreferenceKind::kLinearBump : PreferenceKind::kLinear;
    RandomStream stream(SeedSpec{100, {i}});
    Point x{model.feature_dist.sample(stream), model.feature_dist.sample(stream)};
    Point r(model.noise().dimension());
    model.noise().sample(stream, r);
    const MatchingMarket m = model.market(x, r);
    EXPECT_EQ(deferred_acceptance(m).wife_of, brute_force(m)) << i;
  }
}

TEST(MarketModel, NoiseLayoutAndValidation) {
  MarketModel model;
  // Other men (n-1)d, women n d, weights 2 n d.
  EXPECT_EQ(model.noise().dimension(), 2u * 2 + 3u * 2 + 12u);
  model.preference = PreferenceKind::kLinearBump;
  EXPECT_EQ(model.noise().dimension(), 2u * 2 + 3u * 2 + 12u + 12u + 6u);
  model.preference = PreferenceKind::kStep;
  EXPECT_EQ(model.noise().dimension(), 2u * 2 + 3u * 2 + 12u + 12u);
  MarketModel identical;
  identical.identical_women = true;
  EXPECT_THROW(identical.validate(), ConfigError);
  identical.ties = TiePolicy::kBreakByIndex;
  EXPECT_NO_THROW(identical.validate());
  MarketModel atoms;
  atoms.feature_dist = DistributionSpec::categorical({0.5, 0.5});
  EXPECT_THROW(atoms.validate(), ConfigError);
}

TEST(MatchingFactorization, FocalManIsTheInput) {
  MarketModel model;
  const Factorization f = matching_factorization(model);
  EXPECT_TRUE(f.latent.exact_equality());
  RandomStream stream(SeedSpec{5, {}});
  Point r(f.noise.dimension());
  f.noise.sample(stream, r);
  const double x[] = {0.1, -0.2};
  const Point theta = f.evaluate(x, r);
  ASSERT_EQ(theta.size(), 2u);
  const MatchingMarket m = model.market(x, r);
  EXPECT_EQ(m.men_features[model.focal_man], (Point{0.1, -0.2}));
}

TEST(MatchingProbe, LinearPassesStepFails) {
  MarketModel model;
  const double x0[] = {0.0, 0.0};
  const double radii[] = {0.5, 0.1, 0.02, 0.004};
  const auto good = matching_regularity_probe(model, x0, radii, 500, SeedSpec{6, {}});
  EXPECT_TRUE(good.passed);
  model.preference = PreferenceKind::kStep;
  const auto bad = matching_regularity_probe(model, x0, radii, 500, SeedSpec{7, {}});
  EXPECT_FALSE(bad.passed);
  const double leaves[] = {2.0};
  EXPECT_THROW(matching_regularity_probe(model, x0, leaves, 10, SeedSpec{}), ConfigError);
}

}  // namespace
}  // namespace regulab
