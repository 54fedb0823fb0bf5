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

// One-to-one matching markets with feature-based preferences and the
// men-proposing deferred acceptance algorithm.
//
// Agent i ranks a partner with features z by P_i(z). The focal man's
// features play the role of X, everything else (other features and the
// preference parameters) is the noise R, and the focal man's partner's
// features are the latent L_a.

#ifndef REGULAB_MATCHING_H_
#define REGULAB_MATCHING_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "regulab/dgp.h"
#include "regulab/sampling.h"

namespace regulab {

enum class PreferenceKind {
  kLinear,      // w . z
  kLinearBump,  // w . z + A exp(-|z - c|^2 / (2 s^2))
  kStep,        // w . z + J 1[v . z > 0]; discontinuous, a negative control
};

std::string to_string(PreferenceKind k);
PreferenceKind preference_kind_from_string(const std::string& s);

enum class TiePolicy { kError, kBreakByIndex };

struct Preference {
  PreferenceKind kind = PreferenceKind::kLinear;
  Point w;
  double amplitude = 0.0;
  Point center;
  double scale = 1.0;
  Point v;
  double jump = 0.0;

  double operator()(std::span<const double> z) const;
};

struct MatchingMarket {
  std::vector<Point> men_features;
  std::vector<Point> women_features;
  std::vector<Preference> men_preferences;
  std::vector<Preference> women_preferences;
  std::size_t focal_man = 0;
  TiePolicy ties = TiePolicy::kError;

  std::size_t size() const { return men_features.size(); }
  void validate() const;
};

struct MatchOutcome {
  std::vector<std::size_t> wife_of;
  std::vector<std::size_t> husband_of;
  std::size_t focal_partner = 0;
  Point focal_partner_features;
};

// Man-optimal stable matching. Equal preference values raise
// DegenerateDrawError unless ties are broken by index.
MatchOutcome deferred_acceptance(const MatchingMarket& market);

// Every (man, woman) pair that would rather be together than with their
// partners under `wife_of`.
std::vector<std::pair<std::size_t, std::size_t>> blocking_pairs(
    const MatchingMarket& market, const std::vector<std::size_t>& wife_of);

// Generation spec for random markets around a focal man.
struct MarketModel {
  std::size_t n_agents = 3;
  std::size_t feature_dim = 2;
  std::size_t focal_man = 0;
  // Law of every feature coordinate except the focal man's.
  DistributionSpec feature_dist = DistributionSpec::uniform(-1.0, 1.0);
  PreferenceKind preference = PreferenceKind::kLinear;
  DistributionSpec weight_dist = DistributionSpec::gaussian(0.0, 1.0);
  double bump_amplitude = 1.0;
  DistributionSpec center_dist = DistributionSpec::uniform(-1.0, 1.0);
  DistributionSpec scale_dist = DistributionSpec::uniform(0.2, 0.5);
  double step_jump = 1.0;
  // All women share one feature vector; needs kBreakByIndex.
  bool identical_women = false;
  TiePolicy ties = TiePolicy::kError;
  Point domain_lo{-1.0, -1.0};
  Point domain_hi{1.0, 1.0};

  // Rejects discrete feature or parameter laws and inconsistent sizes.
  void validate() const;
  InputDomain domain() const;
  NoiseSpec noise() const;
  MatchingMarket market(std::span<const double> x, std::span<const double> r) const;
};

Factorization matching_factorization(const MarketModel& model);

struct MatchingProbeRow {
  double radius = 0.0;
  double change_fraction = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

struct MatchingProbeReport {
  Point x0;
  std::vector<MatchingProbeRow> rows;
  std::size_t resampled = 0;
  double threshold = 0.05;
  double sigma = 2.0;
  bool passed = false;
  std::vector<std::string> reasons;
};

// Trial t draws the market noise from split(seed, {0, t}) and a direction u_t
// from split(seed, {1, t}); both are held fixed across radii, and the
// fraction of trials whose focal partner differs between x0 and
// x0 + radius * u_t is reported. Passes when the column is non-increasing
// within `sigma` standard errors and the final entry is below `threshold`.
MatchingProbeReport matching_regularity_probe(const MarketModel& model,
                                              std::span<const double> x0,
                                              std::span<const double> radii,
                                              std::size_t trials,
                                              const SeedSpec& seed,
                                              double threshold = 0.05,
                                              double sigma = 2.0);

}  // namespace regulab

#endif  // REGULAB_MATCHING_H_
