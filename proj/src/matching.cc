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

#include "regulab/matching.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "regulab/errors.h"
#include "regulab/parallel.h"

namespace regulab {
namespace {

constexpr int kMaxResampleAttempts = 64;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// order[i] lists partners best first; rank[i][j] is the position of j.
struct Ranking {
  std::vector<std::vector<std::size_t>> order;
  std::vector<std::vector<std::size_t>> rank;
};

Ranking rank_partners(const std::vector<Preference>& prefs,
                      const std::vector<Point>& partners, TiePolicy ties,
                      const char* side) {
  const std::size_t n = partners.size();
  Ranking out;
  out.order.resize(prefs.size());
  out.rank.resize(prefs.size());
  std::vector<double> value(n);
  for (std::size_t i = 0; i < prefs.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) value[j] = prefs[i](partners[j]);
    auto& order = out.order[i];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] > value[b]; });
    for (std::size_t k = 1; k < n; ++k) {
      if (value[order[k]] == value[order[k - 1]] && ties == TiePolicy::kError) {
        throw DegenerateDrawError(std::string("tied preference values for ") + side +
                                  " " + std::to_string(i));
      }
    }
    out.rank[i].resize(n);
    for (std::size_t k = 0; k < n; ++k) out.rank[i][order[k]] = k;
  }
  return out;
}

void append(Point& dst, std::span<const double> src, std::size_t& offset,
            std::size_t count) {
  dst.insert(dst.end(), src.begin() + static_cast<std::ptrdiff_t>(offset),
             src.begin() + static_cast<std::ptrdiff_t>(offset + count));
  offset += count;
}

void require_continuous(const DistributionSpec& spec, const std::string& field) {
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(field + "." + e.field(), "invalid distribution");
  }
  if (!spec.absolutely_continuous()) {
    throw ConfigError(field, "must be absolutely continuous; discrete features or "
                             "preference parameters break strict preferences");
  }
}

}  // namespace

std::string to_string(PreferenceKind k) {
  switch (k) {
    case PreferenceKind::kLinear:
      return "linear";
    case PreferenceKind::kLinearBump:
      return "linear_bump";
    case PreferenceKind::kStep:
      return "step";
  }
  return "linear";
}

PreferenceKind preference_kind_from_string(const std::string& s) {
  if (s == "linear") return PreferenceKind::kLinear;
  if (s == "linear_bump") return PreferenceKind::kLinearBump;
  if (s == "step") return PreferenceKind::kStep;
  throw ConfigError("market.preference", "unknown kind '" + s +
                                             "' (expected linear, linear_bump, step)");
}

double Preference::operator()(std::span<const double> z) const {
  double value = dot(w, z);
  switch (kind) {
    case PreferenceKind::kLinear:
      break;
    case PreferenceKind::kLinearBump: {
      double d2 = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) d2 += (z[j] - center[j]) * (z[j] - center[j]);
      value += amplitude * std::exp(-d2 / (2.0 * scale * scale));
      break;
    }
    case PreferenceKind::kStep:
      if (dot(v, z) > 0.0) value += jump;
      break;
  }
  return value;
}

void MatchingMarket::validate() const {
  const std::size_t n = men_features.size();
  if (n < 1) throw ConfigError("market.n_agents", "must be at least 1");
  if (women_features.size() != n || men_preferences.size() != n ||
      women_preferences.size() != n) {
    throw ConfigError("market", "both sides need n features and n preferences");
  }
  if (focal_man >= n) throw ConfigError("market.focal_man", "out of range");
}

MatchOutcome deferred_acceptance(const MatchingMarket& market) {
  market.validate();
  const std::size_t n = market.size();
  const Ranking men =
      rank_partners(market.men_preferences, market.women_features, market.ties, "man");
  const Ranking women = rank_partners(market.women_preferences, market.men_features,
                                      market.ties, "woman");
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  MatchOutcome out;
  out.wife_of.assign(n, kNone);
  out.husband_of.assign(n, kNone);
  std::vector<std::size_t> next(n, 0);
  std::deque<std::size_t> free_men(n);
  std::iota(free_men.begin(), free_men.end(), 0);
  while (!free_men.empty()) {
    const std::size_t m = free_men.front();
    free_men.pop_front();
    const std::size_t w = men.order[m][next[m]++];
    const std::size_t current = out.husband_of[w];
    if (current == kNone) {
      out.husband_of[w] = m;
      out.wife_of[m] = w;
    } else if (women.rank[w][m] < women.rank[w][current]) {
      out.husband_of[w] = m;
      out.wife_of[m] = w;
      out.wife_of[current] = kNone;
      free_men.push_back(current);
    } else {
      free_men.push_back(m);
    }
  }
  out.focal_partner = out.wife_of[market.focal_man];
  out.focal_partner_features = market.women_features[out.focal_partner];
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> blocking_pairs(
    const MatchingMarket& market, const std::vector<std::size_t>& wife_of) {
  market.validate();
  const std::size_t n = market.size();
  if (wife_of.size() != n) throw ConfigError("wife_of", "size must equal n");
  std::vector<std::size_t> husband_of(n, n);
  for (std::size_t m = 0; m < n; ++m) {
    if (wife_of[m] >= n || husband_of[wife_of[m]] != n) {
      throw ConfigError("wife_of", "not a bijection");
    }
    husband_of[wife_of[m]] = m;
  }
  const Ranking men =
      rank_partners(market.men_preferences, market.women_features, market.ties, "man");
  const Ranking women = rank_partners(market.women_preferences, market.men_features,
                                      market.ties, "woman");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t w = 0; w < n; ++w) {
      if (w == wife_of[m]) continue;
      if (men.rank[m][w] < men.rank[m][wife_of[m]] &&
          women.rank[w][m] < women.rank[w][husband_of[w]]) {
        out.emplace_back(m, w);
      }
    }
  }
  return out;
}

void MarketModel::validate() const {
  if (n_agents < 1) throw ConfigError("market.n_agents", "must be at least 1");
  if (feature_dim < 1) throw ConfigError("market.feature_dim", "must be at least 1");
  if (focal_man >= n_agents) {
    throw ConfigError("market.focal_man", "must be below n_agents");
  }
  require_continuous(feature_dist, "market.feature_dist");
  require_continuous(weight_dist, "market.weight_dist");
  if (preference == PreferenceKind::kLinearBump) {
    require_continuous(center_dist, "market.center_dist");
    require_continuous(scale_dist, "market.scale_dist");
    if (scale_dist.kind() != DistributionSpec::Kind::kUniform || !(scale_dist.lo() > 0.0)) {
      throw ConfigError("market.scale_dist", "must be uniform with lo > 0");
    }
    if (!std::isfinite(bump_amplitude)) {
      throw ConfigError("market.bump_amplitude", "must be finite");
    }
  }
  if (preference == PreferenceKind::kStep && !std::isfinite(step_jump)) {
    throw ConfigError("market.step_jump", "must be finite");
  }
  if (identical_women && ties == TiePolicy::kError) {
    throw ConfigError("market.ties",
                      "identical women tie every ranking; use break_by_index");
  }
  domain().validate();
  if (domain_lo.size() != feature_dim) {
    throw ConfigError("market.domain", "dimension must equal feature_dim");
  }
}

InputDomain MarketModel::domain() const { return InputDomain::box(domain_lo, domain_hi); }

NoiseSpec MarketModel::noise() const {
  const std::size_t n = n_agents;
  const std::size_t d = feature_dim;
  std::vector<DistributionSpec> blocks;
  const std::size_t features = (n - 1) * d + (identical_women ? d : n * d);
  blocks.push_back(feature_dist.with_dimension(features));
  blocks.push_back(weight_dist.with_dimension(2 * n * d));
  if (preference == PreferenceKind::kLinearBump) {
    blocks.push_back(center_dist.with_dimension(2 * n * d));
    blocks.push_back(scale_dist.with_dimension(2 * n));
  } else if (preference == PreferenceKind::kStep) {
    blocks.push_back(DistributionSpec::gaussian(0.0, 1.0, 2 * n * d));
  }
  // Remove empty blocks (n == 1 leaves no other men).
  blocks.erase(std::remove_if(blocks.begin(), blocks.end(),
                              [](const auto& b) { return b.dimension() == 0; }),
               blocks.end());
  return NoiseSpec(std::move(blocks));
}

MatchingMarket MarketModel::market(std::span<const double> x,
                                   std::span<const double> r) const {
  const std::size_t n = n_agents;
  const std::size_t d = feature_dim;
  MatchingMarket m;
  m.focal_man = focal_man;
  m.ties = ties;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Point f;
    if (i == focal_man) {
      f.assign(x.begin(), x.end());
    } else {
      append(f, r, offset, d);
    }
    m.men_features.push_back(std::move(f));
  }
  if (identical_women) {
    Point f;
    append(f, r, offset, d);
    m.women_features.assign(n, f);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      Point f;
      append(f, r, offset, d);
      m.women_features.push_back(std::move(f));
    }
  }
  std::vector<Preference> prefs(2 * n);
  for (auto& p : prefs) {
    p.kind = preference;
    append(p.w, r, offset, d);
  }
  if (preference == PreferenceKind::kLinearBump) {
    for (auto& p : prefs) {
      p.amplitude = bump_amplitude;
      append(p.center, r, offset, d);
    }
    for (auto& p : prefs) p.scale = r[offset++];
  } else if (preference == PreferenceKind::kStep) {
    for (auto& p : prefs) {
      p.jump = step_jump;
      append(p.v, r, offset, d);
    }
  }
  m.men_preferences.assign(prefs.begin(), prefs.begin() + static_cast<std::ptrdiff_t>(n));
  m.women_preferences.assign(prefs.begin() + static_cast<std::ptrdiff_t>(n), prefs.end());
  return m;
}

Factorization matching_factorization(const MarketModel& model) {
  model.validate();
  Factorization f;
  f.name = "matching";
  f.input_domain = model.domain();
  f.noise = model.noise();
  f.latent = LatentSpace::continuous(model.feature_dim, /*exact_equality=*/true);
  f.t_map = [model](std::span<const double> x, std::span<const double> r) {
    return deferred_acceptance(model.market(x, r)).focal_partner_features;
  };
  return f;
}

MatchingProbeReport matching_regularity_probe(const MarketModel& model,
                                              std::span<const double> x0,
                                              std::span<const double> radii,
                                              std::size_t trials,
                                              const SeedSpec& seed, double threshold,
                                              double sigma) {
  model.validate();
  const std::size_t d = model.feature_dim;
  if (x0.size() != d) throw ConfigError("x0", "dimension must equal feature_dim");
  if (radii.empty()) throw ConfigError("radii", "must not be empty");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] >= 0.0) || (k > 0 && !(radii[k] < radii[k - 1]))) {
      throw ConfigError("radii[" + std::to_string(k) + "]",
                        "radii must be non-negative and strictly decreasing");
    }
  }
  if (trials < 1) throw ConfigError("trials", "must be at least 1");
  const InputDomain domain = model.domain();
  // The largest radius decides whether every ball around x0 stays inside K.
  for (std::size_t j = 0; j < d; ++j) {
    if (x0[j] - radii[0] < domain.lo()[j] - 1e-12 ||
        x0[j] + radii[0] > domain.hi()[j] + 1e-12) {
      throw ConfigError("radii[0]", "probe ball around x0 leaves K");
    }
  }
  const NoiseSpec noise = model.noise();
  noise.validate();

  std::vector<std::vector<char>> changed(trials, std::vector<char>(radii.size(), 0));
  std::vector<std::size_t> resampled(trials, 0);
  parallel_for(trials, [&](std::size_t t) {
    Point r(noise.dimension());
    RandomStream noise_stream(split(seed, {0, t}));
    noise.sample(noise_stream, r);
    RandomStream dir_stream(split(seed, {1, t}));
    const Point u = dir_stream.unit_direction(d);
    Point x(d);
    for (int attempt = 0;; ++attempt) {
      try {
        const std::size_t base = deferred_acceptance(model.market(x0, r)).focal_partner;
        for (std::size_t k = 0; k < radii.size(); ++k) {
          for (std::size_t j = 0; j < d; ++j) x[j] = x0[j] + radii[k] * u[j];
          changed[t][k] =
              deferred_acceptance(model.market(x, r)).focal_partner != base ? 1 : 0;
        }
        break;
      } catch (const DegenerateDrawError&) {
        if (attempt + 1 >= kMaxResampleAttempts) throw;
        ++resampled[t];
        RandomStream retry(split(seed, {2, t, static_cast<std::uint64_t>(attempt)}));
        noise.sample(retry, r);
      }
    }
  });

  MatchingProbeReport report;
  report.x0.assign(x0.begin(), x0.end());
  report.threshold = threshold;
  report.sigma = sigma;
  report.resampled = std::accumulate(resampled.begin(), resampled.end(), std::size_t{0});
  for (std::size_t k = 0; k < radii.size(); ++k) {
    std::size_t count = 0;
    for (std::size_t t = 0; t < trials; ++t) count += changed[t][k];
    MatchingProbeRow row;
    row.radius = radii[k];
    row.trials = trials;
    row.change_fraction = static_cast<double>(count) / static_cast<double>(trials);
    row.std_error = std::sqrt(row.change_fraction * (1.0 - row.change_fraction) /
                              static_cast<double>(trials));
    report.rows.push_back(row);
  }
  bool monotone = true;
  for (std::size_t k = 1; k < report.rows.size(); ++k) {
    const auto& a = report.rows[k - 1];
    const auto& b = report.rows[k];
    if (b.change_fraction > a.change_fraction + sigma * std::hypot(a.std_error, b.std_error)) {
      monotone = false;
      report.reasons.push_back("change fraction rises between radius " +
                               std::to_string(a.radius) + " and " +
                               std::to_string(b.radius));
    }
  }
  const double last = report.rows.back().change_fraction;
  if (!(last < threshold)) {
    report.reasons.push_back("final change fraction " + std::to_string(last) +
                             " is not below " + std::to_string(threshold));
  }
  report.passed = monotone && last < threshold;
  return report;
}

}  // namespace regulab
