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

// Whitening of x-dependent noise through chained conditional CDFs.
//
// Component i of the noise is mapped through an empirical estimate of its
// CDF given x and the earlier components r_1..r_{i-1}. Conditioning is by
// equal-count binning: a product grid over x, then a tree of cuts on each
// prefix coordinate. CDFs of neighbouring x cells are blended linearly
// between the cell centres, which keeps the map continuous in x.

#ifndef REGULAB_WHITENING_H_
#define REGULAB_WHITENING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "regulab/dgp.h"
#include "regulab/sampling.h"

namespace regulab {

struct ChainConfig {
  std::size_t x_bins = 32;
  std::size_t r_bins = 16;
  std::size_t min_pairs = 1000;
};

struct Whitened {
  Point c;
  // Set when x or some r_i lay outside the fitted support.
  bool clamped = false;
};

class ConditionalCdfChain {
 public:
  static constexpr int kFormatVersion = 1;

  ConditionalCdfChain() = default;

  // F(t) = clamp(t, 0, 1) for every component, whatever x is.
  static ConditionalCdfChain identity(std::size_t x_dimension,
                                      std::size_t noise_dimension);
  // Throws FitError naming an under-populated bin and DataError on
  // non-finite input.
  static ConditionalCdfChain fit(const SampleSet& x, const SampleSet& r,
                                 const ChainConfig& config = {});

  std::size_t x_dimension() const { return x_dimension_; }
  std::size_t noise_dimension() const { return noise_dimension_; }
  std::size_t cell_count() const { return roots_.size(); }

  // Conditional CDF of component prefix.size() at t.
  double cdf(std::span<const double> x, std::span<const double> prefix,
             double t) const;
  // sup{z : F(z) <= c}, found by bisection; c >= 1 returns the right edge of
  // the conditional support.
  double quantile(std::span<const double> x, std::span<const double> prefix,
                  double c) const;

  Whitened whiten(std::span<const double> x, std::span<const double> r) const;
  Point unwhiten(std::span<const double> x, std::span<const double> c) const;

  nlohmann::json to_json() const;
  static ConditionalCdfChain from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static ConditionalCdfChain load(const std::string& path);

 private:
  struct Node {
    std::vector<double> values;
    std::vector<double> cuts;
    std::vector<std::uint32_t> children;

    double ecdf(double t) const;
  };
  struct CellWeight {
    std::size_t cell;
    double weight;
  };

  std::vector<CellWeight> cell_weights(std::span<const double> x) const;
  const Node& descend(std::size_t cell, std::span<const double> prefix) const;
  bool x_inside(std::span<const double> x) const;
  std::uint32_t build(const SampleSet& r, std::vector<std::size_t> rows,
                      std::size_t component, const std::string& path,
                      const ChainConfig& config);

  std::size_t x_dimension_ = 0;
  std::size_t noise_dimension_ = 0;
  Point x_lo_;
  Point x_hi_;
  std::vector<std::vector<double>> x_cuts_;
  std::vector<std::vector<double>> x_centers_;
  std::vector<std::uint32_t> roots_;
  std::vector<Node> nodes_;
};

struct WhitenessThresholds {
  double ks = 0.02;
  double correlation = 0.05;
};

struct WhitenessReport {
  std::vector<double> ks;
  // Max |Spearman| over component pairs, and over (component, x coordinate).
  double max_component_correlation = 0.0;
  double max_x_correlation = 0.0;
  std::size_t clamped = 0;
  std::size_t pairs = 0;
  WhitenessThresholds thresholds;
  bool passed = false;
};

WhitenessReport verify_whiteness(const ConditionalCdfChain& chain,
                                 const SampleSet& x, const SampleSet& r,
                                 const WhitenessThresholds& thresholds = {});

// Noise that depends on x: r = g(x, u) with u independent of x. Together
// with T this is a non-decomposable description of L.
struct DependentNoiseModel {
  std::string name;
  InputDomain input_domain;
  NoiseSpec x_dist;
  NoiseSpec innovation;
  std::size_t noise_dimension = 1;
  std::function<Point(std::span<const double> x, std::span<const double> u)>
      noise_map;
  TMap t_map;
  LatentSpace latent;

  struct Joint {
    SampleSet x;
    SampleSet r;
  };
  // X from split(seed, 0), u from split(seed, 1).
  Joint sample(std::size_t n, const SeedSpec& seed) const;
  // The reference factorization over the innovation: T(x, g(x, u)).
  Factorization reference() const;
};

// T'(x, c) = T(x, I_x^{-1}(c)) with R' ~ U[0,1]^k.
struct WhitenedFactorization {
  Factorization base;
  std::shared_ptr<const ConditionalCdfChain> chain;

  Point t_prime(std::span<const double> x, std::span<const double> c) const;
  Factorization factorization() const;
};

WhitenedFactorization whiten_model(const DependentNoiseModel& model,
                                   std::shared_ptr<const ConditionalCdfChain> chain);

}  // namespace regulab

#endif  // REGULAB_WHITENING_H_
