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

// Distances between empirical laws and continuity evidence for curves.
//
// Total variation is only ever computed over the sigma-algebra generated by a
// finite binning, so every TV value here is a lower bound on the true TV and
// is reported as "binned TV" together with its bin count.

#ifndef REGULAB_METRICS_H_
#define REGULAB_METRICS_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regulab/dgp.h"
#include "regulab/sampling.h"

namespace regulab {

// 20 bins per dimension for d <= 2, 8 for d == 3; throws ConfigError for
// d > 3, which needs an explicit count.
std::size_t default_bins_per_dimension(std::size_t dimension);

// A regular grid over a box, or a sorted label set for discrete latents.
class BinGrid {
 public:
  BinGrid() = default;
  static BinGrid regular(Point lo, Point hi, std::vector<std::size_t> bins);
  static BinGrid labels(std::vector<double> labels);

  // Bounding box of the pooled samples with `bins_per_dimension` bins per
  // axis (0 selects the default). A zero-width axis is padded to width 1.
  static BinGrid fit(std::span<const SampleSet* const> pooled,
                     std::size_t bins_per_dimension = 0);
  // Union of observed labels (one-dimensional samples).
  static BinGrid fit_labels(std::span<const SampleSet* const> pooled);

  bool is_labels() const { return is_labels_; }
  std::size_t dimension() const;
  std::size_t bin_count() const;
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  const std::vector<std::size_t>& bins() const { return bins_; }
  const std::vector<double>& label_values() const { return labels_; }

  // Flat bin index, or nullopt when the point falls outside (overflow).
  std::optional<std::size_t> locate(std::span<const double> theta) const;
  // Lower/upper corner of a regular-grid bin.
  Point bin_lower(std::size_t index) const;
  Point bin_upper(std::size_t index) const;
  double bin_volume() const;

  bool operator==(const BinGrid&) const = default;

 private:
  bool is_labels_ = false;
  Point lo_;
  Point hi_;
  std::vector<std::size_t> bins_;
  std::vector<double> labels_;
};

// Normalized histogram. probabilities plus overflow sum to 1.
struct BinnedLaw {
  BinGrid grid;
  std::vector<double> probabilities;
  double overflow = 0.0;
  std::size_t samples = 0;
};

BinnedLaw bin(const SampleSet& samples, const BinGrid& grid);

// Binned total variation 1/2 sum |p_i - q_i| (overflow counted as one bin).
double tv(const BinnedLaw& p, const BinnedLaw& q);

// Axis directions +-e_i followed by `random_count` uniform unit directions.
std::vector<Point> probe_directions(std::size_t dimension, std::size_t random_count,
                                    RandomStream& stream);

struct ProbeOptions {
  // 0 selects default_bins_per_dimension().
  std::size_t bins_per_dimension = 0;
  // Random unit directions in addition to +-e_i; negative selects 2n.
  int random_directions = -1;
};

struct TvProbeRow {
  double radius = 0.0;
  double binned_tv = 0.0;
  Point worst_x;
  std::size_t probes = 0;
};

struct TvProbeTable {
  Point x0;
  std::size_t bins_per_dimension = 0;
  std::vector<TvProbeRow> rows;
  std::string note;
};

// For each radius, the largest binned TV between the conditional law at x0
// and at x0 + radius * direction over the probe directions. Noise samples are
// shared across all points (common random numbers) and each radius gets its
// own binning fitted to the pooled samples at that radius. Probe points
// outside K are skipped.
TvProbeTable tv_limit_probe(const Factorization& fact, std::span<const double> x0,
                            std::span<const double> radii, std::size_t n,
                            const SeedSpec& seed, const ProbeOptions& options = {});

// One-sample Kolmogorov-Smirnov statistics.
double ks_uniform(std::vector<double> samples);
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

double pearson_correlation(std::span<const double> a, std::span<const double> b);
// Pearson correlation of average ranks.
double spearman_correlation(std::span<const double> a, std::span<const double> b);

struct JumpOptions {
  double threshold = 0.1;
  double z = 6.0;
};

struct Jump {
  double location = 0.0;
  double size = 0.0;
  double left_value = 0.0;
  double right_value = 0.0;
  std::size_t left_index = 0;
};

struct ModulusEntry {
  double delta = 0.0;
  double sup_difference = 0.0;
};

struct CurveReport {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<ModulusEntry> modulus;
  std::vector<Jump> jumps;
};

// A jump is flagged between adjacent grid points whose value gap exceeds
// max(threshold, z * sqrt(se_i^2 + se_{i+1}^2)).
CurveReport modulus_and_jumps(std::span<const double> grid,
                              std::span<const double> values,
                              std::span<const double> std_errors,
                              const JumpOptions& options = {});
CurveReport modulus_and_jumps(const std::vector<CurvePoint>& curve,
                              const JumpOptions& options = {});

struct Box {
  Point lo;
  Point hi;

  std::size_t dimension() const { return lo.size(); }
  double volume() const;
  bool contains(std::span<const double> p) const;
  // Euclidean distance, 0 inside.
  double distance(std::span<const double> p) const;
};

class BoxSet {
 public:
  BoxSet() = default;
  explicit BoxSet(std::vector<Box> boxes);

  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }
  void add(Box box);

  bool contains(std::span<const double> p) const;
  // Minimum over boxes; +inf for an empty set.
  double distance(std::span<const double> p) const;
  // Exact Lebesgue measure of the union (recursive sweep).
  double union_volume() const;

 private:
  std::vector<Box> boxes_;
};

// Fraction of mass with 0 < d(theta, J) < delta.
double annulus_mass(const BoxSet& set, const SampleSet& law, double delta);
// Binned version: each bin's mass is spread uniformly and integrated with a
// midpoint rule of `subdivisions` points per axis. Overflow mass is ignored.
double annulus_mass(const BoxSet& set, const BinnedLaw& law, double delta,
                    std::size_t subdivisions = 16);

struct BoxCoverOptions {
  std::size_t votes_per_cell = 64;
  std::size_t max_depth = 12;
  std::size_t estimate_samples = 100000;
};

struct BoxCover {
  BoxSet cover;
  // Monte-Carlo estimate of the Lebesgue measure of S symmetric-difference J.
  double symmetric_difference = 0.0;
  // Volume of cells still mixed when refinement stopped.
  double undecided_volume = 0.0;
  std::size_t depth = 0;
  bool achieved = false;
};

// Dyadic refinement of `bounds`: cells whose votes are all inside S are kept,
// all outside are dropped, mixed cells are split until their total volume is
// below epsilon or max_depth is reached, then decided by majority. The
// symmetric difference is estimated on `reference` samples of the uniform law
// on `bounds` when given, otherwise on fresh draws from split(seed, 1).
BoxCover box_cover(const std::function<bool(std::span<const double>)>& membership,
                   const Box& bounds, double epsilon, const SeedSpec& seed,
                   const BoxCoverOptions& options = {},
                   const SampleSet* reference = nullptr);

}  // namespace regulab

#endif  // REGULAB_METRICS_H_
