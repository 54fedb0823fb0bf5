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

#include "regulab/metrics.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "regulab/errors.h"
#include "regulab/parallel.h"

namespace regulab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double union_volume_from(std::vector<const Box*> boxes, std::size_t axis,
                         std::size_t dimension) {
  if (boxes.empty()) return 0.0;
  if (axis + 1 == dimension) {
    std::vector<std::pair<double, double>> intervals;
    intervals.reserve(boxes.size());
    for (const Box* b : boxes) intervals.emplace_back(b->lo[axis], b->hi[axis]);
    std::sort(intervals.begin(), intervals.end());
    double total = 0.0;
    double start = intervals.front().first;
    double end = intervals.front().second;
    for (const auto& [lo, hi] : intervals) {
      if (lo > end) {
        total += end - start;
        start = lo;
        end = hi;
      } else {
        end = std::max(end, hi);
      }
    }
    return total + (end - start);
  }
  std::vector<double> cuts;
  for (const Box* b : boxes) {
    cuts.push_back(b->lo[axis]);
    cuts.push_back(b->hi[axis]);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    std::vector<const Box*> active;
    for (const Box* b : boxes) {
      if (b->lo[axis] <= cuts[i] && b->hi[axis] >= cuts[i + 1]) active.push_back(b);
    }
    total += (cuts[i + 1] - cuts[i]) *
             union_volume_from(std::move(active), axis + 1, dimension);
  }
  return total;
}

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

bool in_annulus(const BoxSet& set, std::span<const double> p, double delta) {
  const double d = set.distance(p);
  return d > 0.0 && d < delta;
}

}  // namespace

std::size_t default_bins_per_dimension(std::size_t dimension) {
  if (dimension <= 2) return 20;
  if (dimension == 3) return 8;
  throw ConfigError("bins_per_dimension",
                    "latent dimension > 3 requires an explicit bin count");
}

BinGrid BinGrid::regular(Point lo, Point hi, std::vector<std::size_t> bins) {
  if (lo.empty() || lo.size() != hi.size() || lo.size() != bins.size()) {
    throw ConfigError("bins", "grid bounds and bin counts must share a dimension");
  }
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (!(lo[j] < hi[j])) throw ConfigError("bins.hi", "requires lo < hi");
    if (bins[j] < 1) throw ConfigError("bins", "each axis needs at least one bin");
  }
  BinGrid g;
  g.lo_ = std::move(lo);
  g.hi_ = std::move(hi);
  g.bins_ = std::move(bins);
  return g;
}

BinGrid BinGrid::labels(std::vector<double> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  BinGrid g;
  g.is_labels_ = true;
  g.labels_ = std::move(labels);
  return g;
}

BinGrid BinGrid::fit(std::span<const SampleSet* const> pooled,
                     std::size_t bins_per_dimension) {
  std::size_t dim = 0;
  for (const SampleSet* s : pooled) {
    if (!s->empty()) dim = s->dimension();
  }
  if (dim == 0) throw DataError("BinGrid::fit: no samples");
  if (bins_per_dimension == 0) bins_per_dimension = default_bins_per_dimension(dim);
  Point lo(dim, kInf);
  Point hi(dim, -kInf);
  for (const SampleSet* s : pooled) {
    for (std::size_t i = 0; i < s->size(); ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        lo[j] = std::min(lo[j], (*s)(i, j));
        hi[j] = std::max(hi[j], (*s)(i, j));
      }
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    if (!(hi[j] > lo[j])) {
      lo[j] -= 0.5;
      hi[j] += 0.5;
    }
  }
  return regular(std::move(lo), std::move(hi),
                 std::vector<std::size_t>(dim, bins_per_dimension));
}

BinGrid BinGrid::fit_labels(std::span<const SampleSet* const> pooled) {
  std::vector<double> labels;
  for (const SampleSet* s : pooled) {
    if (s->dimension() > 1) {
      throw DataError("BinGrid::fit_labels: labels must be one-dimensional");
    }
    labels.insert(labels.end(), s->data().begin(), s->data().end());
  }
  return BinGrid::labels(std::move(labels));
}

std::size_t BinGrid::dimension() const { return is_labels_ ? 1 : lo_.size(); }

std::size_t BinGrid::bin_count() const {
  if (is_labels_) return labels_.size();
  std::size_t count = 1;
  for (std::size_t b : bins_) count *= b;
  return count;
}

std::optional<std::size_t> BinGrid::locate(std::span<const double> theta) const {
  if (is_labels_) {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), theta[0]);
    if (it == labels_.end() || *it != theta[0]) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }
  std::size_t index = 0;
  for (std::size_t j = 0; j < lo_.size(); ++j) {
    const double v = theta[j];
    if (!(v >= lo_[j] && v <= hi_[j])) return std::nullopt;
    auto k = static_cast<std::size_t>((v - lo_[j]) / (hi_[j] - lo_[j]) *
                                      static_cast<double>(bins_[j]));
    k = std::min(k, bins_[j] - 1);
    index = index * bins_[j] + k;
  }
  return index;
}

Point BinGrid::bin_lower(std::size_t index) const {
  Point p(lo_.size());
  for (std::size_t j = lo_.size(); j-- > 0;) {
    const std::size_t k = index % bins_[j];
    index /= bins_[j];
    p[j] = lo_[j] + (hi_[j] - lo_[j]) * static_cast<double>(k) /
                        static_cast<double>(bins_[j]);
  }
  return p;
}

Point BinGrid::bin_upper(std::size_t index) const {
  Point p(lo_.size());
  for (std::size_t j = lo_.size(); j-- > 0;) {
    const std::size_t k = index % bins_[j];
    index /= bins_[j];
    p[j] = lo_[j] + (hi_[j] - lo_[j]) * static_cast<double>(k + 1) /
                        static_cast<double>(bins_[j]);
  }
  return p;
}

double BinGrid::bin_volume() const {
  double v = 1.0;
  for (std::size_t j = 0; j < lo_.size(); ++j) {
    v *= (hi_[j] - lo_[j]) / static_cast<double>(bins_[j]);
  }
  return v;
}

BinnedLaw bin(const SampleSet& samples, const BinGrid& grid) {
  if (samples.empty()) throw DataError("bin: zero samples");
  if (samples.dimension() != grid.dimension()) {
    throw DataError("bin: sample dimension does not match the grid");
  }
  BinnedLaw law;
  law.grid = grid;
  law.samples = samples.size();
  std::vector<std::size_t> counts(grid.bin_count(), 0);
  std::size_t outside = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (auto k = grid.locate(samples.row(i))) {
      ++counts[*k];
    } else {
      ++outside;
    }
  }
  const double n = static_cast<double>(samples.size());
  law.probabilities.resize(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    law.probabilities[k] = static_cast<double>(counts[k]) / n;
  }
  law.overflow = static_cast<double>(outside) / n;
  return law;
}

double tv(const BinnedLaw& p, const BinnedLaw& q) {
  if (!(p.grid == q.grid) || p.probabilities.size() != q.probabilities.size()) {
    throw DataError("tv: laws are binned on different grids");
  }
  double sum = std::abs(p.overflow - q.overflow);
  for (std::size_t k = 0; k < p.probabilities.size(); ++k) {
    sum += std::abs(p.probabilities[k] - q.probabilities[k]);
  }
  return std::min(1.0, 0.5 * sum);
}

std::vector<Point> probe_directions(std::size_t dimension, std::size_t random_count,
                                    RandomStream& stream) {
  std::vector<Point> dirs;
  for (std::size_t j = 0; j < dimension; ++j) {
    Point plus(dimension, 0.0);
    plus[j] = 1.0;
    Point minus(dimension, 0.0);
    minus[j] = -1.0;
    dirs.push_back(std::move(plus));
    dirs.push_back(std::move(minus));
  }
  for (std::size_t k = 0; k < random_count; ++k) {
    dirs.push_back(stream.unit_direction(dimension));
  }
  return dirs;
}

TvProbeTable tv_limit_probe(const Factorization& fact, std::span<const double> x0,
                            std::span<const double> radii, std::size_t n,
                            const SeedSpec& seed, const ProbeOptions& options) {
  const std::size_t dim = fact.input_domain.dimension();
  if (x0.size() != dim) throw ConfigError("x0", "dimension does not match K");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || (k > 0 && !(radii[k] < radii[k - 1]))) {
      throw ConfigError("radii[" + std::to_string(k) + "]",
                        "radii must be positive and strictly decreasing");
    }
  }
  const std::size_t random_count =
      options.random_directions >= 0
          ? static_cast<std::size_t>(options.random_directions)
          : (dim == 1 ? 0 : 2 * dim);

  TvProbeTable table;
  table.x0.assign(x0.begin(), x0.end());
  table.bins_per_dimension =
      fact.latent.is_discrete()
          ? 0
          : (options.bins_per_dimension > 0
                 ? options.bins_per_dimension
                 : default_bins_per_dimension(fact.latent.dimension()));
  table.note =
      "binned TV over a per-radius grid; a lower bound on the true total variation";

  const SeedSpec noise_seed = split(seed, 0);
  const ConditionalLaw base = conditional_law(fact, x0, n, noise_seed);

  for (std::size_t k = 0; k < radii.size(); ++k) {
    RandomStream dir_stream(split(seed, {1, k}));
    std::vector<Point> probes;
    for (const Point& dir : probe_directions(dim, random_count, dir_stream)) {
      Point x(dim);
      for (std::size_t j = 0; j < dim; ++j) x[j] = x0[j] + radii[k] * dir[j];
      if (fact.input_domain.contains(x)) probes.push_back(std::move(x));
    }
    if (probes.empty()) {
      throw ConfigError("radii[" + std::to_string(k) + "]",
                        "no probe point at this radius lies inside K");
    }
    std::vector<ConditionalLaw> laws(probes.size());
    parallel_for(probes.size(), [&](std::size_t i) {
      laws[i] = conditional_law(fact, probes[i], n, noise_seed);
    });
    std::vector<const SampleSet*> pooled{&base.samples};
    for (const auto& law : laws) pooled.push_back(&law.samples);
    const BinGrid grid = fact.latent.is_discrete()
                             ? BinGrid::fit_labels(pooled)
                             : BinGrid::fit(pooled, table.bins_per_dimension);
    const BinnedLaw base_binned = bin(base.samples, grid);
    TvProbeRow row;
    row.radius = radii[k];
    row.probes = probes.size();
    row.binned_tv = -1.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const double d = tv(base_binned, bin(laws[i].samples, grid));
      if (d > row.binned_tv) {
        row.binned_tv = d;
        row.worst_x = probes[i];
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DataError("ks_statistic: zero samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - static_cast<double>(i) / n,
                  static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double ks_uniform(std::vector<double> samples) {
  return ks_statistic(std::move(samples),
                      [](double v) { return std::clamp(v, 0.0, 1.0); });
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DataError("ks_two_sample: zero samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw DataError("pearson_correlation: need two equal-length samples");
  }
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double spearman_correlation(std::span<const double> a, std::span<const double> b) {
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson_correlation(ra, rb);
}

CurveReport modulus_and_jumps(std::span<const double> grid,
                              std::span<const double> values,
                              std::span<const double> std_errors,
                              const JumpOptions& options) {
  if (grid.size() != values.size() || grid.size() != std_errors.size()) {
    throw DataError("modulus_and_jumps: grid, values and errors differ in length");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw DataError("modulus_and_jumps: grid must be strictly increasing");
    }
  }
  CurveReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.values.assign(values.begin(), values.end());

  struct Pair {
    double delta;
    double diff;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      pairs.push_back({grid[j] - grid[i], std::abs(values[j] - values[i])});
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) { return a.delta < b.delta; });
  double running = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    running = std::max(running, pairs[k].diff);
    const bool last_of_group =
        k + 1 == pairs.size() ||
        pairs[k + 1].delta - pairs[k].delta > 1e-9 * std::max(1.0, pairs[k].delta);
    if (last_of_group) report.modulus.push_back({pairs[k].delta, running});
  }

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double gap = std::abs(values[i + 1] - values[i]);
    const double noise = options.z * std::hypot(std_errors[i], std_errors[i + 1]);
    if (gap > std::max(options.threshold, noise)) {
      report.jumps.push_back({0.5 * (grid[i] + grid[i + 1]), gap, values[i],
                              values[i + 1], i});
    }
  }
  return report;
}

CurveReport modulus_and_jumps(const std::vector<CurvePoint>& curve,
                              const JumpOptions& options) {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> errors;
  for (const auto& p : curve) {
    grid.push_back(p.position);
    values.push_back(p.estimate.value);
    errors.push_back(p.estimate.std_error);
  }
  return modulus_and_jumps(grid, values, errors, options);
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t j = 0; j < lo.size(); ++j) v *= hi[j] - lo[j];
  return v;
}

bool Box::contains(std::span<const double> p) const {
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (p[j] < lo[j] || p[j] > hi[j]) return false;
  }
  return true;
}

double Box::distance(std::span<const double> p) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < lo.size(); ++j) {
    const double c = std::clamp(p[j], lo[j], hi[j]);
    sum += (p[j] - c) * (p[j] - c);
  }
  return std::sqrt(sum);
}

BoxSet::BoxSet(std::vector<Box> boxes) {
  for (auto& b : boxes) add(std::move(b));
}

void BoxSet::add(Box box) {
  if (box.lo.empty() || box.lo.size() != box.hi.size()) {
    throw ConfigError("box", "bounds must be non-empty and equal length");
  }
  if (!boxes_.empty() && box.dimension() != boxes_.front().dimension()) {
    throw ConfigError("box", "all boxes must share a dimension");
  }
  for (std::size_t j = 0; j < box.lo.size(); ++j) {
    if (!(box.lo[j] < box.hi[j])) throw ConfigError("box", "requires lo < hi");
  }
  boxes_.push_back(std::move(box));
}

bool BoxSet::contains(std::span<const double> p) const {
  return std::any_of(boxes_.begin(), boxes_.end(),
                     [&](const Box& b) { return b.contains(p); });
}

double BoxSet::distance(std::span<const double> p) const {
  double d = kInf;
  for (const Box& b : boxes_) {
    d = std::min(d, b.distance(p));
    if (d == 0.0) break;
  }
  return d;
}

double BoxSet::union_volume() const {
  if (boxes_.empty()) return 0.0;
  std::vector<const Box*> ptrs;
  for (const Box& b : boxes_) ptrs.push_back(&b);
  return union_volume_from(std::move(ptrs), 0, boxes_.front().dimension());
}

double annulus_mass(const BoxSet& set, const SampleSet& law, double delta) {
  if (!(delta > 0.0)) throw ConfigError("delta", "must be positive");
  if (law.empty()) throw DataError("annulus_mass: empty law");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < law.size(); ++i) {
    if (in_annulus(set, law.row(i), delta)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(law.size());
}

double annulus_mass(const BoxSet& set, const BinnedLaw& law, double delta,
                    std::size_t subdivisions) {
  if (!(delta > 0.0)) throw ConfigError("delta", "must be positive");
  if (law.samples == 0) throw DataError("annulus_mass: empty law");
  if (law.grid.is_labels()) {
    throw DataError("annulus_mass: needs a regular grid, not labels");
  }
  const std::size_t dim = law.grid.dimension();
  std::size_t cells = 1;
  for (std::size_t j = 0; j < dim; ++j) cells *= subdivisions;
  double mass = 0.0;
  Point p(dim);
  for (std::size_t k = 0; k < law.probabilities.size(); ++k) {
    if (law.probabilities[k] == 0.0) continue;
    const Point lo = law.grid.bin_lower(k);
    const Point hi = law.grid.bin_upper(k);
    std::size_t hits = 0;
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t rest = c;
      for (std::size_t j = 0; j < dim; ++j) {
        const std::size_t s = rest % subdivisions;
        rest /= subdivisions;
        p[j] = lo[j] + (hi[j] - lo[j]) * (static_cast<double>(s) + 0.5) /
                           static_cast<double>(subdivisions);
      }
      if (in_annulus(set, p, delta)) ++hits;
    }
    mass += law.probabilities[k] * static_cast<double>(hits) /
            static_cast<double>(cells);
  }
  return mass;
}

BoxCover box_cover(const std::function<bool(std::span<const double>)>& membership,
                   const Box& bounds, double epsilon, const SeedSpec& seed,
                   const BoxCoverOptions& options, const SampleSet* reference) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon", "must be positive");
  if (options.votes_per_cell < 1) {
    throw ConfigError("votes_per_cell", "must be at least 1");
  }
  BoxSet{std::vector<Box>{bounds}};  // validates the bounds
  const std::size_t dim = bounds.dimension();
  const std::size_t children = std::size_t{1} << dim;

  BoxCover result;
  std::vector<Box> level{bounds};
  RandomStream votes(split(seed, 0));
  Point p(dim);

  for (std::size_t depth = 0; !level.empty(); ++depth) {
    std::vector<std::pair<Box, double>> mixed;
    for (const Box& cell : level) {
      std::size_t inside = 0;
      for (std::size_t v = 0; v < options.votes_per_cell; ++v) {
        for (std::size_t j = 0; j < dim; ++j) {
          p[j] = cell.lo[j] + (cell.hi[j] - cell.lo[j]) * votes.uniform();
        }
        if (membership(p)) ++inside;
      }
      if (inside == options.votes_per_cell) {
        result.cover.add(cell);
      } else if (inside > 0) {
        mixed.emplace_back(cell, static_cast<double>(inside) /
                                     static_cast<double>(options.votes_per_cell));
      }
    }
    double undecided = 0.0;
    for (const auto& [cell, share] : mixed) undecided += cell.volume();
    result.depth = depth;
    result.undecided_volume = undecided;
    if (mixed.empty()) break;
    if (undecided < epsilon || depth >= options.max_depth) {
      for (const auto& [cell, share] : mixed) {
        if (share >= 0.5) result.cover.add(cell);
      }
      break;
    }
    level.clear();
    for (const auto& [cell, share] : mixed) {
      for (std::size_t c = 0; c < children; ++c) {
        Box child = cell;
        for (std::size_t j = 0; j < dim; ++j) {
          const double mid = 0.5 * (cell.lo[j] + cell.hi[j]);
          if (c & (std::size_t{1} << j)) {
            child.lo[j] = mid;
          } else {
            child.hi[j] = mid;
          }
        }
        level.push_back(std::move(child));
      }
    }
  }

  SampleSet generated;
  if (reference == nullptr) {
    generated = SampleSet(options.estimate_samples, dim);
    RandomStream stream(split(seed, 1));
    for (std::size_t i = 0; i < generated.size(); ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        generated.row(i)[j] =
            bounds.lo[j] + (bounds.hi[j] - bounds.lo[j]) * stream.uniform();
      }
    }
    reference = &generated;
  }
  if (reference->empty() || reference->dimension() != dim) {
    throw DataError("box_cover: reference samples missing or of wrong dimension");
  }
  std::size_t disagree = 0;
  for (std::size_t i = 0; i < reference->size(); ++i) {
    if (membership(reference->row(i)) != result.cover.contains(reference->row(i))) {
      ++disagree;
    }
  }
  result.symmetric_difference = bounds.volume() * static_cast<double>(disagree) /
                                static_cast<double>(reference->size());
  result.achieved = result.symmetric_difference < epsilon;
  return result;
}

}  // namespace regulab
