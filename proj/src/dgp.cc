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

#include "regulab/dgp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "regulab/errors.h"
#include "regulab/parallel.h"

namespace regulab {
namespace {

// Substream branch used to replace degenerate draws.
constexpr std::uint64_t kResampleBranch = 0xDE6E'0000;
constexpr int kMaxResampleAttempts = 64;

// Draws n noise vectors from `seed` in order and hands T(x, r) to `sink`.
// A degenerate draw at index i is replaced from split(seed, {branch, i, k}).
template <typename Sink>
std::size_t for_each_latent(const Factorization& fact, std::span<const double> x,
                            std::size_t n, const SeedSpec& seed, Sink&& sink) {
  if (n < 1) throw ConfigError("n", "must be at least 1");
  fact.noise.validate();
  RandomStream stream(seed);
  Point r(fact.noise.dimension());
  std::size_t resampled = 0;
  for (std::size_t i = 0; i < n; ++i) {
    fact.noise.sample(stream, r);
    for (int attempt = 0;; ++attempt) {
      try {
        sink(fact.evaluate(x, r));
        break;
      } catch (const DegenerateDrawError&) {
        if (attempt + 1 >= kMaxResampleAttempts) throw;
        ++resampled;
        RandomStream retry(split(seed, {kResampleBranch, i,
                                        static_cast<std::uint64_t>(attempt)}));
        fact.noise.sample(retry, r);
      }
    }
  }
  return resampled;
}

struct Accumulator {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  Estimate finish() const {
    Estimate e;
    e.value = mean;
    e.n = n;
    e.f_min = lo;
    e.f_max = hi;
    if (n > 1) {
      const double var = m2 / static_cast<double>(n - 1);
      e.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return e;
  }
};

double sup_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d += (a[j] - b[j]) * (a[j] - b[j]);
  return d;
}

void check_point_dimension(const JointSample& joint, std::span<const double> x) {
  if (x.size() != joint.x.dimension()) {
    throw ConfigError("x", "dimension does not match the joint sample");
  }
}

}  // namespace

InputDomain InputDomain::box(Point lo, Point hi) {
  InputDomain d;
  d.is_box_ = true;
  d.lo_ = std::move(lo);
  d.hi_ = std::move(hi);
  return d;
}

InputDomain InputDomain::finite(std::vector<Point> points) {
  InputDomain d;
  d.is_box_ = false;
  d.points_ = std::move(points);
  return d;
}

std::size_t InputDomain::dimension() const {
  if (is_box_) return lo_.size();
  return points_.empty() ? 0 : points_.front().size();
}

bool InputDomain::contains(std::span<const double> x, double tol) const {
  if (x.size() != dimension()) return false;
  if (is_box_) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!(x[j] >= lo_[j] - tol && x[j] <= hi_[j] + tol)) return false;
    }
    return true;
  }
  return std::any_of(points_.begin(), points_.end(), [&](const Point& p) {
    return sup_distance(p, x) <= tol;
  });
}

void InputDomain::validate() const {
  if (is_box_) {
    if (lo_.empty() || lo_.size() != hi_.size()) {
      throw ConfigError("domain", "box bounds must be non-empty and equal length");
    }
    for (std::size_t j = 0; j < lo_.size(); ++j) {
      if (!(lo_[j] < hi_[j])) {
        throw ConfigError("domain.hi[" + std::to_string(j) + "]",
                          "requires lo < hi");
      }
    }
  } else {
    if (points_.empty()) throw ConfigError("domain.points", "must not be empty");
    for (const auto& p : points_) {
      if (p.size() != points_.front().size()) {
        throw ConfigError("domain.points", "points must share a dimension");
      }
    }
  }
}

LatentSpace LatentSpace::continuous(std::size_t dimension, bool exact_equality) {
  if (dimension < 1) throw ConfigError("latent.dimension", "must be at least 1");
  LatentSpace s;
  s.kind_ = Kind::kContinuous;
  s.dimension_ = dimension;
  s.exact_equality_ = exact_equality;
  return s;
}

LatentSpace LatentSpace::discrete(std::vector<double> labels) {
  LatentSpace s;
  s.kind_ = Kind::kDiscrete;
  s.dimension_ = 1;
  s.exact_equality_ = true;
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  s.labels_ = std::move(labels);
  return s;
}

bool LatentSpace::contains(std::span<const double> theta) const {
  if (theta.size() != dimension_) return false;
  if (kind_ == Kind::kDiscrete) {
    return labels_.empty() ||
           std::binary_search(labels_.begin(), labels_.end(), theta[0]);
  }
  return std::all_of(theta.begin(), theta.end(),
                     [](double v) { return std::isfinite(v); });
}

Point Factorization::evaluate(std::span<const double> x,
                              std::span<const double> r) const {
  Point theta;
  try {
    theta = t_map(x, r);
  } catch (const DegenerateDrawError&) {
    throw;
  } catch (const LatentEvaluationError&) {
    throw;
  } catch (const std::exception& e) {
    throw LatentEvaluationError({x.begin(), x.end()}, {r.begin(), r.end()},
                                e.what());
  }
  if (!latent.contains(theta)) {
    throw LatentEvaluationError({x.begin(), x.end()}, {r.begin(), r.end()},
                                "value outside the declared latent space");
  }
  return theta;
}

double DerivedTask::operator()(std::span<const double> theta) const {
  const double v = f(theta);
  if (!(std::abs(v) <= bound)) throw BoundViolationError(v, bound);
  return v;
}

double frac(double v) { return v - std::floor(v); }

CurveGrid CurveGrid::linspace(double lo, double hi, std::size_t count) {
  if (count < 1) throw ConfigError("grid.points", "must be at least 1");
  CurveGrid g;
  for (std::size_t i = 0; i < count; ++i) {
    const double x =
        count == 1 ? lo
                   : lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(count - 1);
    g.points.push_back({x});
    g.positions.push_back(x);
  }
  return g;
}

CurveGrid CurveGrid::segment(const Point& from, const Point& to,
                             std::size_t count) {
  if (count < 1) throw ConfigError("grid.points", "must be at least 1");
  if (from.size() != to.size() || from.empty()) {
    throw ConfigError("grid", "segment endpoints must share a dimension");
  }
  Point direction(from.size());
  double length = 0.0;
  for (std::size_t j = 0; j < from.size(); ++j) {
    direction[j] = to[j] - from[j];
    length += direction[j] * direction[j];
  }
  length = std::sqrt(length);
  if (length > 0.0) {
    for (double& c : direction) c /= length;
  }
  CurveGrid g;
  for (std::size_t i = 0; i < count; ++i) {
    const double t =
        count == 1 ? 0.0
                   : static_cast<double>(i) / static_cast<double>(count - 1);
    Point p(from.size());
    double position = 0.0;
    for (std::size_t j = 0; j < from.size(); ++j) {
      p[j] = from[j] + t * (to[j] - from[j]);
      position += p[j] * direction[j];
    }
    g.points.push_back(std::move(p));
    g.positions.push_back(position);
  }
  return g;
}

CurveGrid CurveGrid::from_points(std::vector<double> xs) {
  CurveGrid g;
  for (double x : xs) {
    g.points.push_back({x});
    g.positions.push_back(x);
  }
  return g;
}

ConditionalLaw conditional_law(const Factorization& fact,
                               std::span<const double> x, std::size_t n,
                               const SeedSpec& seed) {
  ConditionalLaw law;
  law.x.assign(x.begin(), x.end());
  law.samples = SampleSet(0, fact.latent.dimension());
  law.samples.reserve(n);
  law.resampled = for_each_latent(fact, x, n, seed, [&](const Point& theta) {
    law.samples.push_back(theta);
  });
  return law;
}

Estimate conditional_expectation(const Factorization& fact,
                                 const DerivedTask& task,
                                 std::span<const double> x, std::size_t n,
                                 const SeedSpec& seed) {
  if (!(task.bound > 0.0) || !std::isfinite(task.bound)) {
    throw ConfigError("task.bound", "must be positive and finite");
  }
  Accumulator acc;
  for_each_latent(fact, x, n, seed,
                  [&](const Point& theta) { acc.add(task(theta)); });
  return acc.finish();
}

std::vector<std::vector<CurvePoint>> curves(const Factorization& fact,
                                            std::span<const DerivedTask> tasks,
                                            const CurveGrid& grid,
                                            std::size_t n,
                                            const SeedSpec& seed) {
  if (grid.points.empty()) throw ConfigError("grid", "must not be empty");
  for (const auto& task : tasks) {
    if (!(task.bound > 0.0) || !std::isfinite(task.bound)) {
      throw ConfigError("task.bound", "must be positive and finite");
    }
  }
  std::vector<std::vector<CurvePoint>> out(
      tasks.size(), std::vector<CurvePoint>(grid.points.size()));
  parallel_for(grid.points.size(), [&](std::size_t i) {
    std::vector<Accumulator> acc(tasks.size());
    for_each_latent(fact, grid.points[i], n, split(seed, i),
                    [&](const Point& theta) {
                      for (std::size_t t = 0; t < tasks.size(); ++t) {
                        acc[t].add(tasks[t](theta));
                      }
                    });
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      out[t][i] = CurvePoint{grid.points[i], grid.positions[i], acc[t].finish()};
    }
  });
  return out;
}

std::vector<CurvePoint> curve(const Factorization& fact, const DerivedTask& task,
                              const CurveGrid& grid, std::size_t n,
                              const SeedSpec& seed) {
  return std::move(curves(fact, std::span<const DerivedTask>(&task, 1), grid, n,
                          seed)
                       .front());
}

JointSample joint_sample(const Factorization& fact, const NoiseSpec& x_dist,
                         std::size_t n, const SeedSpec& seed) {
  if (x_dist.dimension() != fact.input_domain.dimension()) {
    throw ConfigError("x_dist", "dimension does not match the input domain");
  }
  JointSample out;
  out.x = draw(x_dist, split(seed, 0), n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!fact.input_domain.contains(out.x.row(i))) {
      throw ConfigError("x_dist", "draws fall outside the input domain");
    }
  }
  fact.noise.validate();
  out.theta = SampleSet(0, fact.latent.dimension());
  out.theta.reserve(n);
  RandomStream stream(split(seed, 1));
  Point r(fact.noise.dimension());
  for (std::size_t i = 0; i < n; ++i) {
    fact.noise.sample(stream, r);
    for (int attempt = 0;; ++attempt) {
      try {
        out.theta.push_back(fact.evaluate(out.x.row(i), r));
        break;
      } catch (const DegenerateDrawError&) {
        if (attempt + 1 >= kMaxResampleAttempts) throw;
        ++out.resampled;
        RandomStream retry(split(seed, {1, kResampleBranch, i,
                                        static_cast<std::uint64_t>(attempt)}));
        fact.noise.sample(retry, r);
      }
    }
  }
  return out;
}

WindowSelection window_filter(const JointSample& joint, std::span<const double> x,
                              std::size_t min_count) {
  check_point_dimension(joint, x);
  const std::size_t n = joint.x.size();
  if (min_count < 1 || min_count > n) {
    throw ConfigError("window.min_count", "must lie in [1, joint sample size]");
  }
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = sup_distance(joint.x.row(i), x);
  std::vector<double> sorted = dist;
  std::nth_element(sorted.begin(), sorted.begin() + (min_count - 1), sorted.end());
  WindowSelection out;
  out.half_width = sorted[min_count - 1];
  out.theta = SampleSet(0, joint.theta.dimension());
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i] <= out.half_width) {
      out.indices.push_back(i);
      out.theta.push_back(joint.theta.row(i));
    }
  }
  return out;
}

double kernel_regression(const JointSample& joint, const DerivedTask& task,
                         std::span<const double> x, double bandwidth) {
  check_point_dimension(joint, x);
  if (!(bandwidth > 0.0)) throw ConfigError("bandwidth", "must be positive");
  double num = 0.0;
  double den = 0.0;
  const double scale = 1.0 / (2.0 * bandwidth * bandwidth);
  for (std::size_t i = 0; i < joint.x.size(); ++i) {
    const double w = std::exp(-squared_distance(joint.x.row(i), x) * scale);
    if (w == 0.0) continue;
    num += w * task(joint.theta.row(i));
    den += w;
  }
  if (den == 0.0) throw DataError("kernel_regression: no mass near x");
  return num / den;
}

double nearest_neighbor_mean(const JointSample& joint, const DerivedTask& task,
                             std::span<const double> x, std::size_t k) {
  check_point_dimension(joint, x);
  const std::size_t n = joint.x.size();
  if (k < 1 || k > n) throw ConfigError("k", "must lie in [1, sample size]");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = squared_distance(joint.x.row(i), x);
  std::nth_element(order.begin(), order.begin() + (k - 1), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                   });
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) sum += task(joint.theta.row(order[j]));
  return sum / static_cast<double>(k);
}

}  // namespace regulab
