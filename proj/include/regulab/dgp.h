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

// Data-generating processes L = T o W.
//
// A Factorization couples an input domain K, a noise law over Gamma that does
// not depend on x, and a deterministic map T(x, r) into the latent space
// Theta. Because the noise is independent of x by construction, the law of L
// given X = x is the pushforward of the noise law through T(x, .), and that is
// what conditional_law() samples.

#ifndef REGULAB_DGP_H_
#define REGULAB_DGP_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "regulab/sampling.h"

namespace regulab {

// K: a compact box in R^n or a finite set of points.
class InputDomain {
 public:
  InputDomain() = default;
  static InputDomain box(Point lo, Point hi);
  static InputDomain finite(std::vector<Point> points);

  bool is_box() const { return is_box_; }
  std::size_t dimension() const;
  bool contains(std::span<const double> x, double tol = 1e-12) const;
  void validate() const;

  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  const std::vector<Point>& points() const { return points_; }

 private:
  bool is_box_ = true;
  Point lo_;
  Point hi_;
  std::vector<Point> points_;
};

class LatentSpace {
 public:
  enum class Kind { kContinuous, kDiscrete };

  LatentSpace() = default;
  // `exact_equality` declares that equal latent values mean "same outcome",
  // which lets discrete-style probes run on a continuous encoding.
  static LatentSpace continuous(std::size_t dimension, bool exact_equality = false);
  // Labels are encoded as one-dimensional points. An empty label list means
  // the universe is countable and not enumerated.
  static LatentSpace discrete(std::vector<double> labels = {});

  Kind kind() const { return kind_; }
  bool is_discrete() const { return kind_ == Kind::kDiscrete; }
  std::size_t dimension() const { return dimension_; }
  bool exact_equality() const { return exact_equality_; }
  const std::vector<double>& labels() const { return labels_; }

  bool contains(std::span<const double> theta) const;

 private:
  Kind kind_ = Kind::kContinuous;
  std::size_t dimension_ = 1;
  bool exact_equality_ = false;
  std::vector<double> labels_;
};

using TMap =
    std::function<Point(std::span<const double> x, std::span<const double> r)>;

struct Factorization {
  std::string name;
  InputDomain input_domain;
  NoiseSpec noise;
  TMap t_map;
  LatentSpace latent;

  // T(x, r) with output validation. Failures become LatentEvaluationError;
  // DegenerateDrawError passes through so samplers can redraw.
  Point evaluate(std::span<const double> x, std::span<const double> r) const;
};

// Empirical stand-in for the conditional law of L given X = x. Every sample
// carries weight 1/n.
struct ConditionalLaw {
  Point x;
  SampleSet samples;
  std::size_t resampled = 0;

  double weight() const { return 1.0 / static_cast<double>(samples.size()); }
};

struct DerivedTask {
  std::string name;
  std::function<double(std::span<const double>)> f;
  double bound = 1.0;

  // Evaluates f and enforces |f| <= bound (BoundViolationError otherwise).
  double operator()(std::span<const double> theta) const;
};

// Fractional part v - floor(v), in [0, 1) for negative v as well.
double frac(double v);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  // Range of f over the samples; equal when f was constant on them.
  double f_min = 0.0;
  double f_max = 0.0;
};

struct CurvePoint {
  Point x;
  double position = 0.0;
  Estimate estimate;
};

// Points along a segment. `position` of each point is its coordinate along
// the segment direction, which is x itself for one-dimensional K.
struct CurveGrid {
  std::vector<Point> points;
  std::vector<double> positions;

  static CurveGrid linspace(double lo, double hi, std::size_t count);
  static CurveGrid segment(const Point& from, const Point& to, std::size_t count);
  static CurveGrid from_points(std::vector<double> xs);
};

ConditionalLaw conditional_law(const Factorization& fact,
                               std::span<const double> x, std::size_t n,
                               const SeedSpec& seed);

Estimate conditional_expectation(const Factorization& fact,
                                 const DerivedTask& task,
                                 std::span<const double> x, std::size_t n,
                                 const SeedSpec& seed);

// One estimate per grid point, grid point i on substream split(seed, i).
std::vector<CurvePoint> curve(const Factorization& fact, const DerivedTask& task,
                              const CurveGrid& grid, std::size_t n,
                              const SeedSpec& seed);

// Several tasks over the same conditional samples; result[t] is the curve of
// tasks[t]. Identical to calling curve() once per task.
std::vector<std::vector<CurvePoint>> curves(const Factorization& fact,
                                            std::span<const DerivedTask> tasks,
                                            const CurveGrid& grid,
                                            std::size_t n, const SeedSpec& seed);

struct JointSample {
  SampleSet x;
  SampleSet theta;
  std::size_t resampled = 0;
};

// n i.i.d. pairs (X_i, T(X_i, R_i)), X from split(seed, 0) and R from
// split(seed, 1).
JointSample joint_sample(const Factorization& fact, const NoiseSpec& x_dist,
                         std::size_t n, const SeedSpec& seed);

struct WindowSelection {
  double half_width = 0.0;
  std::vector<std::size_t> indices;
  SampleSet theta;
};

// Smallest sup-norm half-width h around x such that at least `min_count`
// pairs have |X_i - x|_inf <= h; returns those pairs.
WindowSelection window_filter(const JointSample& joint, std::span<const double> x,
                              std::size_t min_count);

// Nadaraya-Watson regression of f(theta) on X with a Gaussian kernel.
double kernel_regression(const JointSample& joint, const DerivedTask& task,
                         std::span<const double> x, double bandwidth);

// Mean of f(theta) over the k nearest X_i (Euclidean).
double nearest_neighbor_mean(const JointSample& joint, const DerivedTask& task,
                             std::span<const double> x, std::size_t k);

}  // namespace regulab

#endif  // REGULAB_DGP_H_
