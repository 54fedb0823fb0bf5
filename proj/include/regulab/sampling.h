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

// Deterministic, splittable randomness.
//
// Every random quantity in the toolkit is drawn from a RandomStream built from
// a SeedSpec: a root seed plus a hierarchical path of child indices. The path
// is hashed into a Philox4x32-10 key and the stream walks the counter, so any
// (root_seed, stream_path) names one fixed sequence regardless of which thread
// consumes it or in which order sibling streams are created.

#ifndef REGULAB_SAMPLING_H_
#define REGULAB_SAMPLING_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace regulab {

using Point = std::vector<double>;

struct SeedSpec {
  std::uint64_t root_seed = 0;
  std::vector<std::uint64_t> stream_path;

  bool operator==(const SeedSpec&) const = default;
  std::string to_string() const;
};

// Appends `child` to the stream path.
SeedSpec split(const SeedSpec& seed, std::uint64_t child);
SeedSpec split(const SeedSpec& seed, std::initializer_list<std::uint64_t> path);

// One Philox4x32 block with 10 rounds (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Counter-based stream. Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(const SeedSpec& seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  // 53-bit uniform on [0, 1).
  double uniform();
  // 53-bit uniform on the open interval (0, 1).
  double open_uniform();
  // Standard normal via the inverse CDF of open_uniform().
  double gaussian();
  // Uniformly distributed direction on the unit sphere in R^dim.
  Point unit_direction(std::size_t dim);

 private:
  std::uint32_t next_word();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  std::size_t used_ = 4;
};

// Row-major n x dimension matrix of samples.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(std::size_t rows, std::size_t dimension)
      : dimension_(dimension), data_(rows * dimension, 0.0) {}

  std::size_t size() const {
    return dimension_ == 0 ? 0 : data_.size() / dimension_;
  }
  std::size_t dimension() const { return dimension_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dimension_, dimension_};
  }
  std::span<double> row(std::size_t i) {
    return {data_.data() + i * dimension_, dimension_};
  }
  Point point(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * dimension_ + j];
  }

  // The first push_back on an empty set fixes the dimension.
  void push_back(std::span<const double> values);
  void reserve(std::size_t rows) { data_.reserve(rows * dimension_); }

  std::vector<double> column(std::size_t j) const;
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t dimension_ = 0;
  std::vector<double> data_;
};

class DistributionSpec {
 public:
  enum class Kind { kUniform, kGaussian, kCategorical, kCustomQuantile };

  // Factories do not validate; validate() (called by draw) does.
  static DistributionSpec uniform(double lo, double hi, std::size_t dimension = 1);
  static DistributionSpec gaussian(double mean, double std,
                                   std::size_t dimension = 1);
  static DistributionSpec categorical(std::vector<double> weights,
                                      std::size_t dimension = 1);
  // `quantile` maps u in (0, 1) to a value. `absolutely_continuous` declares
  // whether the resulting law has a Lebesgue density.
  static DistributionSpec custom_quantile(std::function<double(double)> quantile,
                                          std::size_t dimension = 1,
                                          bool absolutely_continuous = true);

  Kind kind() const { return kind_; }
  std::size_t dimension() const { return dimension_; }
  bool absolutely_continuous() const;

  double lo() const { return a_; }
  double hi() const { return b_; }
  double mean() const { return a_; }
  double std_dev() const { return b_; }
  const std::vector<double>& weights() const { return weights_; }

  // Same law with a different number of i.i.d. coordinates.
  DistributionSpec with_dimension(std::size_t dimension) const;

  // Throws ConfigError naming the offending field.
  void validate() const;

  // One scalar draw; every coordinate of a row is i.i.d.
  double sample(RandomStream& stream) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::kUniform;
  std::size_t dimension_ = 1;
  double a_ = 0.0;
  double b_ = 1.0;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  std::function<double(double)> quantile_;
  bool custom_continuous_ = true;
};

// Product of independent blocks; the noise of a factorization lives here.
class NoiseSpec {
 public:
  NoiseSpec() = default;
  NoiseSpec(DistributionSpec single) : blocks_{std::move(single)} {}  // NOLINT
  explicit NoiseSpec(std::vector<DistributionSpec> blocks)
      : blocks_(std::move(blocks)) {}

  const std::vector<DistributionSpec>& blocks() const { return blocks_; }
  std::size_t dimension() const;
  bool absolutely_continuous() const;
  void validate() const;

  // Fills `out` (length dimension()) with one joint draw.
  void sample(RandomStream& stream, std::span<double> out) const;

 private:
  std::vector<DistributionSpec> blocks_;
};

// n rows, i.i.d. Deterministic in (spec, seed, n).
SampleSet draw(const DistributionSpec& spec, const SeedSpec& seed, std::size_t n);
SampleSet draw(const NoiseSpec& spec, const SeedSpec& seed, std::size_t n);

// Sample-count knobs; commands read these from config.
struct SampleBudget {
  std::size_t per_estimate = 100000;
  std::size_t quick = 10000;
};

}  // namespace regulab

#endif  // REGULAB_SAMPLING_H_
