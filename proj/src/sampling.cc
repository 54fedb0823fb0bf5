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

#include "regulab/sampling.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "regulab/errors.h"

namespace regulab {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(const SeedSpec& seed) {
  std::uint64_t h = mix64(seed.root_seed ^ 0x52454755'4C414221ull);
  for (std::uint64_t child : seed.stream_path) {
    h = mix64(h + kGolden + mix64(child + 1));
  }
  return h;
}

}  // namespace

std::string SeedSpec::to_string() const {
  std::ostringstream out;
  out << root_seed << ":[";
  for (std::size_t i = 0; i < stream_path.size(); ++i) {
    if (i > 0) out << ",";
    out << stream_path[i];
  }
  out << "]";
  return out.str();
}

SeedSpec split(const SeedSpec& seed, std::uint64_t child) {
  SeedSpec out = seed;
  out.stream_path.push_back(child);
  return out;
}

SeedSpec split(const SeedSpec& seed, std::initializer_list<std::uint64_t> path) {
  SeedSpec out = seed;
  out.stream_path.insert(out.stream_path.end(), path.begin(), path.end());
  return out;
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

RandomStream::RandomStream(const SeedSpec& seed) {
  const std::uint64_t k = stream_key(seed);
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

std::uint32_t RandomStream::next_word() {
  if (used_ == buffer_.size()) {
    buffer_ = philox4x32_10({static_cast<std::uint32_t>(block_),
                             static_cast<std::uint32_t>(block_ >> 32), 0, 0},
                            key_);
    ++block_;
    used_ = 0;
  }
  return buffer_[used_++];
}

RandomStream::result_type RandomStream::operator()() {
  const std::uint64_t lo = next_word();
  const std::uint64_t hi = next_word();
  return (hi << 32) | lo;
}

double RandomStream::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RandomStream::open_uniform() {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * open_uniform());
}

Point RandomStream::unit_direction(std::size_t dim) {
  Point v(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& c : v) {
      c = gaussian();
      norm += c * c;
    }
  } while (norm < 1e-24);
  norm = std::sqrt(norm);
  for (double& c : v) c /= norm;
  return v;
}

void SampleSet::push_back(std::span<const double> values) {
  if (data_.empty() && dimension_ == 0) dimension_ = values.size();
  if (values.size() != dimension_) {
    throw std::invalid_argument("SampleSet::push_back: dimension mismatch");
  }
  data_.insert(data_.end(), values.begin(), values.end());
}

std::vector<double> SampleSet::column(std::size_t j) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(i, j);
  return out;
}

DistributionSpec DistributionSpec::uniform(double lo, double hi,
                                           std::size_t dimension) {
  DistributionSpec s;
  s.kind_ = Kind::kUniform;
  s.a_ = lo;
  s.b_ = hi;
  s.dimension_ = dimension;
  return s;
}

DistributionSpec DistributionSpec::gaussian(double mean, double std,
                                            std::size_t dimension) {
  DistributionSpec s;
  s.kind_ = Kind::kGaussian;
  s.a_ = mean;
  s.b_ = std;
  s.dimension_ = dimension;
  return s;
}

DistributionSpec DistributionSpec::categorical(std::vector<double> weights,
                                               std::size_t dimension) {
  DistributionSpec s;
  s.kind_ = Kind::kCategorical;
  s.dimension_ = dimension;
  s.weights_ = std::move(weights);
  s.cumulative_.resize(s.weights_.size());
  std::partial_sum(s.weights_.begin(), s.weights_.end(), s.cumulative_.begin());
  return s;
}

DistributionSpec DistributionSpec::custom_quantile(
    std::function<double(double)> quantile, std::size_t dimension,
    bool absolutely_continuous) {
  DistributionSpec s;
  s.kind_ = Kind::kCustomQuantile;
  s.dimension_ = dimension;
  s.quantile_ = std::move(quantile);
  s.custom_continuous_ = absolutely_continuous;
  return s;
}

DistributionSpec DistributionSpec::with_dimension(std::size_t dimension) const {
  DistributionSpec s = *this;
  s.dimension_ = dimension;
  return s;
}

bool DistributionSpec::absolutely_continuous() const {
  switch (kind_) {
    case Kind::kUniform:
    case Kind::kGaussian:
      return true;
    case Kind::kCategorical:
      return false;
    case Kind::kCustomQuantile:
      return custom_continuous_;
  }
  return false;
}

void DistributionSpec::validate() const {
  if (dimension_ < 1) throw ConfigError("dimension", "must be at least 1");
  switch (kind_) {
    case Kind::kUniform:
      if (!std::isfinite(a_)) throw ConfigError("uniform.lo", "must be finite");
      if (!std::isfinite(b_)) throw ConfigError("uniform.hi", "must be finite");
      if (!(a_ < b_)) throw ConfigError("uniform.hi", "requires lo < hi");
      break;
    case Kind::kGaussian:
      if (!std::isfinite(a_)) throw ConfigError("gaussian.mean", "must be finite");
      if (!(b_ > 0.0) || !std::isfinite(b_)) {
        throw ConfigError("gaussian.std", "must be positive and finite");
      }
      break;
    case Kind::kCategorical: {
      if (weights_.empty()) {
        throw ConfigError("categorical.weights", "must not be empty");
      }
      for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
          throw ConfigError("categorical.weights[" + std::to_string(i) + "]",
                            "must be non-negative and finite");
        }
      }
      const double total = cumulative_.back();
      if (std::abs(total - 1.0) > 1e-12) {
        throw ConfigError("categorical.weights", "must sum to 1 within 1e-12");
      }
      break;
    }
    case Kind::kCustomQuantile:
      if (!quantile_) {
        throw ConfigError("custom_quantile.function", "must be set");
      }
      break;
  }
}

double DistributionSpec::sample(RandomStream& stream) const {
  switch (kind_) {
    case Kind::kUniform:
      return a_ + (b_ - a_) * stream.uniform();
    case Kind::kGaussian:
      return a_ + b_ * stream.gaussian();
    case Kind::kCategorical: {
      const double u = stream.uniform();
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      auto index = static_cast<std::size_t>(it - cumulative_.begin());
      // Guard against a total of 1 - 1e-13 from rounding.
      while (index >= weights_.size() || weights_[index] == 0.0) {
        if (index == 0) break;
        --index;
      }
      return static_cast<double>(index);
    }
    case Kind::kCustomQuantile:
      return quantile_(stream.open_uniform());
  }
  return 0.0;
}

std::string DistributionSpec::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::kUniform:
      out << "uniform(" << a_ << "," << b_ << ")";
      break;
    case Kind::kGaussian:
      out << "gaussian(" << a_ << "," << b_ << ")";
      break;
    case Kind::kCategorical:
      out << "categorical(" << weights_.size() << ")";
      break;
    case Kind::kCustomQuantile:
      out << "custom_quantile";
      break;
  }
  if (dimension_ != 1) out << "^" << dimension_;
  return out.str();
}

std::size_t NoiseSpec::dimension() const {
  std::size_t d = 0;
  for (const auto& b : blocks_) d += b.dimension();
  return d;
}

bool NoiseSpec::absolutely_continuous() const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [](const auto& b) { return b.absolutely_continuous(); });
}

void NoiseSpec::validate() const {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    try {
      blocks_[i].validate();
    } catch (const ConfigError& e) {
      if (blocks_.size() == 1) throw;
      throw ConfigError("noise[" + std::to_string(i) + "]." + e.field(),
                        "invalid block");
    }
  }
}

void NoiseSpec::sample(RandomStream& stream, std::span<double> out) const {
  std::size_t k = 0;
  for (const auto& block : blocks_) {
    for (std::size_t j = 0; j < block.dimension(); ++j) {
      out[k++] = block.sample(stream);
    }
  }
}

SampleSet draw(const DistributionSpec& spec, const SeedSpec& seed,
               std::size_t n) {
  return draw(NoiseSpec(spec), seed, n);
}

SampleSet draw(const NoiseSpec& spec, const SeedSpec& seed, std::size_t n) {
  if (n < 1) throw ConfigError("n", "must be at least 1");
  spec.validate();
  SampleSet out(n, spec.dimension());
  RandomStream stream(seed);
  for (std::size_t i = 0; i < n; ++i) spec.sample(stream, out.row(i));
  return out;
}

}  // namespace regulab
