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

#include "regulab/whitening.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "regulab/errors.h"
#include "regulab/metrics.h"

namespace regulab {
namespace {

constexpr char kFormatName[] = "regulab.cdf_chain";

// Equal-count interior cuts; duplicates and cuts at the minimum are dropped
// so that no bin is empty by construction.
std::vector<double> equal_count_cuts(std::vector<double> sorted, std::size_t bins) {
  std::vector<double> cuts;
  const std::size_t m = sorted.size();
  for (std::size_t b = 1; b < bins; ++b) {
    const double v = sorted[b * m / bins];
    if (v > sorted.front() && (cuts.empty() || v > cuts.back())) cuts.push_back(v);
  }
  return cuts;
}

std::size_t bin_of(const std::vector<double>& cuts, double v) {
  return static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), v) -
                                  cuts.begin());
}

void check_finite(const SampleSet& s, const char* what) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (double v : s.row(i)) {
      if (!std::isfinite(v)) {
        throw DataError(std::string("non-finite ") + what + " at row " +
                        std::to_string(i));
      }
    }
  }
}

}  // namespace

double ConditionalCdfChain::Node::ecdf(double t) const {
  const std::size_t m = values.size();
  if (t < values.front()) return 0.0;
  if (t >= values.back()) return 1.0;
  const std::size_t j =
      static_cast<std::size_t>(std::upper_bound(values.begin(), values.end(), t) -
                               values.begin()) -
      1;
  const double frac_step = (t - values[j]) / (values[j + 1] - values[j]);
  return (static_cast<double>(j) + frac_step) / static_cast<double>(m - 1);
}

ConditionalCdfChain ConditionalCdfChain::identity(std::size_t x_dimension,
                                                  std::size_t noise_dimension) {
  if (x_dimension < 1 || noise_dimension < 1) {
    throw ConfigError("dimension", "must be at least 1");
  }
  ConditionalCdfChain chain;
  chain.x_dimension_ = x_dimension;
  chain.noise_dimension_ = noise_dimension;
  chain.x_lo_.assign(x_dimension, -std::numeric_limits<double>::infinity());
  chain.x_hi_.assign(x_dimension, std::numeric_limits<double>::infinity());
  chain.x_cuts_.assign(x_dimension, {});
  chain.x_centers_.assign(x_dimension, {0.0});
  // One node per component, each the only child of the previous one.
  for (std::size_t i = 0; i < noise_dimension; ++i) {
    Node node;
    node.values = {0.0, 1.0};
    if (i + 1 < noise_dimension) {
      node.children = {static_cast<std::uint32_t>(i + 1)};
    }
    chain.nodes_.push_back(std::move(node));
  }
  chain.roots_ = {0};
  return chain;
}

ConditionalCdfChain ConditionalCdfChain::fit(const SampleSet& x, const SampleSet& r,
                                             const ChainConfig& config) {
  if (x.size() != r.size()) {
    throw DataError("fit: x and r hold different numbers of rows");
  }
  if (x.size() < config.min_pairs) {
    throw ConfigError("pairs", "at least " + std::to_string(config.min_pairs) +
                                   " pairs are required");
  }
  if (config.x_bins < 1) throw ConfigError("x_bins", "must be at least 1");
  if (config.r_bins < 1) throw ConfigError("r_bins", "must be at least 1");
  check_finite(x, "x");
  check_finite(r, "r");

  ConditionalCdfChain chain;
  chain.x_dimension_ = x.dimension();
  chain.noise_dimension_ = r.dimension();
  const std::size_t n = x.size();

  std::vector<std::vector<std::size_t>> marginal_bin(chain.x_dimension_,
                                                     std::vector<std::size_t>(n));
  std::size_t cells = 1;
  for (std::size_t j = 0; j < chain.x_dimension_; ++j) {
    std::vector<double> col = x.column(j);
    std::vector<double> sorted = col;
    std::sort(sorted.begin(), sorted.end());
    chain.x_lo_.push_back(sorted.front());
    chain.x_hi_.push_back(sorted.back());
    auto cuts = equal_count_cuts(sorted, config.x_bins);
    std::vector<double> sums(cuts.size() + 1, 0.0);
    std::vector<std::size_t> counts(cuts.size() + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t b = bin_of(cuts, col[i]);
      marginal_bin[j][i] = b;
      sums[b] += col[i];
      ++counts[b];
    }
    std::vector<double> centers(sums.size());
    for (std::size_t b = 0; b < sums.size(); ++b) {
      centers[b] = sums[b] / static_cast<double>(counts[b]);
    }
    cells *= cuts.size() + 1;
    chain.x_cuts_.push_back(std::move(cuts));
    chain.x_centers_.push_back(std::move(centers));
  }

  std::vector<std::vector<std::size_t>> rows(cells);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t cell = 0;
    for (std::size_t j = 0; j < chain.x_dimension_; ++j) {
      cell = cell * (chain.x_cuts_[j].size() + 1) + marginal_bin[j][i];
    }
    rows[cell].push_back(i);
  }
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::string name = "x cell [";
    std::size_t rest = cell;
    std::vector<std::size_t> coords(chain.x_dimension_);
    for (std::size_t j = chain.x_dimension_; j-- > 0;) {
      coords[j] = rest % (chain.x_cuts_[j].size() + 1);
      rest /= chain.x_cuts_[j].size() + 1;
    }
    for (std::size_t j = 0; j < coords.size(); ++j) {
      name += (j ? "," : "") + std::to_string(coords[j]);
    }
    name += "]";
    chain.roots_.push_back(chain.build(r, std::move(rows[cell]), 0, name, config));
  }
  return chain;
}

std::uint32_t ConditionalCdfChain::build(const SampleSet& r,
                                         std::vector<std::size_t> rows,
                                         std::size_t component,
                                         const std::string& path,
                                         const ChainConfig& config) {
  if (rows.size() < 2) {
    throw FitError("conditioning bin " + path + " holds " +
                   std::to_string(rows.size()) + " pairs; at least 2 are needed");
  }
  Node node;
  node.values.reserve(rows.size());
  for (std::size_t i : rows) node.values.push_back(r(i, component));
  std::sort(node.values.begin(), node.values.end());
  if (node.values.front() == node.values.back()) {
    throw FitError("conditioning bin " + path + " has a degenerate component " +
                   std::to_string(component) + " (all values equal)");
  }
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{});
  if (component + 1 < noise_dimension_) {
    const std::size_t bins = std::max<std::size_t>(
        1, std::min(config.r_bins, node.values.size() / 2));
    node.cuts = equal_count_cuts(node.values, bins);
    std::vector<std::vector<std::size_t>> parts(node.cuts.size() + 1);
    for (std::size_t i : rows) parts[bin_of(node.cuts, r(i, component))].push_back(i);
    for (std::size_t b = 0; b < parts.size(); ++b) {
      node.children.push_back(build(r, std::move(parts[b]), component + 1,
                                    path + "/r" + std::to_string(component) + "[" +
                                        std::to_string(b) + "]",
                                    config));
    }
  }
  nodes_[index] = std::move(node);
  return index;
}

std::vector<ConditionalCdfChain::CellWeight> ConditionalCdfChain::cell_weights(
    std::span<const double> x) const {
  if (x.size() != x_dimension_) {
    throw ConfigError("x", "dimension does not match the chain");
  }
  std::vector<CellWeight> out{{0, 1.0}};
  for (std::size_t j = 0; j < x_dimension_; ++j) {
    const auto& c = x_centers_[j];
    const std::size_t stride = c.size();
    std::vector<std::pair<std::size_t, double>> axis;
    if (x[j] <= c.front()) {
      axis.emplace_back(0, 1.0);
    } else if (x[j] >= c.back()) {
      axis.emplace_back(c.size() - 1, 1.0);
    } else {
      const std::size_t hi = static_cast<std::size_t>(
          std::upper_bound(c.begin(), c.end(), x[j]) - c.begin());
      const double lambda = (x[j] - c[hi - 1]) / (c[hi] - c[hi - 1]);
      axis.emplace_back(hi - 1, 1.0 - lambda);
      if (lambda > 0.0) axis.emplace_back(hi, lambda);
    }
    std::vector<CellWeight> next;
    for (const auto& cw : out) {
      for (const auto& [b, w] : axis) {
        next.push_back({cw.cell * stride + b, cw.weight * w});
      }
    }
    out = std::move(next);
  }
  return out;
}

const ConditionalCdfChain::Node& ConditionalCdfChain::descend(
    std::size_t cell, std::span<const double> prefix) const {
  const Node* node = &nodes_[roots_[cell]];
  for (double v : prefix) {
    node = &nodes_[node->children[bin_of(node->cuts, v)]];
  }
  return *node;
}

bool ConditionalCdfChain::x_inside(std::span<const double> x) const {
  for (std::size_t j = 0; j < x_dimension_; ++j) {
    if (x[j] < x_lo_[j] || x[j] > x_hi_[j]) return false;
  }
  return true;
}

double ConditionalCdfChain::cdf(std::span<const double> x,
                                std::span<const double> prefix, double t) const {
  if (prefix.size() >= noise_dimension_) {
    throw ConfigError("prefix", "longer than the noise dimension allows");
  }
  double f = 0.0;
  for (const auto& cw : cell_weights(x)) {
    f += cw.weight * descend(cw.cell, prefix).ecdf(t);
  }
  return std::clamp(f, 0.0, 1.0);
}

double ConditionalCdfChain::quantile(std::span<const double> x,
                                     std::span<const double> prefix,
                                     double c) const {
  if (prefix.size() >= noise_dimension_) {
    throw ConfigError("prefix", "longer than the noise dimension allows");
  }
  const auto weights = cell_weights(x);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& cw : weights) {
    const Node& node = descend(cw.cell, prefix);
    lo = std::min(lo, node.values.front());
    hi = std::max(hi, node.values.back());
  }
  if (c >= 1.0) return hi;
  auto f = [&](double t) {
    double s = 0.0;
    for (const auto& cw : weights) s += cw.weight * descend(cw.cell, prefix).ecdf(t);
    return s;
  };
  // Invariant: f(a) <= c < f(b).
  double a = lo;
  double b = hi;
  if (f(b) <= c) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (f(mid) <= c) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return a;
}

Whitened ConditionalCdfChain::whiten(std::span<const double> x,
                                     std::span<const double> r) const {
  if (r.size() != noise_dimension_) {
    throw ConfigError("r", "dimension does not match the chain");
  }
  Whitened out;
  out.c.resize(noise_dimension_);
  out.clamped = !x_inside(x);
  const auto weights = cell_weights(x);
  for (std::size_t i = 0; i < noise_dimension_; ++i) {
    const auto prefix = r.first(i);
    double f = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& cw : weights) {
      const Node& node = descend(cw.cell, prefix);
      f += cw.weight * node.ecdf(r[i]);
      lo = std::min(lo, node.values.front());
      hi = std::max(hi, node.values.back());
    }
    if (r[i] < lo || r[i] > hi) out.clamped = true;
    out.c[i] = std::clamp(f, 0.0, 1.0);
  }
  return out;
}

Point ConditionalCdfChain::unwhiten(std::span<const double> x,
                                    std::span<const double> c) const {
  if (c.size() != noise_dimension_) {
    throw ConfigError("c", "dimension does not match the chain");
  }
  Point r(noise_dimension_);
  for (std::size_t i = 0; i < noise_dimension_; ++i) {
    r[i] = quantile(x, std::span<const double>(r).first(i), c[i]);
  }
  return r;
}

nlohmann::json ConditionalCdfChain::to_json() const {
  nlohmann::json j;
  j["format"] = kFormatName;
  j["version"] = kFormatVersion;
  j["x_dimension"] = x_dimension_;
  j["noise_dimension"] = noise_dimension_;
  auto finite_or_null = [](const Point& p) {
    nlohmann::json a = nlohmann::json::array();
    for (double v : p) {
      if (std::isfinite(v)) {
        a.push_back(v);
      } else {
        a.push_back(nullptr);
      }
    }
    return a;
  };
  j["x_lo"] = finite_or_null(x_lo_);
  j["x_hi"] = finite_or_null(x_hi_);
  j["x_cuts"] = x_cuts_;
  j["x_centers"] = x_centers_;
  j["roots"] = roots_;
  nlohmann::json nodes = nlohmann::json::array();
  for (const Node& node : nodes_) {
    nodes.push_back(
        {{"values", node.values}, {"cuts", node.cuts}, {"children", node.children}});
  }
  j["nodes"] = std::move(nodes);
  return j;
}

ConditionalCdfChain ConditionalCdfChain::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormatName) {
      throw DataError("not a serialized conditional CDF chain");
    }
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion) {
      throw DataError("unsupported chain version " + std::to_string(version));
    }
    ConditionalCdfChain chain;
    chain.x_dimension_ = j.at("x_dimension").get<std::size_t>();
    chain.noise_dimension_ = j.at("noise_dimension").get<std::size_t>();
    auto read_bounds = [](const nlohmann::json& a, double missing) {
      Point p;
      for (const auto& v : a) p.push_back(v.is_null() ? missing : v.get<double>());
      return p;
    };
    constexpr double kInf = std::numeric_limits<double>::infinity();
    chain.x_lo_ = read_bounds(j.at("x_lo"), -kInf);
    chain.x_hi_ = read_bounds(j.at("x_hi"), kInf);
    chain.x_cuts_ = j.at("x_cuts").get<std::vector<std::vector<double>>>();
    chain.x_centers_ = j.at("x_centers").get<std::vector<std::vector<double>>>();
    chain.roots_ = j.at("roots").get<std::vector<std::uint32_t>>();
    for (const auto& n : j.at("nodes")) {
      Node node;
      node.values = n.at("values").get<std::vector<double>>();
      node.cuts = n.at("cuts").get<std::vector<double>>();
      node.children = n.at("children").get<std::vector<std::uint32_t>>();
      if (node.values.size() < 2 || !std::is_sorted(node.values.begin(),
                                                    node.values.end())) {
        throw DataError("chain node values must be sorted with at least 2 entries");
      }
      chain.nodes_.push_back(std::move(node));
    }
    std::size_t cells = 1;
    if (chain.x_cuts_.size() != chain.x_dimension_ ||
        chain.x_centers_.size() != chain.x_dimension_ ||
        chain.x_lo_.size() != chain.x_dimension_ ||
        chain.x_hi_.size() != chain.x_dimension_) {
      throw DataError("chain x tables do not match x_dimension");
    }
    for (std::size_t d = 0; d < chain.x_dimension_; ++d) {
      if (chain.x_centers_[d].size() != chain.x_cuts_[d].size() + 1) {
        throw DataError("chain x centres do not match its cuts");
      }
      cells *= chain.x_centers_[d].size();
    }
    if (chain.roots_.size() != cells) {
      throw DataError("chain root count does not match its x cells");
    }
    for (const Node& node : chain.nodes_) {
      for (auto c : node.children) {
        if (c >= chain.nodes_.size()) throw DataError("chain child index out of range");
      }
    }
    for (auto root : chain.roots_) {
      if (root >= chain.nodes_.size()) throw DataError("chain root index out of range");
    }
    return chain;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed chain: ") + e.what());
  }
}

void ConditionalCdfChain::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << to_json().dump() << "\n";
}

ConditionalCdfChain ConditionalCdfChain::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return from_json(j);
}

WhitenessReport verify_whiteness(const ConditionalCdfChain& chain,
                                 const SampleSet& x, const SampleSet& r,
                                 const WhitenessThresholds& thresholds) {
  if (x.size() != r.size() || x.empty()) {
    throw DataError("verify_whiteness: need equal, non-zero row counts");
  }
  const std::size_t k = chain.noise_dimension();
  std::vector<std::vector<double>> c(k, std::vector<double>(x.size()));
  WhitenessReport report;
  report.thresholds = thresholds;
  report.pairs = x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Whitened w = chain.whiten(x.row(i), r.row(i));
    if (w.clamped) ++report.clamped;
    for (std::size_t j = 0; j < k; ++j) c[j][i] = w.c[j];
  }
  for (std::size_t j = 0; j < k; ++j) report.ks.push_back(ks_uniform(c[j]));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      report.max_component_correlation = std::max(
          report.max_component_correlation, std::abs(spearman_correlation(c[a], c[b])));
    }
    for (std::size_t d = 0; d < x.dimension(); ++d) {
      report.max_x_correlation =
          std::max(report.max_x_correlation,
                   std::abs(spearman_correlation(c[a], x.column(d))));
    }
  }
  report.passed =
      std::all_of(report.ks.begin(), report.ks.end(),
                  [&](double v) { return v < thresholds.ks; }) &&
      report.max_component_correlation < thresholds.correlation &&
      report.max_x_correlation < thresholds.correlation;
  return report;
}

DependentNoiseModel::Joint DependentNoiseModel::sample(std::size_t n,
                                                       const SeedSpec& seed) const {
  Joint out;
  out.x = draw(x_dist, split(seed, 0), n);
  const SampleSet u = draw(innovation, split(seed, 1), n);
  out.r = SampleSet(n, noise_dimension);
  for (std::size_t i = 0; i < n; ++i) {
    const Point r = noise_map(out.x.row(i), u.row(i));
    if (r.size() != noise_dimension) {
      throw DataError("noise map returned the wrong dimension");
    }
    std::copy(r.begin(), r.end(), out.r.row(i).begin());
  }
  return out;
}

Factorization DependentNoiseModel::reference() const {
  Factorization f;
  f.name = name;
  f.input_domain = input_domain;
  f.noise = innovation;
  f.latent = latent;
  f.t_map = [g = noise_map, t = t_map](std::span<const double> x,
                                       std::span<const double> u) {
    return t(x, g(x, u));
  };
  return f;
}

Point WhitenedFactorization::t_prime(std::span<const double> x,
                                     std::span<const double> c) const {
  return base.t_map(x, chain->unwhiten(x, c));
}

Factorization WhitenedFactorization::factorization() const {
  Factorization f;
  f.name = base.name + "_whitened";
  f.input_domain = base.input_domain;
  f.noise = DistributionSpec::uniform(0.0, 1.0, chain->noise_dimension());
  f.latent = base.latent;
  f.t_map = [t = base.t_map, chain = chain](std::span<const double> x,
                                            std::span<const double> c) {
    return t(x, chain->unwhiten(x, c));
  };
  return f;
}

WhitenedFactorization whiten_model(const DependentNoiseModel& model,
                                   std::shared_ptr<const ConditionalCdfChain> chain) {
  if (!chain) throw ConfigError("chain", "must be set");
  if (chain->noise_dimension() != model.noise_dimension) {
    throw ConfigError("chain", "noise dimension does not match the model");
  }
  WhitenedFactorization w;
  w.base.name = model.name;
  w.base.input_domain = model.input_domain;
  w.base.noise = DistributionSpec::uniform(0.0, 1.0, model.noise_dimension);
  w.base.t_map = model.t_map;
  w.base.latent = model.latent;
  w.chain = std::move(chain);
  return w;
}

}  // namespace regulab
