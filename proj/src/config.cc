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

#include "regulab/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "regulab/errors.h"
#include "regulab/scenarios.h"

namespace regulab {
namespace {

using nlohmann::json;

// A JSON object whose keys are checked against an allow-list.
class Section {
 public:
  Section(const json& j, std::string path, std::set<std::string> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(display(), "must be an object");
    for (const auto& [key, value] : j.items()) {
      if (!allowed.count(key)) throw ConfigError(field(key), "unknown field");
    }
  }

  bool has(const std::string& key) const {
    return j_.contains(key) && !j_.at(key).is_null();
  }
  const json& at(const std::string& key) const { return j_.at(key); }
  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  double number(const std::string& key, double def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(field(key), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field(key), "must be finite");
    return d;
  }

  std::uint64_t count(const std::string& key, std::uint64_t def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw ConfigError(field(key), "must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::int64_t integer(const std::string& key, std::int64_t def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(field(key), "must be an integer");
    return v.get<std::int64_t>();
  }

  bool flag(const std::string& key, bool def) const {
    if (!has(key)) return def;
    if (!j_.at(key).is_boolean()) throw ConfigError(field(key), "must be true or false");
    return j_.at(key).get<bool>();
  }

  std::string text(const std::string& key, const std::string& def) const {
    if (!has(key)) return def;
    if (!j_.at(key).is_string()) throw ConfigError(field(key), "must be a string");
    return j_.at(key).get<std::string>();
  }

  std::vector<double> numbers(const std::string& key,
                              const std::vector<double>& def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(field(key), "must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
        throw ConfigError(field(key) + "[" + std::to_string(i) + "]",
                          "must be a finite number");
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<std::string> texts(const std::string& key,
                                 const std::vector<std::string>& def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(field(key), "must be an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) {
        throw ConfigError(field(key) + "[" + std::to_string(i) + "]", "must be a string");
      }
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const json& j_;
  std::string path_;
};

DistributionSpec parse_distribution(const json& j, const std::string& path) {
  Section s(j, path, {"kind", "lo", "hi", "mean", "std", "weights", "dimension"});
  const std::string kind = s.text("kind", "");
  const auto dim = static_cast<std::size_t>(s.count("dimension", 1));
  DistributionSpec spec;
  if (kind == "uniform") {
    spec = DistributionSpec::uniform(s.number("lo", 0.0), s.number("hi", 1.0), dim);
  } else if (kind == "gaussian") {
    spec = DistributionSpec::gaussian(s.number("mean", 0.0), s.number("std", 1.0), dim);
  } else if (kind == "categorical") {
    if (!s.has("weights")) throw ConfigError(s.field("weights"), "is required");
    spec = DistributionSpec::categorical(s.numbers("weights", {}), dim);
  } else {
    throw ConfigError(s.field("kind"),
                      "must be one of uniform, gaussian, categorical");
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    // "uniform.hi" -> "<path>.hi"
    const std::string& f = e.field();
    const auto dot = f.find('.');
    const std::string leaf = dot == std::string::npos ? f : f.substr(dot + 1);
    throw ConfigError(path + "." + leaf, e.what());
  }
  return spec;
}

NoiseSpec parse_noise(const json& j, const std::string& path) {
  if (j.is_object()) return NoiseSpec(parse_distribution(j, path));
  if (!j.is_array() || j.empty()) {
    throw ConfigError(path, "must be a distribution or a non-empty list of them");
  }
  std::vector<DistributionSpec> blocks;
  for (std::size_t i = 0; i < j.size(); ++i) {
    blocks.push_back(parse_distribution(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return NoiseSpec(std::move(blocks));
}

InputDomain parse_box(const json& j, const std::string& path) {
  Section s(j, path, {"lo", "hi"});
  if (!s.has("lo") || !s.has("hi")) throw ConfigError(path, "needs lo and hi");
  const Point lo = s.numbers("lo", {});
  const Point hi = s.numbers("hi", {});
  InputDomain d = InputDomain::box(lo, hi);
  try {
    d.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(path + "." + e.field().substr(e.field().find('.') + 1), e.what());
  }
  return d;
}

TiePolicy parse_ties(const std::string& s, const std::string& field) {
  if (s == "error") return TiePolicy::kError;
  if (s == "break_by_index") return TiePolicy::kBreakByIndex;
  throw ConfigError(field, "must be error or break_by_index");
}

void parse_market(const json& j, MarketModel& m) {
  Section s(j, "market",
            {"n_agents", "feature_dim", "focal_man", "feature_dist", "preference",
             "weight_dist", "bump_amplitude", "center_dist", "scale_dist", "step_jump",
             "identical_women", "ties", "domain"});
  m.n_agents = s.count("n_agents", m.n_agents);
  m.feature_dim = s.count("feature_dim", m.feature_dim);
  m.focal_man = s.count("focal_man", m.focal_man);
  if (s.has("feature_dist")) {
    m.feature_dist = parse_distribution(s.at("feature_dist"), "market.feature_dist");
  }
  m.preference = s.has("preference")
                     ? preference_kind_from_string(s.text("preference", "linear"))
                     : m.preference;
  if (s.has("weight_dist")) {
    m.weight_dist = parse_distribution(s.at("weight_dist"), "market.weight_dist");
  }
  m.bump_amplitude = s.number("bump_amplitude", m.bump_amplitude);
  if (s.has("center_dist")) {
    m.center_dist = parse_distribution(s.at("center_dist"), "market.center_dist");
  }
  if (s.has("scale_dist")) {
    m.scale_dist = parse_distribution(s.at("scale_dist"), "market.scale_dist");
  }
  m.step_jump = s.number("step_jump", m.step_jump);
  m.identical_women = s.flag("identical_women", m.identical_women);
  m.ties = parse_ties(s.text("ties", "error"), s.field("ties"));
  if (s.has("domain")) {
    const InputDomain d = parse_box(s.at("domain"), "market.domain");
    m.domain_lo = d.lo();
    m.domain_hi = d.hi();
  } else {
    m.domain_lo.assign(m.feature_dim, -1.0);
    m.domain_hi.assign(m.feature_dim, 1.0);
  }
  m.validate();
}

std::size_t input_dimension(const ScenarioConfig& cfg) {
  if (cfg.scenario == "matching") return cfg.market.feature_dim;
  if (cfg.scenario == "custom") return cfg.custom.domain.dimension();
  return 1;
}

void parse_regularity(const json* j, ScenarioConfig& cfg) {
  RegularityConfig& r = cfg.regularity;
  r.x0.assign(input_dimension(cfg), 0.0);
  if (cfg.scenario == "custom") {
    for (std::size_t i = 0; i < r.x0.size(); ++i) {
      r.x0[i] = 0.5 * (cfg.custom.domain.lo()[i] + cfg.custom.domain.hi()[i]);
    }
  }
  r.n = cfg.samples.per_estimate;
  if (j == nullptr) {
    r.validate(input_dimension(cfg));
    return;
  }
  Section s(*j, "regularity",
            {"x0", "radii", "tau_grid", "n", "density_bins", "density_bound",
             "mismatch_threshold", "sigma", "growth_factor", "atom_mass",
             "random_directions", "assume_exact_equality"});
  r.x0 = s.numbers("x0", r.x0);
  r.radii = s.numbers("radii", r.radii);
  r.tau_grid = s.numbers("tau_grid", r.tau_grid);
  r.n = s.count("n", r.n);
  r.density_bins = s.count("density_bins", r.density_bins);
  if (s.has("density_bound")) r.density_bound = s.number("density_bound", 0.0);
  r.mismatch_threshold = s.number("mismatch_threshold", r.mismatch_threshold);
  r.sigma = s.number("sigma", r.sigma);
  r.growth_factor = s.number("growth_factor", r.growth_factor);
  r.atom_mass = s.number("atom_mass", r.atom_mass);
  r.random_directions = static_cast<int>(s.integer("random_directions", -1));
  r.assume_exact_equality = s.flag("assume_exact_equality", false);
  r.validate(input_dimension(cfg));
}

void parse_whiten(const json& j, WhitenSpec& w) {
  Section s(j, "whiten",
            {"source", "model", "pairs", "holdout", "csv", "chain_in", "corrupt",
             "x_bins", "r_bins", "ks_threshold", "corr_threshold"});
  w.source = s.text("source", w.source);
  if (w.source != "generated" && w.source != "csv") {
    throw ConfigError(s.field("source"), "must be generated or csv");
  }
  w.model = s.text("model", w.model);
  noise_model_by_name(w.model);
  w.pairs = s.count("pairs", w.pairs);
  w.holdout = s.count("holdout", w.holdout);
  if (w.source == "csv") {
    if (!s.has("csv")) throw ConfigError(s.field("csv"), "required when source is csv");
    Section c(s.at("csv"), "whiten.csv", {"path", "x_columns", "r_columns"});
    w.csv_path = c.text("path", "");
    if (w.csv_path.empty()) throw ConfigError(c.field("path"), "is required");
    w.x_columns = c.texts("x_columns", w.x_columns);
    w.r_columns = c.texts("r_columns", w.r_columns);
    if (w.x_columns.empty()) throw ConfigError(c.field("x_columns"), "must not be empty");
    if (w.r_columns.empty()) throw ConfigError(c.field("r_columns"), "must not be empty");
  } else if (s.has("csv")) {
    throw ConfigError(s.field("csv"), "only allowed when source is csv");
  }
  w.chain_in = s.text("chain_in", "");
  w.corrupt = s.flag("corrupt", false);
  w.chain.x_bins = s.count("x_bins", w.chain.x_bins);
  w.chain.r_bins = s.count("r_bins", w.chain.r_bins);
  w.thresholds.ks = s.number("ks_threshold", w.thresholds.ks);
  w.thresholds.correlation = s.number("corr_threshold", w.thresholds.correlation);
  if (w.pairs < 1) throw ConfigError(s.field("pairs"), "must be positive");
  if (w.holdout < 1) throw ConfigError(s.field("holdout"), "must be positive");
  if (w.chain.x_bins < 1) throw ConfigError(s.field("x_bins"), "must be positive");
  if (w.chain.r_bins < 1) throw ConfigError(s.field("r_bins"), "must be positive");
}

}  // namespace

nlohmann::json read_config_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  try {
    return nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/true,
                                 /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path, std::string("not valid JSON: ") + e.what());
  }
}

ScenarioConfig parse_config(const nlohmann::json& document) {
  ScenarioConfig cfg;
  cfg.document = document;
  Section root(document, "",
               {"scenario", "seed", "output_dir", "quick", "samples", "x_dist", "custom",
                "market", "task", "grid", "jumps", "regularity", "probe",
                "matching_probe", "whiten", "description"});
  cfg.scenario = root.text("scenario", "");
  static const std::set<std::string> kScenarios{"frac_l1", "frac_l2", "matching",
                                                "custom"};
  if (cfg.scenario.empty() && !root.has("whiten")) {
    throw ConfigError("scenario", "is required unless the config only has a whiten section");
  }
  if (!cfg.scenario.empty() && !kScenarios.count(cfg.scenario)) {
    throw ConfigError("scenario", "must be one of frac_l1, frac_l2, matching, custom");
  }
  cfg.seed = root.count("seed", cfg.seed);
  cfg.output_dir = root.text("output_dir", cfg.output_dir);
  cfg.quick = root.flag("quick", false);
  root.text("description", "");

  if (root.has("samples")) {
    Section s(root.at("samples"), "samples", {"per_estimate", "quick"});
    cfg.samples.per_estimate = s.count("per_estimate", cfg.samples.per_estimate);
    cfg.samples.quick = s.count("quick", cfg.samples.quick);
    if (cfg.samples.per_estimate < 1) {
      throw ConfigError("samples.per_estimate", "must be positive");
    }
    if (cfg.samples.quick < 1) throw ConfigError("samples.quick", "must be positive");
  }

  if (cfg.scenario.empty()) {
    for (const char* key : {"x_dist", "custom", "market", "task", "grid", "jumps",
                            "regularity", "probe", "matching_probe"}) {
      if (root.has(key)) throw ConfigError(key, "needs a scenario");
    }
    parse_whiten(root.at("whiten"), cfg.whiten);
    return cfg;
  }

  const bool frac = cfg.scenario == "frac_l1" || cfg.scenario == "frac_l2";
  if (root.has("x_dist")) {
    if (!frac) throw ConfigError("x_dist", "only used by frac_l1 and frac_l2");
    Section s(root.at("x_dist"), "x_dist", {"lo", "hi"});
    cfg.x_lo = s.number("lo", cfg.x_lo);
    cfg.x_hi = s.number("hi", cfg.x_hi);
    if (!(cfg.x_lo < cfg.x_hi)) throw ConfigError("x_dist.hi", "requires lo < hi");
  }

  if (cfg.scenario == "custom") {
    if (!root.has("custom")) throw ConfigError("custom", "required for scenario custom");
    Section s(root.at("custom"), "custom",
              {"domain", "noise", "t_map", "exact_equality", "x_dist"});
    if (!s.has("domain")) throw ConfigError("custom.domain", "is required");
    if (!s.has("noise")) throw ConfigError("custom.noise", "is required");
    cfg.custom.domain = parse_box(s.at("domain"), "custom.domain");
    cfg.custom.noise = parse_noise(s.at("noise"), "custom.noise");
    cfg.custom.t_map = s.text("t_map", cfg.custom.t_map);
    try {
      named_t_map_dimension(cfg.custom.t_map, cfg.custom.domain.dimension(),
                            cfg.custom.noise.dimension());
    } catch (const ConfigError& e) {
      throw ConfigError("custom.t_map", e.what());
    }
    if (s.has("exact_equality")) cfg.custom.exact_equality = s.flag("exact_equality", false);
    if (s.has("x_dist")) {
      cfg.custom.x_dist = parse_noise(s.at("x_dist"), "custom.x_dist");
    } else {
      std::vector<DistributionSpec> blocks;
      for (std::size_t j = 0; j < cfg.custom.domain.dimension(); ++j) {
        blocks.push_back(DistributionSpec::uniform(cfg.custom.domain.lo()[j],
                                                   cfg.custom.domain.hi()[j]));
      }
      cfg.custom.x_dist = NoiseSpec(std::move(blocks));
    }
    if (cfg.custom.x_dist.dimension() != cfg.custom.domain.dimension()) {
      throw ConfigError("custom.x_dist", "dimension must equal the domain dimension");
    }
  } else if (root.has("custom")) {
    throw ConfigError("custom", "only used by scenario custom");
  }

  if (cfg.scenario == "matching") {
    if (root.has("market")) {
      parse_market(root.at("market"), cfg.market);
    } else {
      cfg.market.validate();
    }
  } else if (root.has("market")) {
    throw ConfigError("market", "only used by scenario matching");
  }

  // Task.
  if (cfg.scenario == "matching") {
    cfg.task = TaskSpec{"step", {0.0}, {0.0, 1.0}};
  }
  if (root.has("task")) {
    Section s(root.at("task"), "task", {"name", "breaks", "levels"});
    cfg.task.name = s.text("name", cfg.task.name);
    cfg.task.breaks = s.numbers("breaks", cfg.task.name == "step" ? cfg.task.breaks
                                                                   : std::vector<double>{});
    cfg.task.levels = s.numbers("levels", cfg.task.name == "step" ? cfg.task.levels
                                                                   : std::vector<double>{});
  }
  if (cfg.task.name == "step") {
    if (cfg.task.levels.size() != cfg.task.breaks.size() + 1) {
      throw ConfigError("task.levels", "needs exactly one more entry than task.breaks");
    }
    if (!std::is_sorted(cfg.task.breaks.begin(), cfg.task.breaks.end())) {
      throw ConfigError("task.breaks", "must be sorted");
    }
  } else {
    if (!cfg.task.breaks.empty() || !cfg.task.levels.empty()) {
      throw ConfigError("task.breaks", "only used by the step task");
    }
    try {
      named_task(cfg.task.name);
    } catch (const ConfigError& e) {
      throw ConfigError("task.name", e.what());
    }
  }

  // Grid.
  const std::size_t dim = input_dimension(cfg);
  if (cfg.scenario == "matching") {
    cfg.grid.from.assign(dim, 0.0);
    cfg.grid.to.assign(dim, 0.0);
    cfg.grid.from[0] = cfg.market.domain_lo[0];
    cfg.grid.to[0] = cfg.market.domain_hi[0];
    cfg.grid.points = 41;
  } else if (cfg.scenario == "custom") {
    cfg.grid.from = cfg.custom.domain.lo();
    cfg.grid.to = cfg.custom.domain.hi();
  } else {
    cfg.grid.from = {cfg.x_lo};
    cfg.grid.to = {cfg.x_hi};
  }
  if (root.has("grid")) {
    Section s(root.at("grid"), "grid", {"lo", "hi", "from", "to", "points"});
    if (s.has("lo") || s.has("hi")) {
      if (dim != 1) throw ConfigError("grid.lo", "lo/hi need a one-dimensional K; use from/to");
      if (s.has("from") || s.has("to")) {
        throw ConfigError("grid.from", "give either lo/hi or from/to");
      }
      cfg.grid.from = {s.number("lo", cfg.grid.from[0])};
      cfg.grid.to = {s.number("hi", cfg.grid.to[0])};
    }
    cfg.grid.from = s.numbers("from", cfg.grid.from);
    cfg.grid.to = s.numbers("to", cfg.grid.to);
    cfg.grid.points = s.count("points", cfg.grid.points);
  }
  if (cfg.grid.from.size() != dim || cfg.grid.to.size() != dim) {
    throw ConfigError("grid.from", "dimension must equal the input dimension");
  }
  if (cfg.grid.points < 1) throw ConfigError("grid.points", "must be positive");
  const InputDomain domain = build_factorization(cfg).input_domain;
  if (!domain.contains(cfg.grid.from) || !domain.contains(cfg.grid.to)) {
    throw ConfigError("grid", "end points must lie inside K");
  }
  if (dim == 1 && !(cfg.grid.from[0] <= cfg.grid.to[0])) {
    throw ConfigError("grid.hi", "must not be below grid.lo");
  }

  if (root.has("jumps")) {
    Section s(root.at("jumps"), "jumps", {"threshold", "z"});
    cfg.jumps.threshold = s.number("threshold", cfg.jumps.threshold);
    cfg.jumps.z = s.number("z", cfg.jumps.z);
    if (!(cfg.jumps.threshold >= 0.0)) {
      throw ConfigError("jumps.threshold", "must be non-negative");
    }
    if (!(cfg.jumps.z >= 0.0)) throw ConfigError("jumps.z", "must be non-negative");
  }

  parse_regularity(root.has("regularity") ? &root.at("regularity") : nullptr, cfg);

  if (root.has("probe")) {
    Section s(root.at("probe"), "probe", {"bins_per_dimension", "random_directions"});
    cfg.probe.bins_per_dimension = s.count("bins_per_dimension", 0);
    cfg.probe.random_directions = static_cast<int>(s.integer("random_directions", -1));
  }

  cfg.matching_probe.x0.assign(dim, 0.0);
  if (root.has("matching_probe")) {
    if (cfg.scenario != "matching") {
      throw ConfigError("matching_probe", "only used by scenario matching");
    }
    Section s(root.at("matching_probe"), "matching_probe",
              {"x0", "radii", "trials", "threshold", "sigma"});
    auto& p = cfg.matching_probe;
    p.x0 = s.numbers("x0", p.x0);
    p.radii = s.numbers("radii", p.radii);
    p.trials = s.count("trials", p.trials);
    p.threshold = s.number("threshold", p.threshold);
    p.sigma = s.number("sigma", p.sigma);
    if (p.x0.size() != dim) throw ConfigError("matching_probe.x0", "wrong dimension");
    if (p.trials < 1) throw ConfigError("matching_probe.trials", "must be positive");
    for (std::size_t k = 0; k < p.radii.size(); ++k) {
      if (!(p.radii[k] >= 0.0) || (k > 0 && !(p.radii[k] < p.radii[k - 1]))) {
        throw ConfigError("matching_probe.radii[" + std::to_string(k) + "]",
                          "radii must be non-negative and strictly decreasing");
      }
    }
    if (p.radii.empty()) throw ConfigError("matching_probe.radii", "must not be empty");
  }

  if (root.has("whiten")) parse_whiten(root.at("whiten"), cfg.whiten);
  return cfg;
}

void apply_overrides(ScenarioConfig& cfg, std::optional<std::uint64_t> seed,
                     std::optional<std::string> out, bool quick) {
  if (seed) {
    cfg.seed = *seed;
    cfg.document["seed"] = *seed;
  }
  if (out) {
    cfg.output_dir = *out;
    cfg.document["output_dir"] = *out;
  }
  if (quick) {
    cfg.quick = true;
    cfg.document["quick"] = true;
  }
  if (cfg.quick) {
    cfg.regularity.n = std::min(cfg.regularity.n, cfg.samples.quick);
    cfg.whiten.pairs = std::min(cfg.whiten.pairs, cfg.samples.quick);
    cfg.whiten.holdout = std::min(cfg.whiten.holdout, cfg.samples.quick);
  }
}

Factorization build_factorization(const ScenarioConfig& cfg) {
  if (cfg.scenario == "frac_l1") return frac_scenarios(cfg.x_lo, cfg.x_hi).l1;
  if (cfg.scenario == "frac_l2") return frac_scenarios(cfg.x_lo, cfg.x_hi).l2;
  if (cfg.scenario == "matching") return matching_factorization(cfg.market);
  Factorization f;
  f.name = "custom_" + cfg.custom.t_map;
  f.input_domain = cfg.custom.domain;
  f.noise = cfg.custom.noise;
  f.t_map = named_t_map(cfg.custom.t_map);
  const std::size_t d = named_t_map_dimension(
      cfg.custom.t_map, cfg.custom.domain.dimension(), cfg.custom.noise.dimension());
  if (named_t_map_is_discrete(cfg.custom.t_map)) {
    f.latent = LatentSpace::discrete({-1.0, 0.0, 1.0});
  } else {
    f.latent = LatentSpace::continuous(d, cfg.custom.exact_equality.value_or(false));
  }
  return f;
}

NoiseSpec build_x_distribution(const ScenarioConfig& cfg) {
  if (cfg.scenario == "matching") {
    std::vector<DistributionSpec> blocks;
    for (std::size_t j = 0; j < cfg.market.feature_dim; ++j) {
      blocks.push_back(
          DistributionSpec::uniform(cfg.market.domain_lo[j], cfg.market.domain_hi[j]));
    }
    return NoiseSpec(std::move(blocks));
  }
  if (cfg.scenario == "custom") return cfg.custom.x_dist;
  return DistributionSpec::uniform(cfg.x_lo, cfg.x_hi);
}

DerivedTask build_task(const ScenarioConfig& cfg) {
  if (cfg.task.name != "step") return named_task(cfg.task.name);
  auto breaks = std::make_shared<std::vector<double>>(cfg.task.breaks);
  auto levels = std::make_shared<std::vector<double>>(cfg.task.levels);
  DerivedTask t;
  t.name = "step";
  t.bound = 0.0;
  for (double v : *levels) t.bound = std::max(t.bound, std::abs(v));
  if (t.bound == 0.0) t.bound = 1.0;
  t.f = [breaks, levels](std::span<const double> theta) {
    const auto k = std::upper_bound(breaks->begin(), breaks->end(), theta[0]) -
                   breaks->begin();
    return (*levels)[static_cast<std::size_t>(k)];
  };
  return t;
}

CurveGrid build_grid(const ScenarioConfig& cfg) {
  if (cfg.grid.from.size() == 1) {
    return CurveGrid::linspace(cfg.grid.from[0], cfg.grid.to[0], cfg.grid.points);
  }
  return CurveGrid::segment(cfg.grid.from, cfg.grid.to, cfg.grid.points);
}

}  // namespace regulab
