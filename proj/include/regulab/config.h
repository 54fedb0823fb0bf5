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

// Scenario configuration files.
//
// A config is one JSON document (comments allowed). Every object is checked
// against a fixed key set before anything runs, and errors carry the field
// path, e.g. "regularity.radii[2]". configs/README.md documents the schema.

#ifndef REGULAB_CONFIG_H_
#define REGULAB_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "regulab/dgp.h"
#include "regulab/matching.h"
#include "regulab/metrics.h"
#include "regulab/regularity.h"
#include "regulab/sampling.h"
#include "regulab/whitening.h"

namespace regulab {

struct CustomSpec {
  InputDomain domain;
  NoiseSpec noise;
  std::string t_map = "sum";
  std::optional<bool> exact_equality;
  NoiseSpec x_dist;
};

struct TaskSpec {
  std::string name = "frac";
  std::vector<double> breaks;
  std::vector<double> levels;
};

struct GridSpec {
  Point from{-2.0};
  Point to{2.0};
  std::size_t points = 101;
};

struct MatchingProbeSpec {
  Point x0;
  std::vector<double> radii{0.5, 0.1, 0.02, 0.004};
  std::size_t trials = 1000;
  double threshold = 0.05;
  double sigma = 2.0;
};

struct WhitenSpec {
  std::string source = "generated";
  std::string model = "shift";
  std::size_t pairs = 100000;
  std::size_t holdout = 100000;
  std::string csv_path;
  std::vector<std::string> x_columns{"x"};
  std::vector<std::string> r_columns{"r"};
  std::string chain_in;
  bool corrupt = false;
  ChainConfig chain;
  WhitenessThresholds thresholds;
};

struct ScenarioConfig {
  std::string scenario;
  std::uint64_t seed = 42;
  std::string output_dir = "out";
  SampleBudget samples;
  bool quick = false;
  double x_lo = -2.0;
  double x_hi = 2.0;
  CustomSpec custom;
  MarketModel market;
  TaskSpec task;
  GridSpec grid;
  JumpOptions jumps;
  RegularityConfig regularity;
  ProbeOptions probe;
  MatchingProbeSpec matching_probe;
  WhitenSpec whiten;
  // The document as read, after command-line overrides.
  nlohmann::json document;

  std::size_t samples_per_estimate() const {
    return quick ? samples.quick : samples.per_estimate;
  }
};

// Throws ConfigError with the offending field path.
ScenarioConfig parse_config(const nlohmann::json& document);
// Reads a file; parse failures become ConfigError("<file>").
nlohmann::json read_config_document(const std::string& path);

// Applies --seed, --out and --quick, keeping `document` in sync.
void apply_overrides(ScenarioConfig& cfg, std::optional<std::uint64_t> seed,
                     std::optional<std::string> out, bool quick);

Factorization build_factorization(const ScenarioConfig& cfg);
// Law of X used for joint sampling.
NoiseSpec build_x_distribution(const ScenarioConfig& cfg);
DerivedTask build_task(const ScenarioConfig& cfg);
CurveGrid build_grid(const ScenarioConfig& cfg);

}  // namespace regulab

#endif  // REGULAB_CONFIG_H_
