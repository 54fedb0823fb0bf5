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

// Empirical checks of discrete and continuous regularity, and the
// continuity certificate that combines them with a TV probe and a curve scan.
//
// Both probes use common random numbers: one noise sample r_1..r_n is drawn
// and T(x, r_i) is compared against T(x0, r_i) for every probe point x.

#ifndef REGULAB_REGULARITY_H_
#define REGULAB_REGULARITY_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "regulab/dgp.h"
#include "regulab/metrics.h"
#include "regulab/sampling.h"

namespace regulab {

struct RegularityConfig {
  Point x0;
  std::vector<double> radii{0.5, 0.1, 0.02};
  std::vector<double> tau_grid{0.05, 0.1, 0.25};
  std::size_t n = 100000;
  // Histogram bins per latent dimension for the density check; 0 selects
  // default_bins_per_dimension(). Refined to 2x and 4x.
  std::size_t density_bins = 0;
  std::optional<double> density_bound;
  double mismatch_threshold = 0.05;
  double sigma = 3.0;
  double growth_factor = 1.5;
  // Mass of a single repeated value above which the law has an atom.
  double atom_mass = 0.01;
  int random_directions = -1;
  // Compare continuous latents by exact equality (discrete probe).
  bool assume_exact_equality = false;

  // Radii strictly decreasing and positive, tau positive, and the smallest
  // tau above the smallest radius.
  void validate(std::size_t input_dimension) const;
};

enum class Verdict { kConsistent, kViolated, kInconclusive };
std::string to_string(Verdict v);

struct MismatchRow {
  double radius = 0.0;
  double fraction = 0.0;
  double std_error = 0.0;
  Point worst_x;
  std::size_t probes = 0;
};

struct ExceedanceRow {
  double radius = 0.0;
  double tau = 0.0;
  double fraction = 0.0;
  double std_error = 0.0;
};

struct DensityRow {
  Point x;
  double radius = 0.0;
  // Histogram sup of mass / volume at bins b, 2b, 4b.
  std::vector<std::size_t> bins;
  std::vector<double> sup_density;
  bool atom = false;
};

struct RegularityReport {
  enum class Kind { kDiscrete, kContinuous };

  Kind kind = Kind::kDiscrete;
  std::vector<MismatchRow> mismatch;
  std::vector<ExceedanceRow> exceedance;
  std::vector<DensityRow> density;
  double density_estimate = 0.0;
  bool density_bounded = true;
  Verdict verdict = Verdict::kInconclusive;
  std::vector<std::string> reasons;
  // Trials dropped because T signalled a degenerate draw.
  std::size_t skipped = 0;
};

std::string to_string(RegularityReport::Kind k);

RegularityReport discrete_regularity_probe(const Factorization& fact,
                                           const RegularityConfig& cfg,
                                           const SeedSpec& seed);

RegularityReport continuous_regularity_probe(const Factorization& fact,
                                             const RegularityConfig& cfg,
                                             const SeedSpec& seed);

// Discrete when the latent is discrete or compared by exact equality.
RegularityReport regularity_probe(const Factorization& fact,
                                  const RegularityConfig& cfg, const SeedSpec& seed);

struct CertificateOptions {
  std::size_t curve_samples = 100000;
  JumpOptions jumps;
  ProbeOptions tv;
  // Final binned TV below this counts as converged.
  double tv_limit = 0.1;
};

struct Certificate {
  std::string scenario;
  std::string task;
  RegularityReport regularity;
  TvProbeTable tv;
  bool tv_converged = false;
  std::vector<CurvePoint> curve;
  CurveReport curve_report;
  // f took a single value on every sample of every grid point.
  bool f_constant = false;
  bool passed = false;
  std::vector<std::string> reasons;
};

// Regularity on split(seed, 0), TV probe on split(seed, 1), curve on
// split(seed, 2). Passes when no jump is flagged and either the regularity
// verdict is consistent or f was constant.
Certificate continuity_certificate(const Factorization& fact,
                                   const DerivedTask& task,
                                   const RegularityConfig& cfg,
                                   const CurveGrid& grid, const SeedSpec& seed,
                                   const CertificateOptions& options = {});

}  // namespace regulab

#endif  // REGULAB_REGULARITY_H_
