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

#include "regulab/regularity.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "regulab/errors.h"
#include "regulab/parallel.h"

namespace regulab {
namespace {

struct ProbeSet {
  double radius = 0.0;
  std::vector<Point> points;
};

std::vector<ProbeSet> probe_points(const Factorization& fact,
                                   const RegularityConfig& cfg,
                                   const SeedSpec& seed) {
  const std::size_t dim = cfg.x0.size();
  const std::size_t random_count =
      cfg.random_directions >= 0 ? static_cast<std::size_t>(cfg.random_directions)
                                 : (dim == 1 ? 0 : 2 * dim);
  std::vector<ProbeSet> out;
  for (std::size_t k = 0; k < cfg.radii.size(); ++k) {
    RandomStream stream(split(seed, {1, k}));
    ProbeSet set;
    set.radius = cfg.radii[k];
    for (const Point& dir : probe_directions(dim, random_count, stream)) {
      Point x(dim);
      for (std::size_t j = 0; j < dim; ++j) x[j] = cfg.x0[j] + set.radius * dir[j];
      if (fact.input_domain.contains(x)) set.points.push_back(std::move(x));
    }
    if (set.points.empty()) {
      throw ConfigError("radii[" + std::to_string(k) + "]",
                        "no probe point at this radius lies inside K");
    }
    out.push_back(std::move(set));
  }
  return out;
}

// T(x0, r_i) for the shared noise; a degenerate draw marks the trial invalid.
struct Baseline {
  SampleSet r;
  std::vector<Point> theta;
  std::vector<bool> valid;
  std::size_t skipped = 0;
};

Baseline baseline(const Factorization& fact, const RegularityConfig& cfg,
                  const SeedSpec& seed) {
  Baseline b;
  b.r = draw(fact.noise, split(seed, 0), cfg.n);
  b.theta.resize(cfg.n);
  b.valid.assign(cfg.n, true);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    try {
      b.theta[i] = fact.evaluate(cfg.x0, b.r.row(i));
    } catch (const DegenerateDrawError&) {
      b.valid[i] = false;
      ++b.skipped;
    }
  }
  return b;
}

double binomial_se(double p, std::size_t n) {
  return n == 0 ? 0.0 : std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

bool has_atom(const SampleSet& s, double mass) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    auto ra = s.row(a);
    auto rb = s.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t best = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && !less(order[i], order[j])) ++j;
    best = std::max(best, j - i);
    i = j;
  }
  return static_cast<double>(best) / static_cast<double>(s.size()) >= mass;
}

DensityRow density_row(const SampleSet& s, const Point& x, double radius,
                       std::size_t bins, double atom_mass) {
  DensityRow row;
  row.x = x;
  row.radius = radius;
  row.atom = has_atom(s, atom_mass);
  const SampleSet* pooled[] = {&s};
  for (std::size_t b = bins; b <= 4 * bins; b *= 2) {
    const BinGrid grid = BinGrid::fit(pooled, b);
    const BinnedLaw law = bin(s, grid);
    const double top = *std::max_element(law.probabilities.begin(),
                                         law.probabilities.end());
    row.bins.push_back(b);
    row.sup_density.push_back(top / grid.bin_volume());
  }
  return row;
}

bool non_increasing_within_noise(const std::vector<double>& values,
                                 const std::vector<double>& errors, double sigma) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[k - 1] + sigma * std::hypot(errors[k], errors[k - 1])) {
      return false;
    }
  }
  return true;
}

std::string fmt(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

void RegularityConfig::validate(std::size_t input_dimension) const {
  if (x0.size() != input_dimension) {
    throw ConfigError("regularity.x0", "dimension does not match K");
  }
  if (radii.empty()) throw ConfigError("regularity.radii", "must not be empty");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || (k > 0 && !(radii[k] < radii[k - 1]))) {
      throw ConfigError("regularity.radii[" + std::to_string(k) + "]",
                        "radii must be positive and strictly decreasing");
    }
  }
  for (std::size_t k = 0; k < tau_grid.size(); ++k) {
    if (!(tau_grid[k] > 0.0)) {
      throw ConfigError("regularity.tau_grid[" + std::to_string(k) + "]",
                        "must be positive");
    }
  }
  if (!tau_grid.empty() &&
      !(*std::min_element(tau_grid.begin(), tau_grid.end()) > radii.back())) {
    throw ConfigError("regularity.tau_grid",
                      "smallest tau must exceed the smallest radius");
  }
  if (n < 1) throw ConfigError("regularity.n", "must be at least 1");
  if (density_bound && !(*density_bound > 0.0)) {
    throw ConfigError("regularity.density_bound", "must be positive");
  }
  if (!(mismatch_threshold > 0.0 && mismatch_threshold < 1.0)) {
    throw ConfigError("regularity.mismatch_threshold", "must lie in (0, 1)");
  }
  if (!(sigma > 0.0)) throw ConfigError("regularity.sigma", "must be positive");
  if (!(growth_factor > 1.0)) {
    throw ConfigError("regularity.growth_factor", "must exceed 1");
  }
  if (!(atom_mass > 0.0 && atom_mass <= 1.0)) {
    throw ConfigError("regularity.atom_mass", "must lie in (0, 1]");
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kConsistent:
      return "consistent";
    case Verdict::kViolated:
      return "violated";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(RegularityReport::Kind k) {
  return k == RegularityReport::Kind::kDiscrete ? "discrete" : "continuous";
}

RegularityReport discrete_regularity_probe(const Factorization& fact,
                                           const RegularityConfig& cfg,
                                           const SeedSpec& seed) {
  cfg.validate(fact.input_domain.dimension());
  if (!fact.latent.is_discrete() && !fact.latent.exact_equality() &&
      !cfg.assume_exact_equality) {
    throw ConfigError("regularity.assume_exact_equality",
                      "continuous latent needs exact-equality semantics for the "
                      "discrete probe");
  }
  RegularityReport report;
  report.kind = RegularityReport::Kind::kDiscrete;
  const Baseline base = baseline(fact, cfg, seed);
  report.skipped = base.skipped;

  for (const ProbeSet& set : probe_points(fact, cfg, seed)) {
    struct Result {
      std::size_t mismatches = 0;
      std::size_t trials = 0;
      std::size_t skipped = 0;
    };
    std::vector<Result> results(set.points.size());
    parallel_for(set.points.size(), [&](std::size_t p) {
      Result& res = results[p];
      for (std::size_t i = 0; i < cfg.n; ++i) {
        if (!base.valid[i]) continue;
        try {
          if (fact.evaluate(set.points[p], base.r.row(i)) != base.theta[i]) {
            ++res.mismatches;
          }
          ++res.trials;
        } catch (const DegenerateDrawError&) {
          ++res.skipped;
        }
      }
    });
    MismatchRow row;
    row.radius = set.radius;
    row.probes = set.points.size();
    row.fraction = -1.0;
    for (std::size_t p = 0; p < results.size(); ++p) {
      report.skipped += results[p].skipped;
      const double f = results[p].trials == 0
                           ? 0.0
                           : static_cast<double>(results[p].mismatches) /
                                 static_cast<double>(results[p].trials);
      if (f > row.fraction) {
        row.fraction = f;
        row.std_error = binomial_se(f, results[p].trials);
        row.worst_x = set.points[p];
      }
    }
    report.mismatch.push_back(std::move(row));
  }

  const MismatchRow& last = report.mismatch.back();
  std::vector<double> values;
  std::vector<double> errors;
  for (const auto& row : report.mismatch) {
    values.push_back(row.fraction);
    errors.push_back(row.std_error);
  }
  if (last.fraction > cfg.mismatch_threshold + cfg.sigma * last.std_error) {
    report.verdict = Verdict::kViolated;
    report.reasons.push_back("mismatch " + fmt(last.fraction) + " at radius " +
                             fmt(last.radius) + " exceeds threshold " +
                             fmt(cfg.mismatch_threshold) + " by more than " +
                             fmt(cfg.sigma) + " standard errors");
  } else if (last.fraction < cfg.mismatch_threshold &&
             non_increasing_within_noise(values, errors, cfg.sigma)) {
    report.verdict = Verdict::kConsistent;
    report.reasons.push_back("mismatch column non-increasing, final entry " +
                             fmt(last.fraction) + " below " +
                             fmt(cfg.mismatch_threshold));
  } else {
    report.verdict = Verdict::kInconclusive;
    report.reasons.push_back("mismatch column neither clearly vanishing nor "
                             "clearly above threshold");
  }
  return report;
}

RegularityReport continuous_regularity_probe(const Factorization& fact,
                                             const RegularityConfig& cfg,
                                             const SeedSpec& seed) {
  cfg.validate(fact.input_domain.dimension());
  if (fact.latent.is_discrete()) {
    throw ConfigError("latent", "continuous probe needs a continuous latent space");
  }
  if (cfg.tau_grid.empty()) {
    throw ConfigError("regularity.tau_grid", "must not be empty");
  }
  RegularityReport report;
  report.kind = RegularityReport::Kind::kContinuous;
  const std::size_t bins = cfg.density_bins > 0
                               ? cfg.density_bins
                               : default_bins_per_dimension(fact.latent.dimension());
  const Baseline base = baseline(fact, cfg, seed);
  report.skipped = base.skipped;
  const std::size_t taus = cfg.tau_grid.size();

  {
    SampleSet samples(0, fact.latent.dimension());
    for (std::size_t i = 0; i < cfg.n; ++i) {
      if (base.valid[i]) samples.push_back(base.theta[i]);
    }
    report.density.push_back(density_row(samples, cfg.x0, 0.0, bins, cfg.atom_mass));
  }

  std::vector<double> radius_density;
  for (const ProbeSet& set : probe_points(fact, cfg, seed)) {
    struct Result {
      std::vector<std::size_t> exceed;
      std::size_t trials = 0;
      std::size_t skipped = 0;
      DensityRow density;
    };
    std::vector<Result> results(set.points.size());
    parallel_for(set.points.size(), [&](std::size_t p) {
      Result& res = results[p];
      res.exceed.assign(taus, 0);
      SampleSet samples(0, fact.latent.dimension());
      samples.reserve(cfg.n);
      for (std::size_t i = 0; i < cfg.n; ++i) {
        if (!base.valid[i]) continue;
        try {
          const Point theta = fact.evaluate(set.points[p], base.r.row(i));
          const double d = euclidean(theta, base.theta[i]);
          for (std::size_t t = 0; t < taus; ++t) {
            if (d >= cfg.tau_grid[t]) ++res.exceed[t];
          }
          samples.push_back(theta);
          ++res.trials;
        } catch (const DegenerateDrawError&) {
          ++res.skipped;
        }
      }
      res.density = density_row(samples, set.points[p], set.radius, bins,
                                cfg.atom_mass);
    });
    double top = 0.0;
    for (std::size_t t = 0; t < taus; ++t) {
      ExceedanceRow row;
      row.radius = set.radius;
      row.tau = cfg.tau_grid[t];
      row.fraction = -1.0;
      for (const auto& res : results) {
        const double f = res.trials == 0 ? 0.0
                                         : static_cast<double>(res.exceed[t]) /
                                               static_cast<double>(res.trials);
        if (f > row.fraction) {
          row.fraction = f;
          row.std_error = binomial_se(f, res.trials);
        }
      }
      report.exceedance.push_back(row);
    }
    for (auto& res : results) {
      report.skipped += res.skipped;
      top = std::max(top, res.density.sup_density.front());
      report.density.push_back(std::move(res.density));
    }
    radius_density.push_back(top);
  }

  // Exceedance clause: judged per tau at the smallest radius.
  bool exceed_violated = false;
  bool exceed_vanishing = true;
  const std::size_t radii = cfg.radii.size();
  for (std::size_t t = 0; t < taus; ++t) {
    std::vector<double> values;
    std::vector<double> errors;
    for (std::size_t k = 0; k < radii; ++k) {
      values.push_back(report.exceedance[k * taus + t].fraction);
      errors.push_back(report.exceedance[k * taus + t].std_error);
    }
    const double last = values.back();
    if (last > cfg.mismatch_threshold + cfg.sigma * errors.back()) {
      exceed_violated = true;
      report.reasons.push_back("exceedance " + fmt(last) + " at tau " +
                               fmt(cfg.tau_grid[t]) + " does not vanish");
    } else if (!(last < cfg.mismatch_threshold) ||
               !non_increasing_within_noise(values, errors, cfg.sigma)) {
      exceed_vanishing = false;
    }
  }

  // Density clause.
  bool atom = false;
  bool refinement_growth = false;
  for (const DensityRow& row : report.density) {
    atom = atom || row.atom;
    bool grows = true;
    for (std::size_t s = 1; s < row.sup_density.size(); ++s) {
      grows = grows && row.sup_density[s] >= cfg.growth_factor * row.sup_density[s - 1];
    }
    refinement_growth = refinement_growth || grows;
    report.density_estimate = std::max(report.density_estimate, row.sup_density.front());
  }
  bool radius_growth = radius_density.size() >= 2;
  for (std::size_t k = 1; k < radius_density.size(); ++k) {
    radius_growth =
        radius_growth && radius_density[k] >= cfg.growth_factor * radius_density[k - 1];
  }
  const bool over_bound =
      cfg.density_bound && report.density_estimate > *cfg.density_bound;
  report.density_bounded = !atom && !refinement_growth && !radius_growth && !over_bound;
  if (atom) {
    report.reasons.push_back("density bound not established: a conditional law has "
                             "an atom");
  }
  if (refinement_growth) {
    report.reasons.push_back("density bound not established: histogram sup grows " +
                             fmt(cfg.growth_factor) + "x per bin refinement");
  }
  if (radius_growth) {
    report.reasons.push_back("density bound not established: histogram sup grows " +
                             fmt(cfg.growth_factor) + "x per radius step toward x0");
  }
  if (over_bound) {
    report.reasons.push_back("density estimate " + fmt(report.density_estimate) +
                             " exceeds the declared bound " +
                             fmt(*cfg.density_bound));
  }

  if (exceed_violated || !report.density_bounded) {
    report.verdict = Verdict::kViolated;
  } else if (exceed_vanishing) {
    report.verdict = Verdict::kConsistent;
    report.reasons.push_back("exceedance vanishes for every tau and density estimate " +
                             fmt(report.density_estimate) + " is bounded");
  } else {
    report.verdict = Verdict::kInconclusive;
    report.reasons.push_back("exceedance not clearly vanishing at the smallest radius");
  }
  return report;
}

RegularityReport regularity_probe(const Factorization& fact,
                                  const RegularityConfig& cfg, const SeedSpec& seed) {
  if (fact.latent.is_discrete() || fact.latent.exact_equality() ||
      cfg.assume_exact_equality) {
    return discrete_regularity_probe(fact, cfg, seed);
  }
  return continuous_regularity_probe(fact, cfg, seed);
}

Certificate continuity_certificate(const Factorization& fact,
                                   const DerivedTask& task,
                                   const RegularityConfig& cfg,
                                   const CurveGrid& grid, const SeedSpec& seed,
                                   const CertificateOptions& options) {
  Certificate cert;
  cert.scenario = fact.name;
  cert.task = task.name;
  cert.regularity = regularity_probe(fact, cfg, split(seed, 0));
  cert.tv = tv_limit_probe(fact, cfg.x0, cfg.radii, cfg.n, split(seed, 1), options.tv);
  cert.tv_converged = cert.tv.rows.back().binned_tv < options.tv_limit;
  cert.curve = curve(fact, task, grid, options.curve_samples, split(seed, 2));
  cert.curve_report = modulus_and_jumps(cert.curve, options.jumps);

  cert.f_constant = true;
  for (const auto& p : cert.curve) {
    cert.f_constant = cert.f_constant && p.estimate.f_min == p.estimate.f_max &&
                      p.estimate.f_min == cert.curve.front().estimate.f_min;
  }
  const bool jump_free = cert.curve_report.jumps.empty();
  const bool regular = cert.regularity.verdict == Verdict::kConsistent;
  cert.passed = jump_free && (regular || cert.f_constant);

  if (!jump_free) {
    for (const auto& j : cert.curve_report.jumps) {
      cert.reasons.push_back("jump of size " + fmt(j.size) + " near " +
                             fmt(j.location));
    }
  }
  if (!regular) {
    cert.reasons.push_back("regularity verdict " + to_string(cert.regularity.verdict));
    if (cert.f_constant) cert.reasons.push_back("f is constant on every sample");
  }
  if (!cert.tv_converged) {
    cert.reasons.push_back("binned TV " + fmt(cert.tv.rows.back().binned_tv) +
                           " at the smallest radius");
  }
  return cert;
}

}  // namespace regulab
