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

#include "regulab/scenarios.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "regulab/errors.h"

namespace regulab {
namespace {

double sign(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

DerivedTask make_task(std::string name, std::function<double(double)> g) {
  DerivedTask t;
  t.name = std::move(name);
  t.bound = 1.0;
  t.f = [g = std::move(g)](std::span<const double> theta) { return g(theta[0]); };
  return t;
}

DerivedTask step10_task(std::uint64_t seed, double lo, double hi) {
  RandomStream stream(SeedSpec{seed, {0x5354'4550}});
  auto breaks = std::make_shared<std::vector<double>>();
  auto levels = std::make_shared<std::vector<double>>();
  for (int i = 0; i < 9; ++i) breaks->push_back(lo + (hi - lo) * stream.uniform());
  std::sort(breaks->begin(), breaks->end());
  for (int i = 0; i < 10; ++i) levels->push_back(stream.uniform());
  return make_task("step10", [breaks, levels](double t) {
    const auto k = std::upper_bound(breaks->begin(), breaks->end(), t) - breaks->begin();
    return (*levels)[static_cast<std::size_t>(k)];
  });
}

}  // namespace

FracScenarios frac_scenarios(double lo, double hi) {
  if (!(lo < hi)) throw ConfigError("x_dist.hi", "requires lo < hi");
  FracScenarios s;
  s.x_dist = DistributionSpec::uniform(lo, hi);
  Factorization base;
  base.input_domain = InputDomain::box({lo}, {hi});
  base.noise = DistributionSpec::uniform(0.0, 1.0);
  base.latent = LatentSpace::continuous(1);
  s.l1 = base;
  s.l1.name = "frac_l1";
  s.l1.t_map = named_t_map("sum");
  s.l2 = base;
  s.l2.name = "frac_l2";
  s.l2.t_map = named_t_map("product");
  return s;
}

std::vector<std::string> named_t_maps() {
  return {"sum", "product", "identity_noise", "sign_diff", "sign_x", "constant"};
}

TMap named_t_map(const std::string& name) {
  if (name == "sum") {
    return [](std::span<const double> x, std::span<const double> r) {
      Point out(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] + r[j];
      return out;
    };
  }
  if (name == "product") {
    return [](std::span<const double> x, std::span<const double> r) {
      Point out(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] * r[j];
      return out;
    };
  }
  if (name == "identity_noise") {
    return [](std::span<const double>, std::span<const double> r) {
      return Point(r.begin(), r.end());
    };
  }
  if (name == "sign_diff") {
    return [](std::span<const double> x, std::span<const double> r) {
      return Point{sign(x[0] - r[0])};
    };
  }
  if (name == "sign_x") {
    return [](std::span<const double> x, std::span<const double>) {
      return Point{sign(x[0])};
    };
  }
  if (name == "constant") {
    return [](std::span<const double>, std::span<const double>) { return Point{0.0}; };
  }
  throw ConfigError("t_map", "unknown map '" + name + "'");
}

std::size_t named_t_map_dimension(const std::string& name, std::size_t x_dimension,
                                  std::size_t noise_dimension) {
  if (name == "sum" || name == "product") {
    if (x_dimension != noise_dimension) {
      throw ConfigError("t_map", "'" + name + "' needs equal x and noise dimensions");
    }
    return x_dimension;
  }
  if (name == "identity_noise") return noise_dimension;
  named_t_map(name);
  return 1;
}

bool named_t_map_is_discrete(const std::string& name) {
  return name == "sign_diff" || name == "sign_x";
}

DerivedTask frac_task() { return make_task("frac", [](double t) { return frac(t); }); }

DerivedTask constant_task(double c) {
  DerivedTask t = make_task("constant", [c](double) { return c; });
  t.bound = std::max(1.0, std::abs(c));
  return t;
}

std::vector<DerivedTask> task_battery(std::uint64_t seed, double lo, double hi) {
  return {
      frac_task(),
      make_task("ge_half", [](double t) { return t >= 0.5 ? 1.0 : 0.0; }),
      make_task("interval",
                [](double t) { return t >= 0.25 && t <= 0.75 ? 1.0 : 0.0; }),
      make_task("sign_sin", [](double t) { return (1.0 + sign(std::sin(7.0 * t))) / 2.0; }),
      step10_task(seed, lo, hi),
      make_task("floor_parity", [](double t) {
        return std::abs(std::fmod(std::floor(t), 2.0)) == 1.0 ? 1.0 : 0.0;
      }),
  };
}

DerivedTask named_task(const std::string& name, std::uint64_t seed) {
  if (name == "constant") return constant_task(0.5);
  for (auto& t : task_battery(seed)) {
    if (t.name == name) return t;
  }
  throw ConfigError("task", "unknown task '" + name + "'");
}

DependentNoiseModel shift_noise_model() {
  DependentNoiseModel m;
  m.name = "shift";
  m.input_domain = InputDomain::box({0.0}, {1.0});
  m.x_dist = DistributionSpec::uniform(0.0, 1.0);
  m.innovation = DistributionSpec::uniform(0.0, 1.0);
  m.noise_dimension = 1;
  m.noise_map = [](std::span<const double> x, std::span<const double> u) {
    return Point{x[0] + u[0]};
  };
  m.t_map = named_t_map("identity_noise");
  m.latent = LatentSpace::continuous(1);
  return m;
}

DependentNoiseModel shift_noise_model_2d() {
  DependentNoiseModel m = shift_noise_model();
  m.name = "shift2";
  m.innovation = DistributionSpec::uniform(0.0, 1.0, 2);
  m.noise_dimension = 2;
  m.noise_map = [](std::span<const double> x, std::span<const double> u) {
    const double r1 = x[0] + u[0];
    return Point{r1, (1.0 + x[0]) * u[1] + 0.5 * r1};
  };
  m.latent = LatentSpace::continuous(2);
  return m;
}

DependentNoiseModel white_noise_model() {
  DependentNoiseModel m = shift_noise_model();
  m.name = "white";
  m.noise_map = [](std::span<const double>, std::span<const double> u) {
    return Point{u[0]};
  };
  return m;
}

DependentNoiseModel noise_model_by_name(const std::string& name) {
  if (name == "shift") return shift_noise_model();
  if (name == "shift2") return shift_noise_model_2d();
  if (name == "white") return white_noise_model();
  throw ConfigError("whiten.model", "unknown model '" + name +
                                        "' (expected shift, shift2, white)");
}

}  // namespace regulab
