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

// Ready-made factorizations, tasks and noise models.

#ifndef REGULAB_SCENARIOS_H_
#define REGULAB_SCENARIOS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "regulab/dgp.h"
#include "regulab/matching.h"
#include "regulab/whitening.h"

namespace regulab {

struct FracScenarios {
  Factorization l1;  // X + R
  Factorization l2;  // X * R
  NoiseSpec x_dist;  // U[lo, hi]
};

// K = [lo, hi], R ~ U[0, 1].
FracScenarios frac_scenarios(double lo = -2.0, double hi = 2.0);

// T maps selectable by name for custom scenarios:
//   sum            x_1 + r_1 (plus further coordinates pairwise)
//   product        x_1 * r_1
//   identity_noise r
//   sign_diff      sign(x_1 - r_1)
//   sign_x         sign(x_1)
//   constant       0
TMap named_t_map(const std::string& name);
std::vector<std::string> named_t_maps();
// Latent dimension produced by a named map.
std::size_t named_t_map_dimension(const std::string& name, std::size_t x_dimension,
                                  std::size_t noise_dimension);
// sign_* maps have the discrete latent {-1, 0, 1}.
bool named_t_map_is_discrete(const std::string& name);

// f(theta) = frac(theta_1).
DerivedTask frac_task();
DerivedTask constant_task(double c);

// Bounded, mostly discontinuous tasks on theta_1, all with values in [0, 1]:
// frac, 1[t >= 1/2], 1[t in [1/4, 3/4]], (1 + sign(sin 7t)) / 2, a random
// 10-step function on [lo, hi] drawn from `seed`, and floor parity.
std::vector<DerivedTask> task_battery(std::uint64_t seed = 17, double lo = -2.0,
                                      double hi = 3.0);
// A single task by name: frac, ge_half, interval, sign_sin, step10,
// floor_parity, constant.
DerivedTask named_task(const std::string& name, std::uint64_t seed = 17);

// r = x + u with x, u ~ U[0, 1] and T(x, r) = r.
DependentNoiseModel shift_noise_model();
// r_1 = x + u_1, r_2 = (1 + x) u_2 + r_1 / 2 and T(x, r) = r.
DependentNoiseModel shift_noise_model_2d();
// r = u with u ~ U[0, 1]; already white.
DependentNoiseModel white_noise_model();
DependentNoiseModel noise_model_by_name(const std::string& name);

}  // namespace regulab

#endif  // REGULAB_SCENARIOS_H_
