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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "regulab/dgp.h"
#include "regulab/errors.h"
#include "regulab/metrics.h"
#include "regulab/scenarios.h"

namespace regulab {
namespace {

// E[frac(x R)], R ~ U[0,1], by the midpoint rule.
double frac_product_oracle(double x) {
  const int steps = 100000;
  double sum = 0.0;
  for (int i = 0; i < steps; ++i) sum += frac(x * (i + 0.5) / steps);
  return sum / steps;
}

TEST(Frac, Values) {
  EXPECT_DOUBLE_EQ(frac(1.25), 0.25);
  EXPECT_DOUBLE_EQ(frac(-0.25), 0.75);
  EXPECT_DOUBLE_EQ(frac(3.0), 0.0);
}

TEST(InputDomain, BoxAndFinite) {
  const auto box = InputDomain::box({0.0, -1.0}, {1.0, 1.0});
  const double in[] = {0.5, 0.0};
  const double out[] = {1.5, 0.0};
  EXPECT_TRUE(box.contains(in));
  EXPECT_FALSE(box.contains(out));
  const auto finite = InputDomain::finite({{0.0}, {1.0}});
  const double one[] = {1.0};
  const double half[] = {0.5};
  EXPECT_TRUE(finite.contains(one));
  EXPECT_FALSE(finite.contains(half));
}

TEST(ConditionalExpectation, ShiftScenarioIsConstant) {
  const auto s = frac_scenarios();
  for (double x : {-1.7, -0.3, 0.0, 0.9}) {
    const double xv[] = {x};
    const Estimate e = conditional_expectation(s.l1, frac_task(), xv, 40000, SeedSpec{1, {}});
    EXPECT_NEAR(e.value, 0.5, 5 * e.std_error + 1e-3) << x;
    EXPECT_EQ(e.n, 40000u);
  }
}

TEST(ConditionalExpectation, ProductScenarioMatchesQuadrature) {
  const auto s = frac_scenarios();
  for (double x : {-1.6, -0.5, 0.3, 1.5}) {
    const double xv[] = {x};
    const Estimate e = conditional_expectation(s.l2, frac_task(), xv, 40000, SeedSpec{2, {}});
    EXPECT_NEAR(e.value, frac_product_oracle(x), 5 * e.std_error) << x;
  }
}

TEST(ConditionalLaw, ProductAtZeroIsConstant) {
  const auto s = frac_scenarios();
  const double x[] = {0.0};
  const ConditionalLaw law = conditional_law(s.l2, x, 1000, SeedSpec{6, {}});
  for (double v : law.samples.data()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(conditional_expectation(s.l2, frac_task(), x, 1000, SeedSpec{6, {}}).value, 0.0);
}

TEST(ConditionalLaw, ShiftMatchesUniformCdf) {
  const auto s = frac_scenarios();
  const double x[] = {2.0};
  const ConditionalLaw law = conditional_law(s.l1, x, 100000, SeedSpec{7, {}});
  EXPECT_LT(ks_statistic(law.samples.data(),
                         [](double z) { return std::clamp(z - 2.0, 0.0, 1.0); }),
            0.01);
}

TEST(ConditionalExpectation, BoundViolationIsReported) {
  const auto s = frac_scenarios();
  DerivedTask task = frac_task();
  task.f = [](std::span<const double>) { return 2.0; };
  const double x[] = {0.0};
  EXPECT_THROW(conditional_expectation(s.l1, task, x, 10, SeedSpec{}), BoundViolationError);
}

TEST(Curve, DeterministicAndCommonNoise) {
  const auto s = frac_scenarios();
  const auto grid = CurveGrid::linspace(-1.0, 1.0, 5);
  const auto a = curve(s.l1, frac_task(), grid, 2000, SeedSpec{3, {}});
  const auto b = curve(s.l1, frac_task(), grid, 2000, SeedSpec{3, {}});
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].estimate.value, b[i].estimate.value);
    EXPECT_DOUBLE_EQ(a[i].position, -1.0 + 0.5 * static_cast<double>(i));
  }
}

TEST(CurveGrid, SegmentEndpoints) {
  const auto g = CurveGrid::segment({0.0, 1.0}, {1.0, 3.0}, 3);
  ASSERT_EQ(g.points.size(), 3u);
  EXPECT_EQ(g.points[1], (Point{0.5, 2.0}));
}

TEST(JointSample, WindowFilterCollectsNearbyRows) {
  const auto s = frac_scenarios();
  const JointSample joint = joint_sample(s.l1, s.x_dist, 50000, SeedSpec{4, {}});
  EXPECT_EQ(joint.x.size(), 50000u);
  const double x[] = {0.3};
  const WindowSelection w = window_filter(joint, x, 1000);
  EXPECT_GE(w.indices.size(), 1000u);
  for (std::size_t i : w.indices) EXPECT_LE(std::abs(joint.x(i, 0) - 0.3), w.half_width);
  EXPECT_EQ(w.theta.size(), w.indices.size());
}

TEST(JointSample, RegressionEstimatorsTrackTheCurve) {
  const auto s = frac_scenarios();
  const JointSample joint = joint_sample(s.l2, s.x_dist, 200000, SeedSpec{5, {}});
  const double x[] = {1.0};
  EXPECT_NEAR(kernel_regression(joint, frac_task(), x, 0.01), frac_product_oracle(1.0), 0.03);
  EXPECT_NEAR(nearest_neighbor_mean(joint, frac_task(), x, 2000), frac_product_oracle(1.0),
              0.03);
}

TEST(Factorization, EvaluateChecksLatentDimension) {
  Factorization f = frac_scenarios().l1;
  f.t_map = [](std::span<const double>, std::span<const double>) { return Point{1.0, 2.0}; };
  const double x[] = {0.0};
  const double r[] = {0.5};
  EXPECT_THROW(f.evaluate(x, r), LatentEvaluationError);
}

}  // namespace
}  // namespace regulab
