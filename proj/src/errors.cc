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

#include "regulab/errors.h"

#include <sstream>

namespace regulab {
namespace {

std::string describe_point(const std::vector<double>& p) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out << ", ";
    out << p[i];
  }
  out << ")";
  return out.str();
}

}  // namespace

LatentEvaluationError::LatentEvaluationError(std::vector<double> x,
                                             std::vector<double> r,
                                             const std::string& message)
    : std::runtime_error("latent evaluation failed at x=" + describe_point(x) +
                         " r=" + describe_point(r) + ": " + message),
      x_(std::move(x)),
      r_(std::move(r)) {}

BoundViolationError::BoundViolationError(double value, double bound)
    : std::runtime_error("task value " + std::to_string(value) +
                         " exceeds declared bound " + std::to_string(bound)),
      value_(value),
      bound_(bound) {}

}  // namespace regulab
