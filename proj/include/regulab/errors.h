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

#ifndef REGULAB_ERRORS_H_
#define REGULAB_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace regulab {

// Invalid user-facing parameters. `field` is a dotted path such as
// "regularity.radii[2]" or "gaussian.std".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// The deterministic map failed (threw, or produced a non-finite or
// wrongly-sized point) at a sampled (x, r).
class LatentEvaluationError : public std::runtime_error {
 public:
  LatentEvaluationError(std::vector<double> x, std::vector<double> r,
                        const std::string& message);

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& r() const { return r_; }

 private:
  std::vector<double> x_;
  std::vector<double> r_;
};

// |f(theta)| exceeded the declared bound B of a derived task.
class BoundViolationError : public std::runtime_error {
 public:
  BoundViolationError(double value, double bound);

  double value() const { return value_; }
  double bound() const { return bound_; }

 private:
  double value_;
  double bound_;
};

// A tie in preference evaluations; the draw is measure-zero degenerate and
// the caller is expected to resample.
class DegenerateDrawError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fitting a conditional CDF chain failed, e.g. an empty conditioning bin.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite or malformed input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace regulab

#endif  // REGULAB_ERRORS_H_
