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

// The regulab command-line front end.
//
// Exit codes: 0 success or pass, 1 runtime error, 2 config error, 3 a
// certificate, whiteness check or matching probe that ran but failed.

#ifndef REGULAB_CLI_H_
#define REGULAB_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "regulab/config.h"
#include "regulab/matching.h"
#include "regulab/metrics.h"
#include "regulab/regularity.h"
#include "regulab/whitening.h"

namespace regulab {

enum ExitCode : int {
  kExitOk = 0,
  kExitRuntimeError = 1,
  kExitConfigError = 2,
  kExitFailed = 3,
};

int cmd_curve(const ScenarioConfig& cfg, std::ostream& out);
int cmd_certify(const ScenarioConfig& cfg, std::ostream& out);
int cmd_whiten(const ScenarioConfig& cfg, std::ostream& out);
int cmd_probe(const ScenarioConfig& cfg, std::ostream& out);
int cmd_matching_probe(const ScenarioConfig& cfg, std::ostream& out);

// Parses argv, runs one subcommand and maps exceptions to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::json to_json(const TvProbeTable& table);
nlohmann::json to_json(const RegularityReport& report);
nlohmann::json to_json(const CurveReport& report);
nlohmann::json to_json(const Certificate& cert);
nlohmann::json to_json(const WhitenessReport& report);
nlohmann::json to_json(const MatchingProbeReport& report);

std::string curve_csv(const std::vector<CurvePoint>& curve);

// Reads numeric columns from a CSV with a header row. Errors name the row
// and column.
struct CsvColumns {
  SampleSet x;
  SampleSet r;
};
CsvColumns read_xr_csv(const std::string& path, const std::vector<std::string>& x_columns,
                       const std::vector<std::string>& r_columns);

}  // namespace regulab

#endif  // REGULAB_CLI_H_
