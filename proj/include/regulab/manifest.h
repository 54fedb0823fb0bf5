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

// Run manifests and byte-exact output helpers.

#ifndef REGULAB_MANIFEST_H_
#define REGULAB_MANIFEST_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace regulab {

inline constexpr char kToolkitVersion[] = "1.0.0";

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::string& path);

// Shortest representation that reads back to the same double.
std::string format_double(double v);

struct Artifact {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

class RunManifest {
 public:
  RunManifest(std::string command, std::string output_dir, std::string config_hash,
              std::uint64_t seed);

  // Writes `content` to output_dir/name and records its hash.
  void write(const std::string& name, const std::string& content);
  void write_json(const std::string& name, const nlohmann::json& j);
  void add_timing(const std::string& phase, double seconds);

  const std::vector<Artifact>& artifacts() const { return artifacts_; }
  const std::string& output_dir() const { return output_dir_; }

  nlohmann::json to_json() const;
  // Writes output_dir/manifest.json.
  void save() const;

  // Recomputes the hash of every listed artifact; returns the mismatches.
  static std::vector<std::string> verify(const std::string& manifest_path);

 private:
  std::string command_;
  std::string output_dir_;
  std::string config_hash_;
  std::uint64_t seed_;
  std::vector<Artifact> artifacts_;
  std::vector<std::pair<std::string, double>> timings_;
};

}  // namespace regulab

#endif  // REGULAB_MANIFEST_H_
