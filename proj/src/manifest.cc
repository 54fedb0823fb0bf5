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

#include "regulab/manifest.h"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "regulab/errors.h"

namespace regulab {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return sha256_hex(buffer.str());
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), end);
}

RunManifest::RunManifest(std::string command, std::string output_dir,
                         std::string config_hash, std::uint64_t seed)
    : command_(std::move(command)),
      output_dir_(std::move(output_dir)),
      config_hash_(std::move(config_hash)),
      seed_(seed) {
  std::filesystem::create_directories(output_dir_);
}

void RunManifest::write(const std::string& name, const std::string& content) {
  const std::string path = (std::filesystem::path(output_dir_) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  out.close();
  if (!out) throw DataError("failed writing " + path);
  artifacts_.push_back({name, sha256_hex(content), content.size()});
}

void RunManifest::write_json(const std::string& name, const nlohmann::json& j) {
  write(name, j.dump(2) + "\n");
}

void RunManifest::add_timing(const std::string& phase, double seconds) {
  timings_.emplace_back(phase, seconds);
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["toolkit"] = "regulab";
  j["version"] = kToolkitVersion;
  j["command"] = command_;
  j["config_sha256"] = config_hash_;
  j["seed"] = seed_;
  j["artifacts"] = nlohmann::json::array();
  for (const auto& a : artifacts_) {
    j["artifacts"].push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  }
  j["timings_seconds"] = nlohmann::json::object();
  for (const auto& [phase, s] : timings_) j["timings_seconds"][phase] = s;
  return j;
}

void RunManifest::save() const {
  const std::string path = (std::filesystem::path(output_dir_) / "manifest.json").string();
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << to_json().dump(2) << "\n";
}

std::vector<std::string> RunManifest::verify(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot read " + manifest_path);
  const nlohmann::json j = nlohmann::json::parse(in);
  const auto dir = std::filesystem::path(manifest_path).parent_path();
  std::vector<std::string> bad;
  for (const auto& a : j.at("artifacts")) {
    const std::string path = (dir / a.at("path").get<std::string>()).string();
    if (!std::filesystem::exists(path) ||
        sha256_file(path) != a.at("sha256").get<std::string>()) {
      bad.push_back(a.at("path").get<std::string>());
    }
  }
  return bad;
}

}  // namespace regulab
