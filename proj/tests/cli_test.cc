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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "regulab/cli.h"
#include "regulab/config.h"
#include "regulab/errors.h"
#include "regulab/manifest.h"

namespace regulab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("regulab_cli_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  std::string read(const std::string& rel) {
    std::ifstream in(dir_ / rel);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST(Config, CommentsAndDefaults) {
  const auto path = fs::temp_directory_path() / "regulab_cfg_comments.json";
  std::ofstream(path) << "// header\n{ \"scenario\": \"frac_l1\", /* inline */ \"seed\": 3 }";
  const ScenarioConfig cfg = parse_config(read_config_document(path.string()));
  fs::remove(path);
  EXPECT_EQ(cfg.scenario, "frac_l1");
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_EQ(cfg.grid.points, 101u);
  EXPECT_EQ(cfg.task.name, "frac");
}

TEST(Config, UnknownFieldsNameTheirPath) {
  try {
    parse_config(json{{"scenario", "frac_l1"}, {"regularity", {{"radiuses", {0.1}}}}});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "regularity.radiuses");
  }
}

TEST(Config, ValidationErrors) {
  EXPECT_THROW(parse_config(json{{"scenario", "frac_l3"}}), ConfigError);
  EXPECT_THROW(parse_config(json::object()), ConfigError);
  EXPECT_THROW(parse_config(json{{"scenario", "frac_l1"}, {"market", json::object()}}),
               ConfigError);
  EXPECT_THROW(parse_config(json{{"scenario", "frac_l1"}, {"grid", {{"lo", -5}}}}),
               ConfigError);
  EXPECT_THROW(parse_config(json{{"scenario", "frac_l1"}, {"seed", "seven"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"scenario", "frac_l1"},
                                 {"task", {{"name", "step"}, {"breaks", {0.0}}}}}),
               ConfigError);
}

TEST(Config, StepTaskAndCustomScenario) {
  const ScenarioConfig cfg = parse_config(json{
      {"scenario", "custom"},
      {"custom",
       {{"domain", {{"lo", {0.0}}, {"hi", {1.0}}}},
        {"noise", {{{"kind", "uniform"}, {"lo", 0.0}, {"hi", 1.0}}}},
        {"t_map", "sum"}}},
      {"task", {{"name", "step"}, {"breaks", {0.5, 1.5}}, {"levels", {0.0, 1.0, 0.25}}}}});
  const DerivedTask task = build_task(cfg);
  const double a[] = {0.2};
  const double b[] = {1.0};
  const double c[] = {1.7};
  EXPECT_EQ(task(a), 0.0);
  EXPECT_EQ(task(b), 1.0);
  EXPECT_EQ(task(c), 0.25);
  EXPECT_EQ(build_factorization(cfg).input_domain.dimension(), 1u);
}

TEST(Config, WhitenOnlyConfigNeedsNoScenario) {
  const ScenarioConfig cfg = parse_config(json{{"whiten", {{"model", "shift2"}}}});
  EXPECT_TRUE(cfg.scenario.empty());
  EXPECT_EQ(cfg.whiten.model, "shift2");
  EXPECT_THROW(parse_config(json{{"whiten", json::object()}, {"grid", json::object()}}),
               ConfigError);
}

TEST(Config, QuickCapsSampleCounts) {
  ScenarioConfig cfg = parse_config(json{{"scenario", "frac_l1"}});
  apply_overrides(cfg, 9, std::string("elsewhere"), true);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.output_dir, "elsewhere");
  EXPECT_EQ(cfg.samples_per_estimate(), cfg.samples.quick);
  EXPECT_LE(cfg.regularity.n, cfg.samples.quick);
}

TEST(Config, ShippedExamplesParse) {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(REGULAB_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    EXPECT_NO_THROW(parse_config(read_config_document(entry.path().string())))
        << entry.path();
  }
  EXPECT_GE(count, 5u);
}

TEST(Manifest, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(CliTest, CurveWritesCsvSidecarAndManifest) {
  const auto cfg = write("c.json", R"({"scenario": "frac_l1", "grid": {"points": 11}})");
  ASSERT_EQ(run({"curve", "--config", cfg, "--out", (dir_ / "o").string(), "--quick"}), 0)
      << err_.str();
  const std::string csv = read("o/curve.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,value,stderr,n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
  EXPECT_TRUE(fs::exists(dir_ / "o/curve.vl.json"));
  EXPECT_TRUE(RunManifest::verify((dir_ / "o/manifest.json").string()).empty());
}

TEST_F(CliTest, ScenarioFlagWithoutConfig) {
  EXPECT_EQ(run({"curve", "--scenario", "frac_l2", "--out", (dir_ / "o").string(), "--quick"}),
            0);
  EXPECT_NE(out_.str().find("jump"), std::string::npos);
}

TEST_F(CliTest, DeterministicAndSeedSensitive) {
  const auto cfg = write("c.json", R"({"scenario": "frac_l2", "grid": {"points": 21}})");
  ASSERT_EQ(run({"curve", "--config", cfg, "--out", (dir_ / "a").string(), "--quick"}), 0);
  ASSERT_EQ(run({"curve", "--config", cfg, "--out", (dir_ / "b").string(), "--quick"}), 0);
  ASSERT_EQ(run({"curve", "--config", cfg, "--out", (dir_ / "c").string(), "--quick",
                 "--seed", "99"}),
            0);
  EXPECT_EQ(read("a/curve.csv"), read("b/curve.csv"));
  EXPECT_NE(read("a/curve.csv"), read("c/curve.csv"));
}

TEST_F(CliTest, TamperedArtifactFailsVerification) {
  const auto cfg = write("c.json", R"({"scenario": "frac_l1", "grid": {"points": 5}})");
  ASSERT_EQ(run({"curve", "--config", cfg, "--out", (dir_ / "o").string(), "--quick"}), 0);
  std::ofstream(dir_ / "o/curve.csv", std::ios::app) << "tampered\n";
  const auto bad = RunManifest::verify((dir_ / "o/manifest.json").string());
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0], "curve.csv");
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"curve", "--config", (dir_ / "missing.json").string()}), 2);
  EXPECT_EQ(run({"curve", "--config", write("bad.json", "{ not json")}), 2);
  EXPECT_EQ(run({"curve", "--config", write("u.json", R"({"scenario":"frac_l1","x":1})")}),
            2);
  EXPECT_NE(err_.str().find("x: unknown"), std::string::npos) << err_.str();
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({"curve"}), 2);
  EXPECT_EQ(run({"matching-probe", "--scenario", "frac_l1"}), 2);
  const auto l2 = write("l2.json", R"({"scenario": "frac_l2", "grid": {"points": 21}})");
  EXPECT_EQ(run({"certify", "--config", l2, "--out", (dir_ / "o").string(), "--quick"}), 3);
  const json cert = json::parse(read("o/certificate.json"));
  EXPECT_FALSE(cert["passed"].get<bool>());
  EXPECT_EQ(cert["verdict"], "violated");
  EXPECT_EQ(cert["version"], kToolkitVersion);
}

TEST_F(CliTest, ProbeWritesOneCsvPerTable) {
  EXPECT_EQ(run({"probe", "--scenario", "frac_l1", "--out", (dir_ / "o").string(), "--quick"}),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "o/tv_probe.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "o/exceedance.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "o/density.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "o/probe.json"));
}

TEST_F(CliTest, WhitenGeneratedCorruptAndReplay) {
  const auto good = write("w.json", R"({"whiten": {"model": "shift"}})");
  ASSERT_EQ(run({"whiten", "--config", good, "--out", (dir_ / "w").string(), "--quick"}), 0)
      << out_.str();
  const auto replay = write(
      "r.json", json{{"whiten", {{"chain_in", (dir_ / "w/chain.json").string()}}}}.dump());
  EXPECT_EQ(run({"whiten", "--config", replay, "--out", (dir_ / "r").string(), "--quick"}), 0);
  const auto corrupt = write("x.json", R"({"whiten": {"corrupt": true}})");
  EXPECT_EQ(run({"whiten", "--config", corrupt, "--out", (dir_ / "x").string(), "--quick"}), 3);
  const json report = json::parse(read("x/whiteness.json"));
  EXPECT_FALSE(report["passed"].get<bool>());
}

TEST_F(CliTest, WhitenFromCsv) {
  std::ostringstream csv;
  csv << "id,x,r\n";
  RandomStream s(SeedSpec{1, {}});
  for (int i = 0; i < 20000; ++i) {
    const double x = s.uniform();
    csv << i << "," << format_double(x) << "," << format_double(x + s.uniform()) << "\n";
  }
  const auto data = write("data.csv", csv.str());
  const auto cfg = write(
      "w.json",
      json{{"whiten",
            {{"source", "csv"},
             {"csv", {{"path", data}, {"x_columns", {"x"}}, {"r_columns", {"r"}}}},
             {"x_bins", 8},
             {"ks_threshold", 0.03}}}}
          .dump());
  EXPECT_EQ(run({"whiten", "--config", cfg, "--out", (dir_ / "o").string()}), 0) << err_.str();

  const auto bad = write("bad.csv", "x,r\n0.1,0.5\n0.2\n");
  const auto bad_cfg = write(
      "b.json", json{{"whiten",
                      {{"source", "csv"},
                       {"csv", {{"path", bad}, {"x_columns", {"x"}}, {"r_columns", {"r"}}}}}}}
                    .dump());
  EXPECT_EQ(run({"whiten", "--config", bad_cfg, "--out", (dir_ / "b").string()}), 2);
  EXPECT_NE(err_.str().find("bad.csv:3"), std::string::npos) << err_.str();
  const auto cols = read_xr_csv(data, {"x"}, {"r"});
  EXPECT_EQ(cols.x.size(), 20000u);
  EXPECT_THROW(read_xr_csv(data, {"y"}, {"r"}), ConfigError);
}

}  // namespace
}  // namespace regulab
