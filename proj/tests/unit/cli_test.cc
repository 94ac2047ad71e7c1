// Copyright 2026 The Metablock Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "generators.h"

namespace metablock {
namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "metablock");
  std::vector<const char *> argv;
  for (const std::string &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::Rng rng(81);
    files_ = testing::WriteLinkageFiles(
        dir_, testing::MakeSyntheticLinkage(rng, 150));
  }

  std::vector<std::string> Inputs() const {
    return {"--e1", files_.e1.string(), "--e2", files_.e2.string(),
            "--gt", files_.gt.string()};
  }

  nlohmann::json RunForReport(std::vector<std::string> extra) {
    std::vector<std::string> args = Inputs();
    const std::string report = (dir_.path() / "report.json").string();
    args.insert(args.end(), {"--quiet", "--report", report});
    args.insert(args.end(), extra.begin(), extra.end());
    const Outcome o = Invoke(args);
    EXPECT_EQ(o.code, kExitOk) << o.err;
    return nlohmann::json::parse(testing::ReadFile(report));
  }

  testing::TempDir dir_;
  testing::LinkageFiles files_;
};

TEST(CliBasicsTest, HelpAndVersion) {
  const Outcome help = Invoke({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("--preset"), std::string::npos);
  EXPECT_EQ(Invoke({"--version"}).code, kExitOk);
}

TEST(CliBasicsTest, UsageErrorsExitOne) {
  EXPECT_EQ(Invoke({"--no-such-flag"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"--seed", "abc"}).code, kExitUsage);
  EXPECT_EQ(Invoke({}).code, kExitUsage);  // no inputs
  const Outcome preset =
      Invoke({"--e1", "a", "--e2", "b", "--gt", "c", "--preset", "blast-99"});
  EXPECT_EQ(preset.code, kExitUsage);
  EXPECT_NE(preset.err.find("blast-99"), std::string::npos);
}

TEST_F(CliTest, RunsAndWritesReport) {
  const auto j = RunForReport({"--preset", "rcnp-50"});
  EXPECT_EQ(j["config"]["algorithm"], "RCNP");
  EXPECT_EQ(j["config"]["features"], "CF-IBF,RACCB,JS,LCP,WJS");
  EXPECT_EQ(j["config"]["per_class"], 25);
}

TEST_F(CliTest, ReportGoesToStdoutWithoutPath) {
  std::vector<std::string> args = Inputs();
  args.push_back("--quiet");
  const Outcome o = Invoke(args);
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(nlohmann::json::parse(o.out)["config"]["algorithm"], "BLAST");
}

TEST_F(CliTest, BadValuesAreUsageErrors) {
  for (const std::vector<std::string> &extra :
       std::vector<std::vector<std::string>>{{"--algorithm", "ARCS"},
                                             {"--features", "JS,XYZ"},
                                             {"--per-class", "many"},
                                             {"--per-class", "5%%"},
                                             {"--format", "xml"},
                                             {"--blast-ratio", "0"}}) {
    std::vector<std::string> args = Inputs();
    args.insert(args.end(), extra.begin(), extra.end());
    EXPECT_EQ(Invoke(args).code, kExitUsage) << extra[0] << " " << extra[1];
  }
}

TEST_F(CliTest, DataErrorsExitTwo) {
  const Outcome missing =
      Invoke({"--e1", (dir_.path() / "nope.csv").string(), "--e2",
              files_.e2.string(), "--gt", files_.gt.string()});
  EXPECT_EQ(missing.code, kExitData);
  EXPECT_NE(missing.err.find("nope.csv"), std::string::npos);
  const auto bad_gt = dir_.Write("bad_gt.csv", "a0,b0\na1,missing-key\n");
  const Outcome unknown = Invoke({"--e1", files_.e1.string(), "--e2",
                                  files_.e2.string(), "--gt", bad_gt.string()});
  EXPECT_EQ(unknown.code, kExitData);
  EXPECT_NE(unknown.err.find("missing-key"), std::string::npos);
  std::vector<std::string> args = Inputs();
  args.insert(args.end(), {"--per-class", "100000"});
  EXPECT_EQ(Invoke(args).code, kExitData);
}

TEST_F(CliTest, PerClassPercentage) {
  const auto j = RunForReport({"--per-class", "10%"});
  EXPECT_EQ(j["config"]["per_class"], 15);  // ceil(0.1 * 150)
}

// Flag over config file over preset over default.
TEST_F(CliTest, ConfigFilePrecedence) {
  const auto config = dir_.Write(
      "run.toml", "algorithm = \"WEP\"\nseed = 9\nblast-ratio = 0.5\n");
  auto j = RunForReport({"--config", config.string(), "--preset", "rcnp-50"});
  EXPECT_EQ(j["config"]["algorithm"], "WEP");  // file beats preset
  EXPECT_EQ(j["config"]["features"], "CF-IBF,RACCB,JS,LCP,WJS");  // preset
  EXPECT_EQ(j["config"]["seed"], 9);
  EXPECT_EQ(j["config"]["blast_ratio"], 0.5);
  EXPECT_EQ(j["config"]["filter_ratio"], 0.2);  // default
  j = RunForReport({"--config", config.string(), "--preset", "rcnp-50",
                    "--algorithm", "CEP", "--seed", "2"});
  EXPECT_EQ(j["config"]["algorithm"], "CEP");  // flag beats file
  EXPECT_EQ(j["config"]["seed"], 2);
}

TEST_F(CliTest, DirtyMode) {
  const std::string report = (dir_.path() / "dirty.json").string();
  const Outcome o =
      Invoke({"--dirty", "--e1", files_.dirty.string(), "--gt",
              files_.dirty_gt.string(), "--quiet", "--report", report});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(nlohmann::json::parse(testing::ReadFile(report))["config"]["mode"],
            "dirty");
  EXPECT_EQ(Invoke({"--dirty", "--e1", files_.dirty.string(), "--e2",
                    files_.e2.string(), "--gt", files_.dirty_gt.string()})
                .code,
            kExitUsage);
}

}  // namespace
}  // namespace metablock
