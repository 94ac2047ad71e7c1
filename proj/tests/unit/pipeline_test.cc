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

#include "metablock/pipeline.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <nlohmann/json.hpp>

#include "fixtures.h"
#include "generators.h"
#include "metablock/error.h"

namespace metablock {
namespace {

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::Rng rng(71);
    files_ = testing::WriteLinkageFiles(
        dir_, testing::MakeSyntheticLinkage(rng, 200));
  }

  PipelineConfig CleanConfig() const {
    PipelineConfig config;
    config.e1 = files_.e1;
    config.e2 = files_.e2;
    config.gt = files_.gt;
    return config;
  }

  testing::TempDir dir_;
  testing::LinkageFiles files_;
};

ErrorKind KindOf(const PipelineConfig &config) {
  try {
    RunAll(config);
  } catch (const Error &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvariant;
}

TEST(PresetTest, KnownPresets) {
  PipelineConfig c;
  ASSERT_TRUE(ApplyPreset("rcnp-50", c));
  EXPECT_EQ(c.algorithm, PruningAlgorithm::kRcnp);
  EXPECT_EQ(c.features, FeatureSet::Rcnp());
  EXPECT_EQ(c.per_class, 25u);
  EXPECT_FALSE(c.per_class_percent.has_value());
  ASSERT_TRUE(ApplyPreset("blast-50", c));
  EXPECT_EQ(c.algorithm, PruningAlgorithm::kBlast);
  EXPECT_EQ(c.features, FeatureSet::Blast());
  ASSERT_TRUE(ApplyPreset("legacy-bcl", c));
  EXPECT_EQ(c.algorithm, PruningAlgorithm::kBcl);
  EXPECT_EQ(c.features, FeatureSet::Legacy());
  EXPECT_EQ(c.per_class_percent, 5.0);
  EXPECT_FALSE(ApplyPreset("nope", c));
  EXPECT_EQ(PresetNames().size(), 3u);
}

TEST(PresetTest, PercentOfDuplicates) {
  PipelineConfig c;
  ApplyPreset("legacy-bcl", c);
  EXPECT_EQ(ResolvePerClass(c, 2224), 112u);  // ceil(111.2)
  EXPECT_EQ(ResolvePerClass(c, 1000), 50u);
  EXPECT_EQ(ResolvePerClass(c, 3), 1u);
  c.per_class_percent = 0.0;
  EXPECT_THROW(ResolvePerClass(c, 10), Error);
  c.per_class_percent.reset();
  c.per_class = 0;
  EXPECT_THROW(ResolvePerClass(c, 10), Error);
}

TEST_F(PipelineTest, LoadInputsCleanClean) {
  PreparedData data = LoadInputs(CleanConfig());
  EXPECT_EQ(data.e1.size(), 200u);
  EXPECT_EQ(data.e2.size(), 200u);
  EXPECT_EQ(data.gt.size(), 200u);
  EXPECT_EQ(data.gt.mode(), ErMode::kCleanClean);
  EXPECT_EQ(data.Key(0), "a0");
  EXPECT_EQ(data.Key(200), "b0");
  RunBlocking(data, 0.2);
  EXPECT_FALSE(data.candidates.empty());
  EXPECT_GE(data.blocking.token_blocks, data.blocking.purged_blocks);
  EXPECT_EQ(data.blocking.filtered_blocks, data.blocks.size());
  EXPECT_EQ(data.blocking.candidates.candidates_out, data.candidates.size());
  EXPECT_GT(data.blocking.candidates.recall, 0.9);
}

TEST_F(PipelineTest, UsageAndDataErrors) {
  PipelineConfig c = CleanConfig();
  c.dirty = true;
  EXPECT_EQ(KindOf(c), ErrorKind::kUsage);
  c = CleanConfig();
  c.e2.clear();
  EXPECT_EQ(KindOf(c), ErrorKind::kUsage);
  c = CleanConfig();
  c.filter_ratio = 1.0;
  EXPECT_EQ(KindOf(c), ErrorKind::kUsage);
  c = CleanConfig();
  c.gt = dir_.Write("empty_gt.csv", "left,right\n");
  EXPECT_EQ(KindOf(c), ErrorKind::kData);
  c = CleanConfig();
  c.gt = dir_.Write("bad_gt.csv", "a0,b0\na1,zz\n");
  EXPECT_EQ(KindOf(c), ErrorKind::kData);
  c = CleanConfig();
  c.e1 = dir_.path() / "missing.csv";
  EXPECT_EQ(KindOf(c), ErrorKind::kData);
  c = CleanConfig();
  c.per_class = 100'000;
  EXPECT_EQ(KindOf(c), ErrorKind::kData);
}

TEST_F(PipelineTest, DeterministicApartFromTimings) {
  PipelineConfig c = CleanConfig();
  c.seed = 5;
  const PreparedData data = [&] {
    PreparedData d = LoadInputs(c);
    RunBlocking(d, c.filter_ratio);
    return d;
  }();
  const PipelineResult a = RunPipeline(data, c);
  const PipelineResult b = RunPipeline(data, c);
  EXPECT_EQ(a.meta.retained, b.meta.retained);
  EXPECT_EQ(a.meta.model, b.meta.model);
  auto strip = [&](const PipelineResult &r) {
    nlohmann::json j = nlohmann::json::parse(ReportJson(c, data, r));
    j.erase("runtime");
    return j;
  };
  EXPECT_EQ(strip(a), strip(b));
}

TEST_F(PipelineTest, ReportSections) {
  PipelineConfig c = CleanConfig();
  c.report = dir_.path() / "report.json";
  const PipelineResult r = RunAll(c);
  const auto j = nlohmann::json::parse(testing::ReadFile(c.report));
  for (const char *section :
       {"config", "data", "blocking", "meta_blocking", "model", "runtime"}) {
    EXPECT_TRUE(j.contains(section)) << section;
  }
  EXPECT_EQ(j["config"]["algorithm"], "BLAST");
  EXPECT_EQ(j["config"]["mode"], "clean-clean");
  EXPECT_EQ(j["data"]["duplicates"], 200);
  EXPECT_EQ(j["meta_blocking"]["tp"], r.report.tp);
  EXPECT_EQ(j["meta_blocking"]["recall"], r.report.recall);
  EXPECT_EQ(j["model"]["weights"].size(), 4u);
  EXPECT_GE(j["runtime"]["total_seconds"].get<double>(), 0.0);
}

TEST_F(PipelineTest, WritesEveryExport) {
  PipelineConfig c = CleanConfig();
  c.report = dir_.path() / "report.json";
  c.export_density = dir_.path() / "density.csv";
  c.export_block_dist = dir_.path() / "blocks.csv";
  c.export_pairs = dir_.path() / "pairs.csv";
  c.model_out = dir_.path() / "model.json";
  c.training_sweep = dir_.path() / "sweep.csv";
  c.sweep_sizes = {20, 50};
  c.seeds = {0, 1};
  std::vector<std::string> lines;
  const PipelineResult r =
      RunAll(c, [&](const std::string &line) { lines.push_back(line); });

  const std::string density = testing::ReadFile(c.export_density);
  EXPECT_EQ(density.rfind("low,high,matching,non_matching\n", 0), 0u);
  const std::string nodes =
      testing::ReadFile(dir_.path() / "density_nodes.csv");
  EXPECT_EQ(nodes.rfind("entity,mean,max\n", 0), 0u);
  EXPECT_EQ(testing::ReadFile(c.export_block_dist)
                .rfind("common_blocks,duplicates,fraction\n", 0),
            0u);
  const std::string pairs = testing::ReadFile(c.export_pairs);
  EXPECT_EQ(pairs.rfind("key_i,key_j,probability\n", 0), 0u);
  EXPECT_EQ(
      static_cast<std::size_t>(std::count(pairs.begin(), pairs.end(), '\n')),
      r.meta.retained.size() + 1);
  EXPECT_EQ(TrainedModel::FromJson(testing::ReadFile(c.model_out)),
            r.meta.model);
  const std::string sweep = testing::ReadFile(c.training_sweep);
  EXPECT_EQ(std::count(sweep.begin(), sweep.end(), '\n'), 3);
  EXPECT_FALSE(lines.empty());
}

TEST_F(PipelineTest, SubsetSearchRanksAllSubsets) {
  PipelineConfig c = CleanConfig();
  c.subset_search = dir_.path() / "subsets.csv";
  c.seeds = {0};
  c.threads = 4;
  RunAll(c);
  const std::string csv = testing::ReadFile(c.subset_search);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 256);
  EXPECT_EQ(csv.rfind("rank,features,", 0), 0u);
}

TEST_F(PipelineTest, DirtyModeOnOneCollection) {
  PipelineConfig c;
  c.dirty = true;
  c.e1 = files_.dirty;
  c.gt = files_.dirty_gt;
  ApplyPreset("rcnp-50", c);
  PreparedData data = LoadInputs(c);
  EXPECT_EQ(data.gt.mode(), ErMode::kDirty);
  EXPECT_EQ(data.e1.size(), 400u);
  EXPECT_EQ(data.gt.size(), 200u);
  const PipelineResult r = RunAll(c);
  EXPECT_GT(r.report.recall, 0.5);
}

}  // namespace
}  // namespace metablock
