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

#ifndef METABLOCK_PIPELINE_H_
#define METABLOCK_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metablock/block_collection.h"
#include "metablock/evaluation.h"
#include "metablock/io.h"
#include "metablock/meta_blocking.h"
#include "metablock/types.h"

namespace metablock {

// Everything one run needs. Paths left empty disable the matching output.
struct PipelineConfig {
  std::filesystem::path e1;
  std::filesystem::path e2;  // empty in Dirty ER
  std::filesystem::path gt;
  bool dirty = false;
  std::optional<InputFormat> format;  // guessed from the extension if unset
  std::string key_column;

  PruningAlgorithm algorithm = PruningAlgorithm::kBlast;
  FeatureSet features = FeatureSet::Blast();
  std::size_t per_class = 25;
  // When set, per_class becomes ceil(percent / 100 * |D|), at least 1.
  std::optional<double> per_class_percent;
  std::uint64_t seed = 0;
  double blast_ratio = kDefaultBlastRatio;
  double filter_ratio = 0.2;
  TrainingOptions training;

  std::filesystem::path report;
  std::filesystem::path export_density;
  std::filesystem::path export_block_dist;
  std::filesystem::path export_pairs;
  std::filesystem::path model_out;
  std::filesystem::path subset_search;
  std::filesystem::path training_sweep;
  std::vector<std::size_t> sweep_sizes = DefaultSweepSizes();
  std::vector<std::uint64_t> seeds = DefaultSeeds();
  unsigned threads = 1;  // subset-search workers
};

// blast-50, rcnp-50 and legacy-bcl: algorithm, feature set and sampling of
// the tuned configurations. Returns false for an unknown name.
bool ApplyPreset(std::string_view name, PipelineConfig &config);
std::vector<std::string> PresetNames();

// Resolves config.per_class against |D|.
std::size_t ResolvePerClass(const PipelineConfig &config,
                            std::size_t num_duplicates);

struct BlockingSummary {
  std::size_t token_blocks = 0;
  std::size_t purged_blocks = 0;
  std::size_t filtered_blocks = 0;
  std::uint64_t filtered_cardinality = 0;
  EvaluationReport candidates;  // pairs completeness and quality of C
  double seconds = 0.0;
};

// The loaded inputs and the blocking stage, reusable across runs.
struct PreparedData {
  Dataset e1;
  Dataset e2;  // empty in Dirty ER
  GroundTruth gt;
  BlockCollection blocks;  // after purging and filtering
  std::vector<CandidatePair> candidates;
  BlockingSummary blocking;

  // Source key of a global entity id.
  const std::string &Key(EntityId id) const;
};

PreparedData LoadInputs(const PipelineConfig &config);
// Token Blocking, Block Purging, Block Filtering and candidate extraction.
void RunBlocking(PreparedData &data, double filter_ratio);

struct PipelineResult {
  BlockingSummary blocking;
  MetaBlockingResult meta;
  EvaluationReport report;
  std::size_t per_class = 0;
};

PipelineResult RunPipeline(const PreparedData &data,
                           const PipelineConfig &config);

// JSON report. Timings sit under "runtime" only, so two runs with the same
// configuration differ in that member alone.
std::string ReportJson(const PipelineConfig &config, const PreparedData &data,
                       const PipelineResult &result);

// Loads, runs and writes every requested output. `log` receives progress
// lines when set.
PipelineResult RunAll(const PipelineConfig &config,
                      const std::function<void(const std::string &)> &log = {});

}  // namespace metablock

#endif  // METABLOCK_PIPELINE_H_
