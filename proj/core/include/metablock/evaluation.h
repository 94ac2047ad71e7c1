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

#ifndef METABLOCK_EVALUATION_H_
#define METABLOCK_EVALUATION_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "metablock/block_collection.h"
#include "metablock/meta_blocking.h"
#include "metablock/pruning.h"
#include "metablock/types.h"
#include "metablock/weighting.h"

namespace metablock {

// Effectiveness of a retained pair set. Recall is measured against all of
// D, so duplicates that blocking never paired count as false negatives:
// tp + fn = |D|, tp + fp = |retained|.
struct EvaluationReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double runtime_seconds = 0.0;
  std::size_t candidates_in = 0;
  std::size_t candidates_out = 0;
  PhaseTimes phases;
};

// Harmonic mean; 0 when both inputs are 0.
double F1Score(double recall, double precision);

// `retained` must be a subset of `candidates`.
EvaluationReport Evaluate(std::span<const CandidatePair> retained,
                          std::span<const CandidatePair> candidates,
                          const GroundTruth &gt, double elapsed_seconds = 0.0);

// Index form: `retained` indexes into `candidates`.
EvaluationReport EvaluateIndices(std::span<const CandidatePair> candidates,
                                 std::span<const std::size_t> retained,
                                 const GroundTruth &gt,
                                 double elapsed_seconds = 0.0);

EvaluationReport Evaluate(const MetaBlockingResult &result,
                          const GroundTruth &gt);

// Averages over runs. F1 is the mean of the per-run F1 values, not the F1
// of the mean recall and precision.
struct AveragedReport {
  std::size_t runs = 0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double runtime_seconds = 0.0;
  double candidates_out = 0.0;
};

AveragedReport Average(std::span<const EvaluationReport> reports);

// Extrapolated throughput ratio between a small and a large run:
// (|C_large| / |C_small|) * (RT_small / RT_large). 1.0 means linear scaling.
double Speedup(double candidates_small, double runtime_small,
               double candidates_large, double runtime_large);

struct SubsetResult {
  FeatureSet features;
  AveragedReport mean;
};

// Runs the subsets of the eight schemes selected by `masks` (all 255
// non-empty ones when empty), each averaged over `seeds`. Ranked by mean F1
// descending; equal F1 goes to the smaller feature vector, then to the lower
// scheme mask. `base` supplies
// the pruning settings; its feature set is ignored. `progress`, when set,
// is called after each subset with (done, total), serialized. Subsets run on
// up to `threads` workers; the ranking does not depend on the count.
std::vector<SubsetResult> FeatureSubsetSearch(
    const BlockCollection &bc, std::span<const CandidatePair> candidates,
    const GroundTruth &gt, const MetaBlockingOptions &base,
    std::span<const std::uint64_t> seeds,
    std::span<const std::uint32_t> masks = {},
    const std::function<void(std::size_t, std::size_t)> &progress = {},
    unsigned threads = 1);

// The 255 non-empty scheme masks, ascending.
std::vector<std::uint32_t> AllSubsetMasks();

struct SweepRow {
  std::size_t labelled = 0;  // total instances, split evenly per class
  AveragedReport mean;
};

// One averaged report per training-set size; per-class count is size / 2.
std::vector<SweepRow> TrainingSweep(const BlockCollection &bc,
                                    std::span<const CandidatePair> candidates,
                                    const GroundTruth &gt,
                                    const MetaBlockingOptions &base,
                                    std::span<const std::size_t> sizes,
                                    std::span<const std::uint64_t> seeds);

// Default averaging seeds 0..9 and the sweep sizes 20, 50, 100, ..., 500.
std::vector<std::uint64_t> DefaultSeeds();
std::vector<std::size_t> DefaultSweepSizes();

struct DensityRow {
  double low = 0.0;
  double high = 0.0;
  std::size_t matching = 0;
  std::size_t non_matching = 0;
};

// Histogram of scored probabilities split by ground-truth label. Only
// non-empty buckets are emitted, ascending; probability 1 falls in the last
// bucket.
std::vector<DensityRow> ProbabilityDensity(
    std::span<const CandidatePair> scored, const GroundTruth &gt,
    double bucket_width = 0.01);

struct CommonBlockRow {
  std::size_t common_blocks = 0;  // 0 means blocking missed the pair
  std::size_t duplicates = 0;
  double fraction = 0.0;
};

// Distribution of |B_i ∩ B_j| over the ground-truth duplicates.
std::vector<CommonBlockRow> CommonBlockDistribution(const BlockCollection &bc,
                                                    const GroundTruth &gt);

void WriteDensityCsv(std::ostream &out, std::span<const DensityRow> rows);
// Per-entity mean and maximum valid probability; `keys` names the entities.
void WriteNodeThresholdsCsv(std::ostream &out, const NodeThresholds &t,
                            std::span<const std::string> keys = {});
void WriteCommonBlockCsv(std::ostream &out,
                         std::span<const CommonBlockRow> rows);
void WriteSubsetSearchCsv(std::ostream &out,
                          std::span<const SubsetResult> rows);
void WriteSweepCsv(std::ostream &out, std::span<const SweepRow> rows);

}  // namespace metablock

#endif  // METABLOCK_EVALUATION_H_
