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

#include "metablock/meta_blocking.h"

#include <chrono>
#include <utility>

namespace metablock {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

MetaBlockingResult RunMetaBlocking(const BlockCollection &bc,
                                   std::span<const CandidatePair> candidates,
                                   const GroundTruth &gt,
                                   const MetaBlockingOptions &options) {
  PhaseTimes phases;

  auto start = Clock::now();
  std::vector<CandidatePair> scored(candidates.begin(), candidates.end());
  Featurize(scored, bc, options.features);
  phases.featurize = SecondsSince(start);

  start = Clock::now();
  const TrainingSet ts =
      SampleTraining(scored, gt, options.per_class, options.seed);
  TrainedModel model = Train(ts, options.features, options.training);
  phases.train = SecondsSince(start);

  start = Clock::now();
  PredictAll(model, scored);
  phases.predict = SecondsSince(start);

  start = Clock::now();
  const PruningConfig pruning =
      PruningConfig::For(options.algorithm, bc, options.blast_ratio);
  std::vector<std::size_t> retained = Prune(scored, pruning);
  phases.prune = SecondsSince(start);

  return {std::move(scored), std::move(retained), std::move(model), pruning,
          phases};
}

MetaBlockingResult RunMetaBlockingOnFeatures(
    const BlockCollection &bc, std::span<const CandidatePair> featurized,
    const FeatureSet &layout, const GroundTruth &gt,
    const MetaBlockingOptions &options) {
  PhaseTimes phases;
  const std::vector<std::size_t> columns =
      ProjectSlots(layout, options.features);

  auto start = Clock::now();
  const auto indices =
      SampleTrainingIndices(featurized, gt, options.per_class, options.seed);
  const TrainingSet ts =
      MakeTrainingSet(featurized, indices, gt, options.seed, columns);
  TrainedModel model = Train(ts, options.features, options.training);
  phases.train = SecondsSince(start);

  start = Clock::now();
  std::vector<CandidatePair> scored;
  scored.reserve(featurized.size());
  std::vector<double> row(columns.size());
  for (const CandidatePair &pair : featurized) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      row[c] = pair.features[columns[c]];
    }
    scored.emplace_back(pair.i, pair.j, model.Probability(row));
  }
  phases.predict = SecondsSince(start);

  start = Clock::now();
  const PruningConfig pruning =
      PruningConfig::For(options.algorithm, bc, options.blast_ratio);
  std::vector<std::size_t> retained = Prune(scored, pruning);
  phases.prune = SecondsSince(start);

  return {std::move(scored), std::move(retained), std::move(model), pruning,
          phases};
}

}  // namespace metablock
