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

#ifndef METABLOCK_META_BLOCKING_H_
#define METABLOCK_META_BLOCKING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "metablock/block_collection.h"
#include "metablock/classifier.h"
#include "metablock/pruning.h"
#include "metablock/types.h"
#include "metablock/weighting.h"

namespace metablock {

struct MetaBlockingOptions {
  FeatureSet features = FeatureSet::Blast();
  PruningAlgorithm algorithm = PruningAlgorithm::kBlast;
  std::size_t per_class = 25;
  std::uint64_t seed = 0;
  double blast_ratio = kDefaultBlastRatio;
  TrainingOptions training;
};

// Wall-clock seconds per phase.
struct PhaseTimes {
  double featurize = 0.0;
  double train = 0.0;
  double predict = 0.0;
  double prune = 0.0;

  double total() const { return featurize + train + predict + prune; }
};

struct MetaBlockingResult {
  // Candidates with probabilities, in input order.
  std::vector<CandidatePair> scored;
  // Indices into `scored` of the pairs kept by pruning, ascending.
  std::vector<std::size_t> retained;
  TrainedModel model;
  PruningConfig pruning;
  PhaseTimes phases;
};

// Featurizes the candidates, trains on a balanced sample labelled by `gt`,
// scores every candidate and prunes. K and k come from `bc`.
MetaBlockingResult RunMetaBlocking(const BlockCollection &bc,
                                   std::span<const CandidatePair> candidates,
                                   const GroundTruth &gt,
                                   const MetaBlockingOptions &options);

// Same, for candidates already featurized with the slot layout of `layout`;
// options.features must be a subset of it. The scored pairs carry
// probabilities only. Used by the feature-subset search, which featurizes
// once and reuses the vectors for every subset.
MetaBlockingResult RunMetaBlockingOnFeatures(
    const BlockCollection &bc, std::span<const CandidatePair> featurized,
    const FeatureSet &layout, const GroundTruth &gt,
    const MetaBlockingOptions &options);

}  // namespace metablock

#endif  // METABLOCK_META_BLOCKING_H_
