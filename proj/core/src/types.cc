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

#include "metablock/types.h"

#include <algorithm>
#include <string>

#include "metablock/error.h"

namespace metablock {

const char *SourceName(Source source) {
  switch (source) {
    case Source::kE1:
      return "E1";
    case Source::kE2:
      return "E2";
    case Source::kDirty:
      return "DIRTY";
  }
  return "?";
}

const char *ErModeName(ErMode mode) {
  return mode == ErMode::kCleanClean ? "clean-clean" : "dirty";
}

bool GroundTruth::Add(EntityId a, EntityId b) {
  if (a == b) {
    throw DataError("ground truth contains a self-pair for entity " +
                    std::to_string(a));
  }
  if (mode_ == ErMode::kCleanClean) {
    const bool a_first = a < num_e1_;
    const bool b_first = b < num_e1_;
    if (a_first == b_first) {
      throw DataError("ground-truth pair (" + std::to_string(a) + ", " +
                      std::to_string(b) +
                      ") does not join the two collections");
    }
  }
  return matches_.insert(PairKey(a, b)).second;
}

std::vector<std::uint64_t> GroundTruth::SortedKeys() const {
  std::vector<std::uint64_t> keys(matches_.begin(), matches_.end());
  std::sort(keys.begin(), keys.end());
  return keys;
}

PairLabel Label(const CandidatePair &pair, const GroundTruth &gt) {
  return gt.Contains(pair.i, pair.j) ? PairLabel::kPositive
                                     : PairLabel::kNegative;
}

}  // namespace metablock
