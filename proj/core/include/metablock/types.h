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

#ifndef METABLOCK_TYPES_H_
#define METABLOCK_TYPES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace metablock {

// Dense entity ordinal. In Clean-Clean ER the first collection occupies
// [0, |E1|) and the second [|E1|, |E1|+|E2|), so a canonical pair always has
// its E1 member first.
using EntityId = std::uint32_t;
using BlockId = std::uint32_t;

enum class Source : std::uint8_t { kE1, kE2, kDirty };

enum class ErMode : std::uint8_t {
  kCleanClean,  // record linkage between two duplicate-free collections
  kDirty,       // deduplication within one collection
};

const char *SourceName(Source source);
const char *ErModeName(ErMode mode);

struct Attribute {
  std::string name;
  std::string value;
};

// A set of name-value pairs. `id` is the ordinal of the profile within its
// source, assigned in file order at ingestion.
struct EntityProfile {
  EntityId id = 0;
  Source source = Source::kDirty;
  std::vector<Attribute> attributes;
};

// Packs a canonical (i < j) pair into one integer; ordering of keys equals
// lexicographic ordering of (i, j).
inline std::uint64_t PairKey(EntityId i, EntityId j) {
  if (j < i) std::swap(i, j);
  return (static_cast<std::uint64_t>(i) << 32) | j;
}

inline std::pair<EntityId, EntityId> UnpackPairKey(std::uint64_t key) {
  return {static_cast<EntityId>(key >> 32),
          static_cast<EntityId>(key & 0xffffffffu)};
}

// A distinct comparison between two entities. `features` is empty until the
// pair is featurized; `probability` is unset until a model scores it.
struct CandidatePair {
  EntityId i = 0;
  EntityId j = 0;
  std::vector<double> features;
  std::optional<double> probability;

  CandidatePair() = default;
  CandidatePair(EntityId a, EntityId b) : i(a < b ? a : b), j(a < b ? b : a) {}
  CandidatePair(EntityId a, EntityId b, double p) : CandidatePair(a, b) {
    probability = p;
  }

  std::uint64_t key() const { return PairKey(i, j); }
};

enum class PairLabel { kPositive, kNegative };

// The known duplicates D. Pairs are stored canonically, so lookups are
// order-insensitive.
class GroundTruth {
 public:
  GroundTruth() = default;
  // `num_e1` is |E1| in Clean-Clean mode and is ignored in Dirty mode.
  GroundTruth(ErMode mode, EntityId num_e1) : mode_(mode), num_e1_(num_e1) {}

  // Throws a data error for self-pairs or, in Clean-Clean mode, pairs that
  // do not join one E1 entity with one E2 entity. Returns false when the
  // pair was already present.
  bool Add(EntityId a, EntityId b);

  bool Contains(EntityId a, EntityId b) const {
    return matches_.count(PairKey(a, b)) > 0;
  }
  bool Contains(std::uint64_t key) const { return matches_.count(key) > 0; }

  std::size_t size() const { return matches_.size(); }
  bool empty() const { return matches_.empty(); }
  ErMode mode() const { return mode_; }

  // Canonical keys in ascending order.
  std::vector<std::uint64_t> SortedKeys() const;

 private:
  ErMode mode_ = ErMode::kDirty;
  EntityId num_e1_ = 0;
  std::unordered_set<std::uint64_t> matches_;
};

PairLabel Label(const CandidatePair &pair, const GroundTruth &gt);

}  // namespace metablock

#endif  // METABLOCK_TYPES_H_
