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

#ifndef METABLOCK_BLOCK_COLLECTION_H_
#define METABLOCK_BLOCK_COLLECTION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "metablock/types.h"

namespace metablock {

// A signature-keyed group of entities. In Dirty ER every member lives in
// `members_e1` and `members_e2` stays empty.
struct Block {
  std::string signature;
  std::vector<EntityId> members_e1;
  std::vector<EntityId> members_e2;

  // |b|
  std::size_t size() const { return members_e1.size() + members_e2.size(); }

  // ||b||, the number of comparisons the block implies, counting pairs that
  // other blocks repeat.
  std::uint64_t cardinality(ErMode mode) const;
};

// Aggregates over a block collection that the weighting schemes and the
// cardinality thresholds depend on.
struct CollectionStats {
  std::size_t num_blocks = 0;                     // |B|
  std::uint64_t total_size = 0;                   // sum of |b|
  std::uint64_t total_cardinality = 0;            // ||B||
  std::vector<std::uint64_t> entity_cardinality;  // ||e_i||
  std::vector<std::uint32_t> entity_block_count;  // |B_i|

  bool operator==(const CollectionStats &) const = default;
};

// Immutable block collection plus the per-entity inverted index B_i. Blocks
// keep the order they were given in; their position is their BlockId.
class BlockCollection {
 public:
  BlockCollection() = default;

  // Member lists are sorted and deduplicated. Throws an invariant error if a
  // member id is out of range or sits on the wrong side in Clean-Clean mode.
  BlockCollection(ErMode mode, EntityId num_e1, EntityId num_e2,
                  std::vector<Block> blocks);

  ErMode mode() const { return mode_; }
  // |E1| (or |E| in Dirty ER).
  EntityId num_e1() const { return num_e1_; }
  // |E2|, zero in Dirty ER.
  EntityId num_e2() const { return num_e2_; }
  EntityId num_entities() const { return num_e1_ + num_e2_; }

  std::span<const Block> blocks() const { return blocks_; }
  const Block &block(BlockId id) const { return blocks_[id]; }
  std::size_t size() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }

  // B_i in ascending block id order.
  std::span<const BlockId> entity_blocks(EntityId entity) const {
    return entity_index_[entity];
  }

  std::size_t block_size(BlockId id) const { return blocks_[id].size(); }
  std::uint64_t block_cardinality(BlockId id) const {
    return block_cardinality_[id];
  }

  const CollectionStats &stats() const { return stats_; }

  // Recomputes the aggregates from the raw blocks with no shared state; used
  // to check the cached values.
  static CollectionStats ComputeStats(ErMode mode, EntityId num_entities,
                                      std::span<const Block> blocks);

  // True iff `id` belongs to the first collection (always true in Dirty ER).
  bool IsFirstSource(EntityId id) const { return id < num_e1_; }

 private:
  ErMode mode_ = ErMode::kDirty;
  EntityId num_e1_ = 0;
  EntityId num_e2_ = 0;
  std::vector<Block> blocks_;
  std::vector<std::uint64_t> block_cardinality_;
  std::vector<std::vector<BlockId>> entity_index_;
  CollectionStats stats_;
};

}  // namespace metablock

#endif  // METABLOCK_BLOCK_COLLECTION_H_
