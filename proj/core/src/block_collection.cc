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

#include "metablock/block_collection.h"

#include <algorithm>
#include <string>
#include <utility>

#include "metablock/error.h"

namespace metablock {
namespace {

void SortUnique(std::vector<EntityId> &ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

}  // namespace

std::uint64_t Block::cardinality(ErMode mode) const {
  if (mode == ErMode::kCleanClean) {
    return static_cast<std::uint64_t>(members_e1.size()) * members_e2.size();
  }
  const std::uint64_t n = size();
  return n * (n == 0 ? 0 : n - 1) / 2;
}

BlockCollection::BlockCollection(ErMode mode, EntityId num_e1, EntityId num_e2,
                                 std::vector<Block> blocks)
    : mode_(mode),
      num_e1_(num_e1),
      num_e2_(mode == ErMode::kDirty ? 0 : num_e2),
      blocks_(std::move(blocks)) {
  const EntityId n = num_entities();
  for (Block &b : blocks_) {
    SortUnique(b.members_e1);
    SortUnique(b.members_e2);
    if (mode_ == ErMode::kDirty && !b.members_e2.empty()) {
      throw InvariantError("dirty block '" + b.signature +
                           "' has second-source members");
    }
    for (EntityId id : b.members_e1) {
      if (id >= num_e1_) {
        throw InvariantError("block '" + b.signature + "' member " +
                             std::to_string(id) + " is not in E1");
      }
    }
    for (EntityId id : b.members_e2) {
      if (id < num_e1_ || id >= n) {
        throw InvariantError("block '" + b.signature + "' member " +
                             std::to_string(id) + " is not in E2");
      }
    }
  }

  entity_index_.assign(n, {});
  block_cardinality_.reserve(blocks_.size());
  for (BlockId id = 0; id < blocks_.size(); ++id) {
    const Block &b = blocks_[id];
    block_cardinality_.push_back(b.cardinality(mode_));
    for (EntityId e : b.members_e1) entity_index_[e].push_back(id);
    for (EntityId e : b.members_e2) entity_index_[e].push_back(id);
  }

  stats_.num_blocks = blocks_.size();
  stats_.entity_cardinality.assign(n, 0);
  stats_.entity_block_count.assign(n, 0);
  for (BlockId id = 0; id < blocks_.size(); ++id) {
    stats_.total_size += blocks_[id].size();
    stats_.total_cardinality += block_cardinality_[id];
  }
  for (EntityId e = 0; e < n; ++e) {
    stats_.entity_block_count[e] =
        static_cast<std::uint32_t>(entity_index_[e].size());
    for (BlockId id : entity_index_[e]) {
      stats_.entity_cardinality[e] += block_cardinality_[id];
    }
  }
}

CollectionStats BlockCollection::ComputeStats(ErMode mode,
                                              EntityId num_entities,
                                              std::span<const Block> blocks) {
  CollectionStats stats;
  stats.num_blocks = blocks.size();
  stats.entity_cardinality.assign(num_entities, 0);
  stats.entity_block_count.assign(num_entities, 0);
  for (const Block &b : blocks) {
    const std::uint64_t card = b.cardinality(mode);
    stats.total_size += b.size();
    stats.total_cardinality += card;
    for (const auto *members : {&b.members_e1, &b.members_e2}) {
      for (EntityId e : *members) {
        stats.entity_cardinality[e] += card;
        stats.entity_block_count[e] += 1;
      }
    }
  }
  return stats;
}

}  // namespace metablock
