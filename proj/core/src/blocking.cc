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

#include "metablock/blocking.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <utility>

#include "metablock/error.h"

namespace metablock {
namespace {

bool IsTokenChar(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char Lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                : static_cast<char>(c);
}

// A block survives only if it still implies at least one comparison.
bool HasComparisons(const Block &b, ErMode mode) {
  if (mode == ErMode::kCleanClean) {
    return !b.members_e1.empty() && !b.members_e2.empty();
  }
  return b.members_e1.size() >= 2;
}

std::vector<Block> KeepComparable(std::vector<Block> blocks, ErMode mode) {
  std::erase_if(blocks,
                [mode](const Block &b) { return !HasComparisons(b, mode); });
  return blocks;
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view value) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : value) {
    if (IsTokenChar(c)) {
      current.push_back(Lower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

BlockCollection TokenBlocking(std::span<const EntityProfile> profiles_e1,
                              std::span<const EntityProfile> profiles_e2) {
  return TokenBlocking(
      profiles_e2.empty() ? ErMode::kDirty : ErMode::kCleanClean, profiles_e1,
      profiles_e2);
}

BlockCollection TokenBlocking(ErMode mode,
                              std::span<const EntityProfile> profiles_e1,
                              std::span<const EntityProfile> profiles_e2) {
  if (mode == ErMode::kDirty && !profiles_e2.empty()) {
    throw UsageError("dirty ER takes a single entity collection");
  }
  const auto num_e1 = static_cast<EntityId>(profiles_e1.size());
  const auto num_e2 = static_cast<EntityId>(profiles_e2.size());

  // Ids are appended in ascending order, so member lists stay sorted; a
  // profile repeating a token is appended only once.
  std::unordered_map<std::string, Block> index;
  auto add_profile = [&index](const EntityProfile &profile, EntityId id,
                              bool second) {
    for (const Attribute &attr : profile.attributes) {
      for (std::string &token : Tokenize(attr.value)) {
        auto [it, inserted] = index.try_emplace(token);
        if (inserted) it->second.signature = std::move(token);
        auto &members = second ? it->second.members_e2 : it->second.members_e1;
        if (members.empty() || members.back() != id) members.push_back(id);
      }
    }
  };
  for (EntityId k = 0; k < num_e1; ++k) add_profile(profiles_e1[k], k, false);
  for (EntityId k = 0; k < num_e2; ++k) {
    add_profile(profiles_e2[k], num_e1 + k, true);
  }

  std::vector<Block> blocks;
  blocks.reserve(index.size());
  for (auto &[token, block] : index) {
    if (HasComparisons(block, mode)) blocks.push_back(std::move(block));
  }
  std::sort(blocks.begin(), blocks.end(), [](const Block &a, const Block &b) {
    return a.signature < b.signature;
  });
  return BlockCollection(mode, num_e1, num_e2, std::move(blocks));
}

BlockCollection BlockPurging(const BlockCollection &bc,
                             std::size_t total_entities) {
  std::vector<Block> kept;
  kept.reserve(bc.size());
  for (const Block &b : bc.blocks()) {
    // |b| > total/2, kept in integers so the boundary is exact.
    if (2 * b.size() <= total_entities) kept.push_back(b);
  }
  return BlockCollection(bc.mode(), bc.num_e1(), bc.num_e2(), std::move(kept));
}

BlockCollection BlockPurging(const BlockCollection &bc) {
  return BlockPurging(bc, bc.num_entities());
}

std::size_t FilteredBlockCount(std::size_t entity_blocks, double ratio) {
  if (entity_blocks == 0) return 0;
  // The epsilon absorbs representation error such as 0.2 * 5 = 1.0000000002.
  const double raw = ratio * static_cast<double>(entity_blocks);
  auto drop = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::min(drop, entity_blocks - 1);
}

BlockCollection BlockFiltering(const BlockCollection &bc, double ratio) {
  if (!(ratio >= 0.0 && ratio < 1.0)) {
    throw UsageError("block filtering ratio must lie in [0, 1)");
  }
  std::vector<Block> blocks(bc.blocks().begin(), bc.blocks().end());
  if (ratio == 0.0) {
    return BlockCollection(bc.mode(), bc.num_e1(), bc.num_e2(),
                           std::move(blocks));
  }

  auto larger = [&bc](BlockId a, BlockId b) {
    const std::size_t sa = bc.block_size(a);
    const std::size_t sb = bc.block_size(b);
    if (sa != sb) return sa > sb;
    return bc.block(a).signature < bc.block(b).signature;
  };

  // removed[b] collects the entities that leave block b.
  std::vector<std::vector<EntityId>> removed(bc.size());
  std::vector<BlockId> ranked;
  for (EntityId e = 0; e < bc.num_entities(); ++e) {
    const auto own = bc.entity_blocks(e);
    const std::size_t drop = FilteredBlockCount(own.size(), ratio);
    if (drop == 0) continue;
    ranked.assign(own.begin(), own.end());
    std::partial_sort(ranked.begin(), ranked.begin() + drop, ranked.end(),
                      larger);
    for (std::size_t r = 0; r < drop; ++r) removed[ranked[r]].push_back(e);
  }

  for (BlockId id = 0; id < blocks.size(); ++id) {
    if (removed[id].empty()) continue;
    // Entities were visited in ascending order, so removed[id] is sorted.
    auto prune = [&](std::vector<EntityId> &members) {
      std::vector<EntityId> rest;
      rest.reserve(members.size());
      std::set_difference(members.begin(), members.end(), removed[id].begin(),
                          removed[id].end(), std::back_inserter(rest));
      members = std::move(rest);
    };
    prune(blocks[id].members_e1);
    prune(blocks[id].members_e2);
  }
  return BlockCollection(bc.mode(), bc.num_e1(), bc.num_e2(),
                         KeepComparable(std::move(blocks), bc.mode()));
}

std::vector<CandidatePair> ExtractCandidates(const BlockCollection &bc) {
  std::vector<CandidatePair> candidates;
  const EntityId n = bc.num_entities();
  // Marks neighbours already collected for the current entity.
  std::vector<EntityId> seen(n, n);
  std::vector<EntityId> neighbours;
  const EntityId last = bc.mode() == ErMode::kCleanClean ? bc.num_e1() : n;
  for (EntityId e = 0; e < last; ++e) {
    neighbours.clear();
    for (BlockId id : bc.entity_blocks(e)) {
      const Block &b = bc.block(id);
      const auto &others =
          bc.mode() == ErMode::kCleanClean ? b.members_e2 : b.members_e1;
      // Dirty: only j > i, so each pair is emitted once.
      auto begin = others.begin();
      if (bc.mode() == ErMode::kDirty) {
        begin = std::upper_bound(others.begin(), others.end(), e);
      }
      for (auto it = begin; it != others.end(); ++it) {
        if (seen[*it] != e) {
          seen[*it] = e;
          neighbours.push_back(*it);
        }
      }
    }
    std::sort(neighbours.begin(), neighbours.end());
    for (EntityId other : neighbours) candidates.emplace_back(e, other);
  }
  return candidates;
}

}  // namespace metablock
