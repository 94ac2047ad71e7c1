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

#include <gtest/gtest.h>

#include "generators.h"
#include "metablock/error.h"

namespace metablock {
namespace {

TEST(BlockTest, CardinalityByMode) {
  Block b{"x", {0, 1, 2}, {5, 6}};
  EXPECT_EQ(b.size(), 5u);
  EXPECT_EQ(b.cardinality(ErMode::kCleanClean), 6u);
  Block d{"y", {0, 1, 2, 3}, {}};
  EXPECT_EQ(d.cardinality(ErMode::kDirty), 6u);
  EXPECT_EQ(Block{}.cardinality(ErMode::kDirty), 0u);
}

TEST(BlockCollectionTest, SortsAndDeduplicatesMembers) {
  BlockCollection bc(ErMode::kDirty, 4, 0, {{"a", {3, 1, 3, 0}, {}}});
  EXPECT_EQ(bc.block(0).members_e1, (std::vector<EntityId>{0, 1, 3}));
  EXPECT_EQ(bc.block_cardinality(0), 3u);
  EXPECT_EQ(bc.entity_blocks(2).size(), 0u);
  EXPECT_EQ(bc.entity_blocks(3).size(), 1u);
}

TEST(BlockCollectionTest, RejectsOutOfRangeMembers) {
  EXPECT_THROW(BlockCollection(ErMode::kDirty, 3, 0, {{"a", {0, 3}, {}}}),
               Error);
  EXPECT_THROW(BlockCollection(ErMode::kCleanClean, 2, 2, {{"a", {0}, {1}}}),
               Error);
  EXPECT_THROW(BlockCollection(ErMode::kCleanClean, 2, 2, {{"a", {2}, {3}}}),
               Error);
  EXPECT_THROW(BlockCollection(ErMode::kDirty, 3, 0, {{"a", {0}, {1}}}), Error);
}

TEST(BlockCollectionTest, DirtyModeIgnoresSecondCount) {
  BlockCollection bc(ErMode::kDirty, 5, 9, {});
  EXPECT_EQ(bc.num_e2(), 0u);
  EXPECT_EQ(bc.num_entities(), 5u);
}

TEST(BlockCollectionTest, HandComputedStats) {
  // E1 = {0, 1}, E2 = {2, 3, 4}.
  BlockCollection bc(ErMode::kCleanClean, 2, 3,
                     {{"a", {0, 1}, {2}}, {"b", {0}, {2, 3, 4}}});
  const CollectionStats &s = bc.stats();
  EXPECT_EQ(s.num_blocks, 2u);
  EXPECT_EQ(s.total_size, 7u);
  EXPECT_EQ(s.total_cardinality, 2u + 3u);
  EXPECT_EQ(s.entity_cardinality, (std::vector<std::uint64_t>{5, 2, 5, 3, 3}));
  EXPECT_EQ(s.entity_block_count, (std::vector<std::uint32_t>{2, 1, 2, 1, 1}));
  EXPECT_TRUE(bc.IsFirstSource(1));
  EXPECT_FALSE(bc.IsFirstSource(2));
}

TEST(BlockCollectionPropertyTest, CachedStatsMatchRecomputation) {
  testing::Rng rng(11);
  for (int round = 0; round < 60; ++round) {
    testing::CollectionShape shape;
    shape.mode = round % 2 ? ErMode::kDirty : ErMode::kCleanClean;
    shape.max_entities = 1000;
    shape.max_blocks = 300;
    shape.max_block_fill = 0.05;
    const BlockCollection bc = testing::RandomCollection(rng, shape);
    EXPECT_EQ(bc.stats(), BlockCollection::ComputeStats(
                              bc.mode(), bc.num_entities(), bc.blocks()));
    // The entity index agrees with block membership.
    for (EntityId e = 0; e < bc.num_entities(); ++e) {
      for (BlockId id : bc.entity_blocks(e)) {
        const Block &b = bc.block(id);
        const auto &side = bc.IsFirstSource(e) ? b.members_e1 : b.members_e2;
        EXPECT_TRUE(std::binary_search(side.begin(), side.end(), e));
      }
    }
  }
}

TEST(BlockCollectionPropertyTest, CardinalityFormulas) {
  testing::Rng rng(12);
  for (int round = 0; round < 100; ++round) {
    const BlockCollection bc = testing::RandomCollection(rng, 60, 30);
    for (BlockId id = 0; id < bc.size(); ++id) {
      const Block &b = bc.block(id);
      const std::uint64_t n1 = b.members_e1.size(), n2 = b.members_e2.size();
      const std::uint64_t expected =
          bc.mode() == ErMode::kCleanClean ? n1 * n2 : n1 * (n1 - 1) / 2;
      EXPECT_EQ(bc.block_cardinality(id), expected);
      EXPECT_EQ(bc.block_size(id), n1 + n2);
    }
  }
}

}  // namespace
}  // namespace metablock
