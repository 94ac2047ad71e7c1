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

#ifndef METABLOCK_BLOCKING_H_
#define METABLOCK_BLOCKING_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metablock/block_collection.h"
#include "metablock/types.h"

namespace metablock {

// Splits an attribute value into lowercase tokens. Any ASCII character that
// is not a letter or digit separates tokens; bytes >= 0x80 are kept as token
// characters so UTF-8 and Latin-1 words survive intact. Empty tokens are
// dropped; numeric tokens are kept.
std::vector<std::string> Tokenize(std::string_view value);

// Token Blocking: one block per distinct token of any attribute value.
// Entity ids are positional: profiles_e1[k] -> k and profiles_e2[k] ->
// |E1| + k. Passing an empty `profiles_e2` selects Dirty ER. Blocks that
// imply no comparison (a single member, or members from one source only in
// Clean-Clean mode) are dropped. Blocks come out sorted by signature.
BlockCollection TokenBlocking(std::span<const EntityProfile> profiles_e1,
                              std::span<const EntityProfile> profiles_e2 = {});

// Explicit-mode overload, for a Clean-Clean task whose second collection
// happens to be empty.
BlockCollection TokenBlocking(ErMode mode,
                              std::span<const EntityProfile> profiles_e1,
                              std::span<const EntityProfile> profiles_e2);

// Block Purging: drops every block holding more than half of
// `total_entities` profiles.
BlockCollection BlockPurging(const BlockCollection &bc,
                             std::size_t total_entities);

// Same, using bc.num_entities() as the total.
BlockCollection BlockPurging(const BlockCollection &bc);

// Block Filtering: every entity leaves the ceil(ratio * |B_i|) largest of
// its blocks, but always keeps at least one. Ties in block size are broken
// by signature in ascending order. Requires 0 <= ratio < 1.
BlockCollection BlockFiltering(const BlockCollection &bc, double ratio = 0.20);

// Number of blocks Block Filtering removes an entity from, given |B_i|.
std::size_t FilteredBlockCount(std::size_t entity_blocks, double ratio);

// The distinct comparisons implied by the collection, canonical and sorted
// by (i, j).
std::vector<CandidatePair> ExtractCandidates(const BlockCollection &bc);

}  // namespace metablock

#endif  // METABLOCK_BLOCKING_H_
