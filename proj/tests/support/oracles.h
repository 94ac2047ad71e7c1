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

#ifndef METABLOCK_TESTS_SUPPORT_ORACLES_H_
#define METABLOCK_TESTS_SUPPORT_ORACLES_H_

// Slow, direct reimplementations used as test oracles. None of them shares
// code with the library beyond the plain data types.

#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "metablock/block_collection.h"
#include "metablock/types.h"

namespace metablock::testing {

// The nine slots of every scheme, in the order CF-IBF, RACCB, JS, LCP(i),
// LCP(j), EJS, WJS, RS, NRS. Recomputes every statistic from the raw
// blocks with explicit set operations.
std::vector<double> NaiveFeatures(const BlockCollection &bc, EntityId i,
                                  EntityId j);

// Distinct entities sharing a block with `e` (other source only in
// Clean-Clean ER), by pairwise scan.
std::size_t NaiveLcp(const BlockCollection &bc, EntityId e);

// Pairs sharing at least one block, by double loop over all entity pairs.
std::vector<std::uint64_t> NaiveCandidateKeys(const BlockCollection &bc);

// Block Filtering with the ratio given as num/den, in exact integer
// arithmetic. Returns (signature, e1 members, e2 members) sorted by
// signature.
using BlockTuple =
    std::tuple<std::string, std::vector<EntityId>, std::vector<EntityId>>;
std::vector<BlockTuple> NaiveFilter(const BlockCollection &bc, std::size_t num,
                                    std::size_t den);
std::vector<BlockTuple> AsTuples(const BlockCollection &bc);

// Transcriptions of the pruning pseudocode, two passes each, returning the
// retained pair keys sorted. The queue-based ones compare (probability,
// pair key) where the pseudocode compares probabilities alone, so that
// ties resolve the same way as in the library.
std::vector<std::uint64_t> TranscribedBcl(std::span<const CandidatePair> c);
std::vector<std::uint64_t> TranscribedWep(std::span<const CandidatePair> c);
std::vector<std::uint64_t> TranscribedWnp(std::span<const CandidatePair> c,
                                          bool reciprocal);
std::vector<std::uint64_t> TranscribedBlast(std::span<const CandidatePair> c,
                                            double r);
std::vector<std::uint64_t> TranscribedCep(std::span<const CandidatePair> c,
                                          std::size_t k);
std::vector<std::uint64_t> TranscribedCnp(std::span<const CandidatePair> c,
                                          std::size_t k, bool reciprocal);

// Sorting-based top-K: valid pairs ordered by probability, then pair key,
// both descending.
std::vector<std::uint64_t> SortedTopK(std::span<const CandidatePair> c,
                                      std::size_t k);

// Keys of `pairs[idx]` for each idx, sorted.
std::vector<std::uint64_t> KeysOf(std::span<const CandidatePair> pairs,
                                  std::span<const std::size_t> idx);

}  // namespace metablock::testing

#endif  // METABLOCK_TESTS_SUPPORT_ORACLES_H_
