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

#ifndef METABLOCK_PRUNING_H_
#define METABLOCK_PRUNING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "metablock/block_collection.h"
#include "metablock/types.h"

namespace metablock {

// Pruning algorithms over classifier probabilities. Every algorithm first
// discards invalid pairs (probability < 0.5) and uses inclusive comparisons
// at its thresholds.
enum class PruningAlgorithm : std::uint8_t {
  kBcl,    // keep every valid pair
  kWep,    // global mean of valid probabilities
  kWnp,    // per-entity mean, either side
  kRwnp,   // per-entity mean, both sides
  kBlast,  // ratio of the per-entity maxima
  kCep,    // global top-K
  kCnp,    // per-entity top-k, either side
  kRcnp,   // per-entity top-k, both sides
};

inline constexpr PruningAlgorithm kAllPruningAlgorithms[] = {
    PruningAlgorithm::kBcl,  PruningAlgorithm::kWep,   PruningAlgorithm::kWnp,
    PruningAlgorithm::kRwnp, PruningAlgorithm::kBlast, PruningAlgorithm::kCep,
    PruningAlgorithm::kCnp,  PruningAlgorithm::kRcnp};

inline constexpr double kValidProbability = 0.5;
inline constexpr double kDefaultBlastRatio = 0.35;

const char *PruningAlgorithmName(PruningAlgorithm algorithm);
std::optional<PruningAlgorithm> ParsePruningAlgorithm(std::string_view name);

// K = floor(sum |b| / 2), the CEP budget.
std::size_t EdgeBudget(const BlockCollection &bc);
// k = max(1, floor(sum |b| / (|E1| + |E2|))), the CNP/RCNP per-entity budget.
std::size_t NodeBudget(const BlockCollection &bc);

struct PruningConfig {
  PruningAlgorithm algorithm = PruningAlgorithm::kBlast;
  double blast_ratio = kDefaultBlastRatio;
  std::size_t edge_budget = 0;  // K
  std::size_t node_budget = 1;  // k

  // Derives K and k from the collection fed to meta-blocking.
  static PruningConfig For(PruningAlgorithm algorithm,
                           const BlockCollection &bc,
                           double blast_ratio = kDefaultBlastRatio);
};

// Ranking used by the top-K queues: higher probability first; at equal
// probability the pair with the larger canonical key ranks higher, so the
// smaller key is evicted first.
inline bool RanksAbove(double p_a, std::uint64_t key_a, double p_b,
                       std::uint64_t key_b) {
  if (p_a != p_b) return p_a > p_b;
  return key_a > key_b;
}

// Each function returns the indices of the retained pairs in ascending
// order. Every pair must carry a probability; an input sorted canonically
// therefore yields output in canonical order. Entity-indexed arrays are
// sized from the largest id present.
std::vector<std::size_t> Bcl(std::span<const CandidatePair> scored);
std::vector<std::size_t> Wep(std::span<const CandidatePair> scored);
std::vector<std::size_t> Wnp(std::span<const CandidatePair> scored);
std::vector<std::size_t> Rwnp(std::span<const CandidatePair> scored);
std::vector<std::size_t> Blast(std::span<const CandidatePair> scored,
                               double ratio = kDefaultBlastRatio);
std::vector<std::size_t> Cep(std::span<const CandidatePair> scored,
                             std::size_t budget);
std::vector<std::size_t> Cnp(std::span<const CandidatePair> scored,
                             std::size_t budget);
std::vector<std::size_t> Rcnp(std::span<const CandidatePair> scored,
                              std::size_t budget);

std::vector<std::size_t> Prune(std::span<const CandidatePair> scored,
                               const PruningConfig &config);

// Per-entity mean and maximum of valid probabilities (NaN where an entity
// has no valid pair): the thresholds WNP and BLAST derive.
struct NodeThresholds {
  std::vector<double> mean;
  std::vector<double> max;
};
NodeThresholds ComputeNodeThresholds(std::span<const CandidatePair> scored,
                                     std::size_t num_entities);

}  // namespace metablock

#endif  // METABLOCK_PRUNING_H_
