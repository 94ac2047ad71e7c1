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

#include "metablock/pruning.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "metablock/error.h"

namespace metablock {
namespace {

double ProbabilityOf(const CandidatePair &pair) {
  if (!pair.probability) {
    throw InvariantError("pair (" + std::to_string(pair.i) + ", " +
                         std::to_string(pair.j) + ") has not been scored");
  }
  return *pair.probability;
}

bool IsValid(double p) { return kValidProbability <= p; }

std::size_t EntityCount(std::span<const CandidatePair> scored) {
  EntityId max_id = 0;
  for (const CandidatePair &pair : scored) max_id = std::max(max_id, pair.j);
  return scored.empty() ? 0 : static_cast<std::size_t>(max_id) + 1;
}

struct QueueEntry {
  double probability;
  std::uint64_t key;
  std::size_t index;
};

// Heap order that keeps the lowest-ranked entry on top.
bool LowestOnTop(const QueueEntry &a, const QueueEntry &b) {
  return RanksAbove(a.probability, a.key, b.probability, b.key);
}

// Bounded priority queue holding the `capacity` highest-ranked entries seen.
class TopQueue {
 public:
  explicit TopQueue(std::size_t capacity) : capacity_(capacity) {}

  void Offer(const QueueEntry &entry) {
    if (capacity_ == 0) return;
    if (heap_.size() == capacity_) {
      const QueueEntry &lowest = heap_.front();
      // The queue's minimum plays the role of min_p.
      if (!RanksAbove(entry.probability, entry.key, lowest.probability,
                      lowest.key)) {
        return;
      }
    }
    heap_.push_back(entry);
    std::push_heap(heap_.begin(), heap_.end(), LowestOnTop);
    if (heap_.size() > capacity_) {
      std::pop_heap(heap_.begin(), heap_.end(), LowestOnTop);
      heap_.pop_back();
    }
  }

  std::span<const QueueEntry> entries() const { return heap_; }

 private:
  std::size_t capacity_;
  std::vector<QueueEntry> heap_;
};

// Shared by WNP and RWNP.
std::vector<std::size_t> NodeMeanPruning(std::span<const CandidatePair> scored,
                                         bool reciprocal) {
  const NodeThresholds t = ComputeNodeThresholds(scored, EntityCount(scored));
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < scored.size(); ++k) {
    const double p = ProbabilityOf(scored[k]);
    // NaN (no valid pair at the entity) compares false: no constraint met.
    const bool by_i = t.mean[scored[k].i] <= p;
    const bool by_j = t.mean[scored[k].j] <= p;
    if (reciprocal ? (by_i && by_j) : (by_i || by_j)) kept.push_back(k);
  }
  return kept;
}

// Shared by CNP and RCNP.
std::vector<std::size_t> NodeTopPruning(std::span<const CandidatePair> scored,
                                        std::size_t budget, bool reciprocal) {
  const std::size_t n = EntityCount(scored);
  std::vector<TopQueue> queues(n, TopQueue(budget));
  for (std::size_t k = 0; k < scored.size(); ++k) {
    const double p = ProbabilityOf(scored[k]);
    if (!IsValid(p)) continue;
    const QueueEntry entry{p, scored[k].key(), k};
    queues[scored[k].i].Offer(entry);
    queues[scored[k].j].Offer(entry);
  }
  // hits[k] counts the queues (0, 1 or 2) that hold pair k.
  std::vector<std::uint8_t> hits(scored.size(), 0);
  for (const TopQueue &q : queues) {
    for (const QueueEntry &e : q.entries()) ++hits[e.index];
  }
  std::vector<std::size_t> kept;
  const std::uint8_t needed = reciprocal ? 2 : 1;
  for (std::size_t k = 0; k < scored.size(); ++k) {
    if (hits[k] >= needed) kept.push_back(k);
  }
  return kept;
}

}  // namespace

const char *PruningAlgorithmName(PruningAlgorithm algorithm) {
  switch (algorithm) {
    case PruningAlgorithm::kBcl:
      return "BCl";
    case PruningAlgorithm::kWep:
      return "WEP";
    case PruningAlgorithm::kWnp:
      return "WNP";
    case PruningAlgorithm::kRwnp:
      return "RWNP";
    case PruningAlgorithm::kBlast:
      return "BLAST";
    case PruningAlgorithm::kCep:
      return "CEP";
    case PruningAlgorithm::kCnp:
      return "CNP";
    case PruningAlgorithm::kRcnp:
      return "RCNP";
  }
  return "?";
}

std::optional<PruningAlgorithm> ParsePruningAlgorithm(std::string_view name) {
  std::string key;
  for (char c : name) {
    key.push_back(
        static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  for (PruningAlgorithm a : kAllPruningAlgorithms) {
    std::string candidate = PruningAlgorithmName(a);
    for (char &c : candidate) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (key == candidate) return a;
  }
  return std::nullopt;
}

std::size_t EdgeBudget(const BlockCollection &bc) {
  return static_cast<std::size_t>(bc.stats().total_size / 2);
}

std::size_t NodeBudget(const BlockCollection &bc) {
  const std::uint64_t n = bc.num_entities();
  if (n == 0) return 1;
  return std::max<std::size_t>(1, bc.stats().total_size / n);
}

PruningConfig PruningConfig::For(PruningAlgorithm algorithm,
                                 const BlockCollection &bc,
                                 double blast_ratio) {
  if (!(blast_ratio > 0.0 && blast_ratio <= 1.0)) {
    throw UsageError("BLAST pruning ratio must lie in (0, 1]");
  }
  PruningConfig config;
  config.algorithm = algorithm;
  config.blast_ratio = blast_ratio;
  config.edge_budget = EdgeBudget(bc);
  config.node_budget = NodeBudget(bc);
  return config;
}

NodeThresholds ComputeNodeThresholds(std::span<const CandidatePair> scored,
                                     std::size_t num_entities) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> sum(num_entities, 0.0);
  std::vector<std::size_t> count(num_entities, 0);
  NodeThresholds t{std::vector<double>(num_entities, nan),
                   std::vector<double>(num_entities, nan)};
  for (const CandidatePair &pair : scored) {
    const double p = ProbabilityOf(pair);
    if (!IsValid(p)) continue;
    for (EntityId e : {pair.i, pair.j}) {
      sum[e] += p;
      ++count[e];
      if (!(t.max[e] >= p)) t.max[e] = p;
    }
  }
  for (std::size_t e = 0; e < num_entities; ++e) {
    if (count[e] > 0) t.mean[e] = sum[e] / static_cast<double>(count[e]);
  }
  return t;
}

std::vector<std::size_t> Bcl(std::span<const CandidatePair> scored) {
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < scored.size(); ++k) {
    if (IsValid(ProbabilityOf(scored[k]))) kept.push_back(k);
  }
  return kept;
}

std::vector<std::size_t> Wep(std::span<const CandidatePair> scored) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const CandidatePair &pair : scored) {
    const double p = ProbabilityOf(pair);
    if (IsValid(p)) {
      sum += p;
      ++count;
    }
  }
  std::vector<std::size_t> kept;
  if (count == 0) return kept;
  const double mean = sum / static_cast<double>(count);
  for (std::size_t k = 0; k < scored.size(); ++k) {
    if (mean <= ProbabilityOf(scored[k])) kept.push_back(k);
  }
  return kept;
}

std::vector<std::size_t> Wnp(std::span<const CandidatePair> scored) {
  return NodeMeanPruning(scored, /*reciprocal=*/false);
}

std::vector<std::size_t> Rwnp(std::span<const CandidatePair> scored) {
  return NodeMeanPruning(scored, /*reciprocal=*/true);
}

std::vector<std::size_t> Blast(std::span<const CandidatePair> scored,
                               double ratio) {
  const std::size_t n = EntityCount(scored);
  std::vector<double> max(n, 0.0);
  for (const CandidatePair &pair : scored) {
    const double p = ProbabilityOf(pair);
    if (!IsValid(p)) continue;
    if (max[pair.i] < p) max[pair.i] = p;
    if (max[pair.j] < p) max[pair.j] = p;
  }
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < scored.size(); ++k) {
    const double p = ProbabilityOf(scored[k]);
    if (IsValid(p) && ratio * (max[scored[k].i] + max[scored[k].j]) <= p) {
      kept.push_back(k);
    }
  }
  return kept;
}

std::vector<std::size_t> Cep(std::span<const CandidatePair> scored,
                             std::size_t budget) {
  TopQueue queue(budget);
  for (std::size_t k = 0; k < scored.size(); ++k) {
    const double p = ProbabilityOf(scored[k]);
    if (IsValid(p)) queue.Offer({p, scored[k].key(), k});
  }
  std::vector<std::size_t> kept;
  for (const QueueEntry &e : queue.entries()) kept.push_back(e.index);
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<std::size_t> Cnp(std::span<const CandidatePair> scored,
                             std::size_t budget) {
  return NodeTopPruning(scored, budget, /*reciprocal=*/false);
}

std::vector<std::size_t> Rcnp(std::span<const CandidatePair> scored,
                              std::size_t budget) {
  return NodeTopPruning(scored, budget, /*reciprocal=*/true);
}

std::vector<std::size_t> Prune(std::span<const CandidatePair> scored,
                               const PruningConfig &config) {
  switch (config.algorithm) {
    case PruningAlgorithm::kBcl:
      return Bcl(scored);
    case PruningAlgorithm::kWep:
      return Wep(scored);
    case PruningAlgorithm::kWnp:
      return Wnp(scored);
    case PruningAlgorithm::kRwnp:
      return Rwnp(scored);
    case PruningAlgorithm::kBlast:
      return Blast(scored, config.blast_ratio);
    case PruningAlgorithm::kCep:
      return Cep(scored, config.edge_budget);
    case PruningAlgorithm::kCnp:
      return Cnp(scored, config.node_budget);
    case PruningAlgorithm::kRcnp:
      return Rcnp(scored, config.node_budget);
  }
  throw InvariantError("unknown pruning algorithm");
}

}  // namespace metablock
