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

#ifndef METABLOCK_WEIGHTING_H_
#define METABLOCK_WEIGHTING_H_

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metablock/block_collection.h"
#include "metablock/types.h"

namespace metablock {

// The eight co-occurrence weighting schemes.
enum class Scheme : std::uint8_t {
  kCfIbf,
  kRaccb,
  kJs,
  kLcp,
  kEjs,
  kWjs,
  kRs,
  kNrs,
};

inline constexpr Scheme kAllSchemes[] = {
    Scheme::kCfIbf, Scheme::kRaccb, Scheme::kJs, Scheme::kLcp,
    Scheme::kEjs,   Scheme::kWjs,   Scheme::kRs, Scheme::kNrs};

// One slot of a feature vector. LCP is an entity-level scheme and fills two
// slots, one per side of the pair.
enum class FeatureId : std::uint8_t {
  kCfIbf,
  kRaccb,
  kJs,
  kLcpI,
  kLcpJ,
  kEjs,
  kWjs,
  kRs,
  kNrs,
};

const char *SchemeName(Scheme scheme);
const char *FeatureName(FeatureId id);
// Accepts the canonical names ("CF-IBF", "RACCB", ...) case-insensitively,
// with '_' allowed in place of '-'.
std::optional<Scheme> ParseScheme(std::string_view name);

// An ordered, non-empty list of distinct schemes. The order fixes the layout
// of feature vectors and is serialized with trained models.
class FeatureSet {
 public:
  // Throws a usage error when empty or when a scheme repeats.
  explicit FeatureSet(std::vector<Scheme> schemes);
  FeatureSet(std::initializer_list<Scheme> schemes)
      : FeatureSet(std::vector<Scheme>(schemes)) {}

  // {CF-IBF, RACCB, RS, NRS}: the set tuned for BLAST.
  static FeatureSet Blast();
  // {CF-IBF, RACCB, JS, LCP, WJS}: the set tuned for RCNP.
  static FeatureSet Rcnp();
  // {CF-IBF, RACCB, JS, LCP}: the original supervised meta-blocking vector.
  static FeatureSet Legacy();
  // All eight schemes in canonical order.
  static FeatureSet All();
  // Subset of the eight schemes selected by bit k of `mask` <-> kAllSchemes[k].
  static FeatureSet FromMask(std::uint32_t mask);

  // Comma-separated list of scheme names, e.g. "CF-IBF,RACCB,RS,NRS".
  static FeatureSet Parse(std::string_view spec);

  std::span<const Scheme> schemes() const { return schemes_; }
  bool Contains(Scheme scheme) const;
  // Vector layout after LCP expansion.
  std::vector<FeatureId> Slots() const;
  std::size_t dimension() const { return Slots().size(); }
  std::uint32_t mask() const;
  std::string ToString() const;

  bool operator==(const FeatureSet &) const = default;

 private:
  std::vector<Scheme> schemes_;
};

// Per-pair aggregates over the common blocks B_i ∩ B_j.
struct CommonBlocks {
  std::uint32_t count = 0;         // |B_i ∩ B_j|
  double inverse_cardinality = 0;  // sum of 1/||b||
  double inverse_size = 0;         // sum of 1/|b|
};

// Evaluates the weighting schemes against a block collection. Per-entity
// aggregates are computed once at construction; afterwards every method is
// const and safe to call concurrently. The collection must outlive this
// object.
//
// Degenerate inputs: an entity in no block, a zero ||e_i||, or an empty
// denominator makes the affected scheme return 0.
class WeightingContext {
 public:
  // LCP requires a sweep over every block of every entity; skip it when no
  // LCP slot will be requested.
  explicit WeightingContext(const BlockCollection &bc, bool with_lcp = true);

  const BlockCollection &blocks() const { return *bc_; }

  CommonBlocks Common(EntityId i, EntityId j) const;

  double CfIbf(EntityId i, EntityId j) const;
  double Raccb(EntityId i, EntityId j) const;
  double Js(EntityId i, EntityId j) const;
  double Ejs(EntityId i, EntityId j) const;
  double Wjs(EntityId i, EntityId j) const;
  double Rs(EntityId i, EntityId j) const;
  double Nrs(EntityId i, EntityId j) const;
  // Number of distinct entities sharing a block with `entity` (other source
  // only, in Clean-Clean ER). Throws if built without LCP.
  std::uint32_t Lcp(EntityId entity) const;

  bool has_lcp() const { return with_lcp_; }

  // Feature vector of (i, j) in `fs` slot order, written to `out`.
  void Features(EntityId i, EntityId j, const FeatureSet &fs,
                std::vector<double> &out) const;
  std::vector<double> Features(EntityId i, EntityId j,
                               const FeatureSet &fs) const;
  // Same, for a precomputed slot layout.
  void FillSlots(EntityId i, EntityId j, std::span<const FeatureId> slots,
                 std::vector<double> &out) const;

 private:
  double Value(FeatureId id, EntityId i, EntityId j,
               const CommonBlocks &common) const;

  const BlockCollection *bc_;
  bool with_lcp_;
  std::vector<double> log_ibf_;   // log(|B| / |B_i|)
  std::vector<double> log_iecf_;  // log(||B|| / ||e_i||)
  std::vector<double> inv_card_;  // sum over B_i of 1/||b||
  std::vector<double> inv_size_;  // sum over B_i of 1/|b|
  std::vector<double> block_inv_card_;
  std::vector<double> block_inv_size_;
  std::vector<std::uint32_t> lcp_;
};

// Fills `features` on every pair in `fs` order. Pairs are independent, so
// the output does not depend on their order.
void Featurize(std::span<CandidatePair> pairs, const BlockCollection &bc,
               const FeatureSet &fs);
void Featurize(std::span<CandidatePair> pairs, const WeightingContext &ctx,
               const FeatureSet &fs);

// Column positions in a vector laid out for `from` that hold the slots of
// `to`. Throws if `to` uses a scheme `from` lacks.
std::vector<std::size_t> ProjectSlots(const FeatureSet &from,
                                      const FeatureSet &to);

}  // namespace metablock

#endif  // METABLOCK_WEIGHTING_H_
