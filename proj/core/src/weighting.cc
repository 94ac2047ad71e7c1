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

#include "metablock/weighting.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "metablock/error.h"

namespace metablock {
namespace {

std::string Canonical(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '_') c = '-';
    if (c == ' ') continue;
    out.push_back(
        static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

// log(total / part) with the zero guards; natural logarithm.
double LogRatio(double total, double part) {
  if (part <= 0.0 || total <= 0.0) return 0.0;
  return std::log(total / part);
}

double Jaccard(double common, double a, double b) {
  const double denominator = a + b - common;
  return denominator > 0.0 ? common / denominator : 0.0;
}

}  // namespace

const char *SchemeName(Scheme scheme) {
  switch (scheme) {
    case Scheme::kCfIbf:
      return "CF-IBF";
    case Scheme::kRaccb:
      return "RACCB";
    case Scheme::kJs:
      return "JS";
    case Scheme::kLcp:
      return "LCP";
    case Scheme::kEjs:
      return "EJS";
    case Scheme::kWjs:
      return "WJS";
    case Scheme::kRs:
      return "RS";
    case Scheme::kNrs:
      return "NRS";
  }
  return "?";
}

const char *FeatureName(FeatureId id) {
  switch (id) {
    case FeatureId::kCfIbf:
      return "CF-IBF";
    case FeatureId::kRaccb:
      return "RACCB";
    case FeatureId::kJs:
      return "JS";
    case FeatureId::kLcpI:
      return "LCP_I";
    case FeatureId::kLcpJ:
      return "LCP_J";
    case FeatureId::kEjs:
      return "EJS";
    case FeatureId::kWjs:
      return "WJS";
    case FeatureId::kRs:
      return "RS";
    case FeatureId::kNrs:
      return "NRS";
  }
  return "?";
}

std::optional<Scheme> ParseScheme(std::string_view name) {
  const std::string key = Canonical(name);
  for (Scheme s : kAllSchemes) {
    if (key == SchemeName(s)) return s;
  }
  if (key == "CFIBF") return Scheme::kCfIbf;
  return std::nullopt;
}

FeatureSet::FeatureSet(std::vector<Scheme> schemes)
    : schemes_(std::move(schemes)) {
  if (schemes_.empty()) throw UsageError("feature set must not be empty");
  for (std::size_t a = 0; a < schemes_.size(); ++a) {
    for (std::size_t b = a + 1; b < schemes_.size(); ++b) {
      if (schemes_[a] == schemes_[b]) {
        throw UsageError(std::string("feature set repeats ") +
                         SchemeName(schemes_[a]));
      }
    }
  }
}

FeatureSet FeatureSet::Blast() {
  return {Scheme::kCfIbf, Scheme::kRaccb, Scheme::kRs, Scheme::kNrs};
}

FeatureSet FeatureSet::Rcnp() {
  return {Scheme::kCfIbf, Scheme::kRaccb, Scheme::kJs, Scheme::kLcp,
          Scheme::kWjs};
}

FeatureSet FeatureSet::Legacy() {
  return {Scheme::kCfIbf, Scheme::kRaccb, Scheme::kJs, Scheme::kLcp};
}

FeatureSet FeatureSet::All() {
  return FeatureSet(
      std::vector<Scheme>(std::begin(kAllSchemes), std::end(kAllSchemes)));
}

FeatureSet FeatureSet::FromMask(std::uint32_t mask) {
  std::vector<Scheme> schemes;
  for (std::size_t k = 0; k < std::size(kAllSchemes); ++k) {
    if (mask & (1u << k)) schemes.push_back(kAllSchemes[k]);
  }
  return FeatureSet(std::move(schemes));
}

FeatureSet FeatureSet::Parse(std::string_view spec) {
  std::vector<Scheme> schemes;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    std::string_view item = spec.substr(start, end - start);
    while (!item.empty() &&
           std::isspace(static_cast<unsigned char>(item.front()))) {
      item.remove_prefix(1);
    }
    while (!item.empty() &&
           std::isspace(static_cast<unsigned char>(item.back()))) {
      item.remove_suffix(1);
    }
    if (!item.empty()) {
      auto scheme = ParseScheme(item);
      if (!scheme) {
        throw UsageError("unknown weighting scheme '" + std::string(item) +
                         "'");
      }
      schemes.push_back(*scheme);
    }
    start = end + 1;
  }
  return FeatureSet(std::move(schemes));
}

bool FeatureSet::Contains(Scheme scheme) const {
  return std::find(schemes_.begin(), schemes_.end(), scheme) != schemes_.end();
}

std::vector<FeatureId> FeatureSet::Slots() const {
  std::vector<FeatureId> slots;
  for (Scheme s : schemes_) {
    switch (s) {
      case Scheme::kCfIbf:
        slots.push_back(FeatureId::kCfIbf);
        break;
      case Scheme::kRaccb:
        slots.push_back(FeatureId::kRaccb);
        break;
      case Scheme::kJs:
        slots.push_back(FeatureId::kJs);
        break;
      case Scheme::kLcp:
        slots.push_back(FeatureId::kLcpI);
        slots.push_back(FeatureId::kLcpJ);
        break;
      case Scheme::kEjs:
        slots.push_back(FeatureId::kEjs);
        break;
      case Scheme::kWjs:
        slots.push_back(FeatureId::kWjs);
        break;
      case Scheme::kRs:
        slots.push_back(FeatureId::kRs);
        break;
      case Scheme::kNrs:
        slots.push_back(FeatureId::kNrs);
        break;
    }
  }
  return slots;
}

std::uint32_t FeatureSet::mask() const {
  std::uint32_t m = 0;
  for (Scheme s : schemes_) m |= 1u << static_cast<unsigned>(s);
  return m;
}

std::string FeatureSet::ToString() const {
  std::string out;
  for (Scheme s : schemes_) {
    if (!out.empty()) out += ',';
    out += SchemeName(s);
  }
  return out;
}

WeightingContext::WeightingContext(const BlockCollection &bc, bool with_lcp)
    : bc_(&bc), with_lcp_(with_lcp) {
  const EntityId n = bc.num_entities();
  const CollectionStats &stats = bc.stats();
  const double num_blocks = static_cast<double>(stats.num_blocks);
  const double total_card = static_cast<double>(stats.total_cardinality);

  block_inv_card_.resize(bc.size());
  block_inv_size_.resize(bc.size());
  for (BlockId b = 0; b < bc.size(); ++b) {
    const std::uint64_t card = bc.block_cardinality(b);
    block_inv_card_[b] = card > 0 ? 1.0 / static_cast<double>(card) : 0.0;
    block_inv_size_[b] = 1.0 / static_cast<double>(bc.block_size(b));
  }

  log_ibf_.resize(n);
  log_iecf_.resize(n);
  inv_card_.assign(n, 0.0);
  inv_size_.assign(n, 0.0);
  for (EntityId e = 0; e < n; ++e) {
    log_ibf_[e] = LogRatio(num_blocks, stats.entity_block_count[e]);
    log_iecf_[e] =
        LogRatio(total_card, static_cast<double>(stats.entity_cardinality[e]));
    for (BlockId b : bc.entity_blocks(e)) {
      inv_card_[e] += block_inv_card_[b];
      inv_size_[e] += block_inv_size_[b];
    }
  }

  if (!with_lcp) return;
  // One sweep per entity over its blocks, collecting distinct neighbours.
  lcp_.assign(n, 0);
  std::vector<EntityId> seen(n, n);
  for (EntityId e = 0; e < n; ++e) {
    std::uint32_t count = 0;
    const bool first = bc.IsFirstSource(e);
    for (BlockId id : bc.entity_blocks(e)) {
      const Block &b = bc.block(id);
      const auto &others = (bc.mode() == ErMode::kCleanClean && first)
                               ? b.members_e2
                               : b.members_e1;
      for (EntityId other : others) {
        if (other != e && seen[other] != e) {
          seen[other] = e;
          ++count;
        }
      }
    }
    lcp_[e] = count;
  }
}

CommonBlocks WeightingContext::Common(EntityId i, EntityId j) const {
  CommonBlocks common;
  const auto a = bc_->entity_blocks(i);
  const auto b = bc_->entity_blocks(j);
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common.count;
      common.inverse_cardinality += block_inv_card_[*ia];
      common.inverse_size += block_inv_size_[*ia];
      ++ia;
      ++ib;
    }
  }
  return common;
}

double WeightingContext::Value(FeatureId id, EntityId i, EntityId j,
                               const CommonBlocks &common) const {
  const auto &stats = bc_->stats();
  switch (id) {
    case FeatureId::kCfIbf:
      return common.count * log_ibf_[i] * log_ibf_[j];
    case FeatureId::kRaccb:
      return common.inverse_cardinality;
    case FeatureId::kJs:
      return Jaccard(common.count, stats.entity_block_count[i],
                     stats.entity_block_count[j]);
    case FeatureId::kLcpI:
      return Lcp(i);
    case FeatureId::kLcpJ:
      return Lcp(j);
    case FeatureId::kEjs:
      return Jaccard(common.count, stats.entity_block_count[i],
                     stats.entity_block_count[j]) *
             log_iecf_[i] * log_iecf_[j];
    case FeatureId::kWjs:
      return Jaccard(common.inverse_cardinality, inv_card_[i], inv_card_[j]);
    case FeatureId::kRs:
      return common.inverse_size;
    case FeatureId::kNrs:
      return Jaccard(common.inverse_size, inv_size_[i], inv_size_[j]);
  }
  return 0.0;
}

double WeightingContext::CfIbf(EntityId i, EntityId j) const {
  return Value(FeatureId::kCfIbf, i, j, Common(i, j));
}
double WeightingContext::Raccb(EntityId i, EntityId j) const {
  return Value(FeatureId::kRaccb, i, j, Common(i, j));
}
double WeightingContext::Js(EntityId i, EntityId j) const {
  return Value(FeatureId::kJs, i, j, Common(i, j));
}
double WeightingContext::Ejs(EntityId i, EntityId j) const {
  return Value(FeatureId::kEjs, i, j, Common(i, j));
}
double WeightingContext::Wjs(EntityId i, EntityId j) const {
  return Value(FeatureId::kWjs, i, j, Common(i, j));
}
double WeightingContext::Rs(EntityId i, EntityId j) const {
  return Value(FeatureId::kRs, i, j, Common(i, j));
}
double WeightingContext::Nrs(EntityId i, EntityId j) const {
  return Value(FeatureId::kNrs, i, j, Common(i, j));
}

std::uint32_t WeightingContext::Lcp(EntityId entity) const {
  if (!with_lcp_) {
    throw InvariantError("LCP requested from a context built without it");
  }
  return lcp_[entity];
}

void WeightingContext::Features(EntityId i, EntityId j, const FeatureSet &fs,
                                std::vector<double> &out) const {
  FillSlots(i, j, fs.Slots(), out);
}

void WeightingContext::FillSlots(EntityId i, EntityId j,
                                 std::span<const FeatureId> slots,
                                 std::vector<double> &out) const {
  const CommonBlocks common = Common(i, j);
  out.resize(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s) {
    out[s] = Value(slots[s], i, j, common);
  }
}

std::vector<double> WeightingContext::Features(EntityId i, EntityId j,
                                               const FeatureSet &fs) const {
  std::vector<double> out;
  Features(i, j, fs, out);
  return out;
}

void Featurize(std::span<CandidatePair> pairs, const BlockCollection &bc,
               const FeatureSet &fs) {
  const WeightingContext ctx(bc, fs.Contains(Scheme::kLcp));
  Featurize(pairs, ctx, fs);
}

void Featurize(std::span<CandidatePair> pairs, const WeightingContext &ctx,
               const FeatureSet &fs) {
  if (fs.Contains(Scheme::kLcp) && !ctx.has_lcp()) {
    throw InvariantError("feature set needs LCP but the context lacks it");
  }
  const std::vector<FeatureId> slots = fs.Slots();
  for (CandidatePair &pair : pairs) {
    ctx.FillSlots(pair.i, pair.j, slots, pair.features);
  }
}

std::vector<std::size_t> ProjectSlots(const FeatureSet &from,
                                      const FeatureSet &to) {
  const std::vector<FeatureId> source = from.Slots();
  std::vector<std::size_t> columns;
  for (FeatureId id : to.Slots()) {
    auto it = std::find(source.begin(), source.end(), id);
    if (it == source.end()) {
      throw UsageError(std::string("feature ") + FeatureName(id) +
                       " is missing from the source layout");
    }
    columns.push_back(static_cast<std::size_t>(it - source.begin()));
  }
  return columns;
}

}  // namespace metablock
