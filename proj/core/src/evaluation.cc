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

#include "metablock/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>

#include "metablock/error.h"
#include "metablock/io.h"

namespace metablock {
namespace {

std::string Number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

// Recall and precision from the confusion counts; `d` is |D|.
void Finish(EvaluationReport &r, std::size_t d) {
  r.fn = d - r.tp;
  r.recall = d == 0 ? 0.0 : static_cast<double>(r.tp) / d;
  const std::size_t kept = r.tp + r.fp;
  r.precision = kept == 0 ? 0.0 : static_cast<double>(r.tp) / kept;
  r.f1 = F1Score(r.recall, r.precision);
}

std::size_t MatchesIn(std::span<const CandidatePair> candidates,
                      const GroundTruth &gt) {
  std::size_t n = 0;
  for (const CandidatePair &pair : candidates) n += gt.Contains(pair.key());
  return n;
}

bool RanksBefore(const SubsetResult &a, const SubsetResult &b) {
  if (a.mean.f1 != b.mean.f1) return a.mean.f1 > b.mean.f1;
  const std::size_t da = a.features.dimension();
  const std::size_t db = b.features.dimension();
  if (da != db) return da < db;
  return a.features.mask() < b.features.mask();
}

}  // namespace

double F1Score(double recall, double precision) {
  const double sum = recall + precision;
  return sum == 0.0 ? 0.0 : 2.0 * recall * precision / sum;
}

EvaluationReport Evaluate(std::span<const CandidatePair> retained,
                          std::span<const CandidatePair> candidates,
                          const GroundTruth &gt, double elapsed_seconds) {
  if (retained.size() > candidates.size()) {
    throw InvariantError("more retained pairs than candidates");
  }
  EvaluationReport r;
  for (const CandidatePair &pair : retained) {
    if (gt.Contains(pair.key())) {
      ++r.tp;
    } else {
      ++r.fp;
    }
  }
  const std::size_t positives = MatchesIn(candidates, gt);
  r.tn = (candidates.size() - positives) - r.fp;
  r.runtime_seconds = elapsed_seconds;
  r.candidates_in = candidates.size();
  r.candidates_out = retained.size();
  Finish(r, gt.size());
  return r;
}

EvaluationReport EvaluateIndices(std::span<const CandidatePair> candidates,
                                 std::span<const std::size_t> retained,
                                 const GroundTruth &gt,
                                 double elapsed_seconds) {
  EvaluationReport r;
  for (std::size_t k : retained) {
    if (k >= candidates.size()) {
      throw InvariantError("retained index out of range");
    }
    if (gt.Contains(candidates[k].key())) {
      ++r.tp;
    } else {
      ++r.fp;
    }
  }
  const std::size_t positives = MatchesIn(candidates, gt);
  r.tn = (candidates.size() - positives) - r.fp;
  r.runtime_seconds = elapsed_seconds;
  r.candidates_in = candidates.size();
  r.candidates_out = retained.size();
  Finish(r, gt.size());
  return r;
}

EvaluationReport Evaluate(const MetaBlockingResult &result,
                          const GroundTruth &gt) {
  EvaluationReport r = EvaluateIndices(result.scored, result.retained, gt,
                                       result.phases.total());
  r.phases = result.phases;
  return r;
}

AveragedReport Average(std::span<const EvaluationReport> reports) {
  AveragedReport a;
  a.runs = reports.size();
  if (reports.empty()) return a;
  for (const EvaluationReport &r : reports) {
    a.recall += r.recall;
    a.precision += r.precision;
    a.f1 += r.f1;
    a.runtime_seconds += r.runtime_seconds;
    a.candidates_out += static_cast<double>(r.candidates_out);
  }
  const double n = static_cast<double>(reports.size());
  a.recall /= n;
  a.precision /= n;
  a.f1 /= n;
  a.runtime_seconds /= n;
  a.candidates_out /= n;
  return a;
}

double Speedup(double candidates_small, double runtime_small,
               double candidates_large, double runtime_large) {
  if (candidates_small <= 0.0 || runtime_large <= 0.0) {
    throw UsageError("speedup needs positive |C_small| and RT_large");
  }
  return (candidates_large / candidates_small) *
         (runtime_small / runtime_large);
}

std::vector<std::uint32_t> AllSubsetMasks() {
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 1; m < (1u << std::size(kAllSchemes)); ++m) {
    masks.push_back(m);
  }
  return masks;
}

std::vector<SubsetResult> FeatureSubsetSearch(
    const BlockCollection &bc, std::span<const CandidatePair> candidates,
    const GroundTruth &gt, const MetaBlockingOptions &base,
    std::span<const std::uint64_t> seeds, std::span<const std::uint32_t> masks,
    const std::function<void(std::size_t, std::size_t)> &progress,
    unsigned threads) {
  if (seeds.empty()) throw UsageError("subset search needs at least one seed");
  std::vector<std::uint32_t> all;
  if (masks.empty()) {
    all = AllSubsetMasks();
    masks = all;
  }

  // Every subset projects the same full vectors.
  const FeatureSet layout = FeatureSet::All();
  std::vector<CandidatePair> featurized(candidates.begin(), candidates.end());
  Featurize(featurized, bc, layout);

  std::vector<std::optional<SubsetResult>> slots(masks.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  auto worker = [&] {
    std::vector<EvaluationReport> runs;
    for (std::size_t m = next++; m < masks.size(); m = next++) {
      MetaBlockingOptions options = base;
      options.features = FeatureSet::FromMask(masks[m]);
      runs.clear();
      for (std::uint64_t seed : seeds) {
        options.seed = seed;
        runs.push_back(Evaluate(
            RunMetaBlockingOnFeatures(bc, featurized, layout, gt, options),
            gt));
      }
      slots[m].emplace(SubsetResult{options.features, Average(runs)});
      std::lock_guard<std::mutex> lock(mu);
      ++done;
      if (progress) progress(done, masks.size());
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(
      threads, 1, std::max<std::size_t>(1, masks.size()));
  if (workers == 1) {
    worker();
  } else {
    // Exceptions from a worker surface once all threads have joined.
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        try {
          worker();
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
          next = masks.size();
        }
      });
    }
    for (std::thread &t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<SubsetResult> results;
  results.reserve(masks.size());
  for (auto &slot : slots) results.push_back(std::move(*slot));
  std::stable_sort(results.begin(), results.end(), RanksBefore);
  return results;
}

std::vector<SweepRow> TrainingSweep(const BlockCollection &bc,
                                    std::span<const CandidatePair> candidates,
                                    const GroundTruth &gt,
                                    const MetaBlockingOptions &base,
                                    std::span<const std::size_t> sizes,
                                    std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw UsageError("training sweep needs at least one seed");
  std::vector<CandidatePair> featurized(candidates.begin(), candidates.end());
  Featurize(featurized, bc, base.features);

  std::vector<SweepRow> rows;
  std::vector<EvaluationReport> runs;
  for (std::size_t size : sizes) {
    if (size < 2) throw UsageError("training size must be at least 2");
    MetaBlockingOptions options = base;
    options.per_class = size / 2;
    runs.clear();
    for (std::uint64_t seed : seeds) {
      options.seed = seed;
      runs.push_back(Evaluate(
          RunMetaBlockingOnFeatures(bc, featurized, base.features, gt, options),
          gt));
    }
    rows.push_back({size, Average(runs)});
  }
  return rows;
}

std::vector<std::uint64_t> DefaultSeeds() {
  std::vector<std::uint64_t> seeds(10);
  for (std::uint64_t s = 0; s < seeds.size(); ++s) seeds[s] = s;
  return seeds;
}

std::vector<std::size_t> DefaultSweepSizes() {
  std::vector<std::size_t> sizes = {20};
  for (std::size_t s = 50; s <= 500; s += 50) sizes.push_back(s);
  return sizes;
}

std::vector<DensityRow> ProbabilityDensity(
    std::span<const CandidatePair> scored, const GroundTruth &gt,
    double bucket_width) {
  if (!(bucket_width > 0.0 && bucket_width <= 1.0)) {
    throw UsageError("bucket width must lie in (0, 1]");
  }
  const auto buckets =
      static_cast<std::size_t>(std::ceil(1.0 / bucket_width - 1e-9));
  std::map<std::size_t, DensityRow> hist;
  for (const CandidatePair &pair : scored) {
    if (!pair.probability) throw InvariantError("density of an unscored pair");
    const double p = std::clamp(*pair.probability, 0.0, 1.0);
    const std::size_t b = std::min(
        static_cast<std::size_t>(std::floor(p / bucket_width)), buckets - 1);
    DensityRow &row = hist[b];
    if (gt.Contains(pair.key())) {
      ++row.matching;
    } else {
      ++row.non_matching;
    }
  }
  std::vector<DensityRow> rows;
  for (auto &[b, row] : hist) {
    row.low = static_cast<double>(b) * bucket_width;
    row.high = std::min(1.0, static_cast<double>(b + 1) * bucket_width);
    rows.push_back(row);
  }
  return rows;
}

std::vector<CommonBlockRow> CommonBlockDistribution(const BlockCollection &bc,
                                                    const GroundTruth &gt) {
  const WeightingContext ctx(bc, /*with_lcp=*/false);
  std::map<std::size_t, std::size_t> counts;
  for (std::uint64_t key : gt.SortedKeys()) {
    const auto [i, j] = UnpackPairKey(key);
    ++counts[ctx.Common(i, j).count];
  }
  std::vector<CommonBlockRow> rows;
  for (const auto &[common, n] : counts) {
    rows.push_back(
        {common, n, static_cast<double>(n) / static_cast<double>(gt.size())});
  }
  return rows;
}

void WriteDensityCsv(std::ostream &out, std::span<const DensityRow> rows) {
  out << "low,high,matching,non_matching\n";
  for (const DensityRow &r : rows) {
    out << Number(r.low) << ',' << Number(r.high) << ',' << r.matching << ','
        << r.non_matching << '\n';
  }
}

void WriteNodeThresholdsCsv(std::ostream &out, const NodeThresholds &t,
                            std::span<const std::string> keys) {
  out << "entity,mean,max\n";
  for (std::size_t e = 0; e < t.mean.size(); ++e) {
    // Entities without a valid pair have no threshold.
    if (std::isnan(t.mean[e])) continue;
    const std::string name = e < keys.size() ? keys[e] : std::to_string(e);
    out << CsvEscape(name) << ',' << Number(t.mean[e]) << ','
        << Number(t.max[e]) << '\n';
  }
}

void WriteCommonBlockCsv(std::ostream &out,
                         std::span<const CommonBlockRow> rows) {
  out << "common_blocks,duplicates,fraction\n";
  for (const CommonBlockRow &r : rows) {
    out << r.common_blocks << ',' << r.duplicates << ',' << Number(r.fraction)
        << '\n';
  }
}

void WriteSubsetSearchCsv(std::ostream &out,
                          std::span<const SubsetResult> rows) {
  out << "rank,features,dimension,recall,precision,f1,runtime_seconds\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const SubsetResult &r = rows[k];
    out << k + 1 << ',' << CsvEscape(r.features.ToString()) << ','
        << r.features.dimension() << ',' << Number(r.mean.recall) << ','
        << Number(r.mean.precision) << ',' << Number(r.mean.f1) << ','
        << Number(r.mean.runtime_seconds) << '\n';
  }
}

void WriteSweepCsv(std::ostream &out, std::span<const SweepRow> rows) {
  out << "labelled,recall,precision,f1,runtime_seconds\n";
  for (const SweepRow &r : rows) {
    out << r.labelled << ',' << Number(r.mean.recall) << ','
        << Number(r.mean.precision) << ',' << Number(r.mean.f1) << ','
        << Number(r.mean.runtime_seconds) << '\n';
  }
}

}  // namespace metablock
