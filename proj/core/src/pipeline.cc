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

#include "metablock/pipeline.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <utility>

#include "metablock/blocking.h"
#include "metablock/error.h"

namespace metablock {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::ordered_json;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::ofstream OpenOutput(const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void Close(std::ofstream &out, const std::filesystem::path &path) {
  out.close();
  if (!out) throw DataError("error writing " + path.string());
}

std::string ProbabilityText(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", p);
  return buf;
}

ordered_json Effectiveness(const EvaluationReport &r) {
  ordered_json j;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["tn"] = r.tn;
  j["fn"] = r.fn;
  j["recall"] = r.recall;
  j["precision"] = r.precision;
  j["f1"] = r.f1;
  j["candidates_in"] = r.candidates_in;
  j["candidates_out"] = r.candidates_out;
  return j;
}

std::filesystem::path Sibling(const std::filesystem::path &path,
                              std::string_view suffix) {
  std::filesystem::path out = path;
  out.replace_filename(path.stem().string() + std::string(suffix) +
                       path.extension().string());
  return out;
}

}  // namespace

bool ApplyPreset(std::string_view name, PipelineConfig &config) {
  if (name == "blast-50") {
    config.algorithm = PruningAlgorithm::kBlast;
    config.features = FeatureSet::Blast();
    config.per_class = 25;
    config.per_class_percent.reset();
  } else if (name == "rcnp-50") {
    config.algorithm = PruningAlgorithm::kRcnp;
    config.features = FeatureSet::Rcnp();
    config.per_class = 25;
    config.per_class_percent.reset();
  } else if (name == "legacy-bcl") {
    config.algorithm = PruningAlgorithm::kBcl;
    config.features = FeatureSet::Legacy();
    config.per_class_percent = 5.0;
  } else {
    return false;
  }
  return true;
}

std::vector<std::string> PresetNames() {
  return {"blast-50", "rcnp-50", "legacy-bcl"};
}

std::size_t ResolvePerClass(const PipelineConfig &config,
                            std::size_t num_duplicates) {
  if (!config.per_class_percent) {
    if (config.per_class == 0) throw UsageError("per-class count must be > 0");
    return config.per_class;
  }
  const double pct = *config.per_class_percent;
  if (!(pct > 0.0 && pct <= 100.0)) {
    throw UsageError("per-class percentage must lie in (0, 100]");
  }
  const double n = std::ceil(pct / 100.0 * static_cast<double>(num_duplicates));
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

const std::string &PreparedData::Key(EntityId id) const {
  return id < e1.size() ? e1.keys[id] : e2.keys[id - e1.size()];
}

PreparedData LoadInputs(const PipelineConfig &config) {
  if (config.e1.empty()) throw UsageError("no input collection given");
  if (config.gt.empty()) throw UsageError("no ground truth given");
  if (config.dirty && !config.e2.empty()) {
    throw UsageError("Dirty ER takes a single collection");
  }
  if (!config.dirty && config.e2.empty()) {
    throw UsageError("Clean-Clean ER needs a second collection");
  }
  auto options_for = [&](const std::filesystem::path &path) {
    IngestOptions options;
    options.format = config.format.value_or(GuessInputFormat(path));
    options.key_column = config.key_column;
    return options;
  };

  PreparedData data;
  if (config.dirty) {
    data.e1 = Ingest(config.e1, Source::kDirty, options_for(config.e1));
    data.gt = LoadGroundTruth(config.gt, data.e1, nullptr);
  } else {
    data.e1 = Ingest(config.e1, Source::kE1, options_for(config.e1));
    data.e2 = Ingest(config.e2, Source::kE2, options_for(config.e2));
    data.gt = LoadGroundTruth(config.gt, data.e1, &data.e2);
  }
  if (data.gt.empty()) throw DataError("ground truth holds no duplicates");
  return data;
}

void RunBlocking(PreparedData &data, double filter_ratio) {
  const auto start = Clock::now();
  const ErMode mode = data.gt.mode();
  BlockCollection tokens =
      TokenBlocking(mode, data.e1.profiles, data.e2.profiles);
  BlockCollection purged = BlockPurging(tokens);
  data.blocks = BlockFiltering(purged, filter_ratio);
  data.candidates = ExtractCandidates(data.blocks);
  data.blocking.seconds = SecondsSince(start);
  data.blocking.token_blocks = tokens.size();
  data.blocking.purged_blocks = purged.size();
  data.blocking.filtered_blocks = data.blocks.size();
  data.blocking.filtered_cardinality = data.blocks.stats().total_cardinality;
  data.blocking.candidates =
      Evaluate(data.candidates, data.candidates, data.gt);
}

PipelineResult RunPipeline(const PreparedData &data,
                           const PipelineConfig &config) {
  const std::size_t per_class = ResolvePerClass(config, data.gt.size());
  MetaBlockingOptions options;
  options.features = config.features;
  options.algorithm = config.algorithm;
  options.per_class = per_class;
  options.seed = config.seed;
  options.blast_ratio = config.blast_ratio;
  options.training = config.training;
  PipelineResult result{
      data.blocking,
      RunMetaBlocking(data.blocks, data.candidates, data.gt, options),
      {},
      per_class};
  result.report = Evaluate(result.meta, data.gt);
  return result;
}

std::string ReportJson(const PipelineConfig &config, const PreparedData &data,
                       const PipelineResult &result) {
  ordered_json j;
  ordered_json &c = j["config"];
  c["mode"] = ErModeName(data.gt.mode());
  c["algorithm"] = PruningAlgorithmName(config.algorithm);
  c["features"] = config.features.ToString();
  c["per_class"] = result.per_class;
  c["seed"] = config.seed;
  c["blast_ratio"] = config.blast_ratio;
  c["filter_ratio"] = config.filter_ratio;

  ordered_json &d = j["data"];
  d["e1_profiles"] = data.e1.size();
  d["e2_profiles"] = data.e2.size();
  d["duplicates"] = data.gt.size();

  const BlockingSummary &b = result.blocking;
  ordered_json &bj = j["blocking"];
  bj["token_blocks"] = b.token_blocks;
  bj["purged_blocks"] = b.purged_blocks;
  bj["filtered_blocks"] = b.filtered_blocks;
  bj["filtered_cardinality"] = b.filtered_cardinality;
  bj["candidates"] = data.candidates.size();
  bj["pairs_completeness"] = b.candidates.recall;
  bj["pairs_quality"] = b.candidates.precision;

  ordered_json &m = j["meta_blocking"];
  m = Effectiveness(result.report);
  m["edge_budget"] = result.meta.pruning.edge_budget;
  m["node_budget"] = result.meta.pruning.node_budget;

  const TrainedModel &model = result.meta.model;
  ordered_json &mj = j["model"];
  mj["weights"] =
      std::vector<double>(model.weights().begin(), model.weights().end());
  mj["intercept"] = model.intercept();

  const PhaseTimes &t = result.meta.phases;
  ordered_json &r = j["runtime"];
  r["blocking_seconds"] = b.seconds;
  r["featurize_seconds"] = t.featurize;
  r["train_seconds"] = t.train;
  r["predict_seconds"] = t.predict;
  r["prune_seconds"] = t.prune;
  r["total_seconds"] = t.total();
  return j.dump(2) + "\n";
}

PipelineResult RunAll(const PipelineConfig &config,
                      const std::function<void(const std::string &)> &log) {
  auto note = [&](const std::string &line) {
    if (log) log(line);
  };
  if (!(config.filter_ratio >= 0.0 && config.filter_ratio < 1.0)) {
    throw UsageError("filter ratio must lie in [0, 1)");
  }
  PreparedData data = LoadInputs(config);
  note("loaded " + std::to_string(data.e1.size()) + " + " +
       std::to_string(data.e2.size()) + " profiles, " +
       std::to_string(data.gt.size()) + " duplicates");
  RunBlocking(data, config.filter_ratio);
  note("blocking: " + std::to_string(data.blocks.size()) + " blocks, " +
       std::to_string(data.candidates.size()) + " candidates, recall " +
       ProbabilityText(data.blocking.candidates.recall));

  PipelineResult result = RunPipeline(data, config);
  note(std::string(PruningAlgorithmName(config.algorithm)) + ": recall " +
       ProbabilityText(result.report.recall) + ", precision " +
       ProbabilityText(result.report.precision) + ", f1 " +
       ProbabilityText(result.report.f1));

  const std::string report = ReportJson(config, data, result);
  if (config.report.empty()) {
    note(report);
  } else {
    std::ofstream out = OpenOutput(config.report);
    out << report;
    Close(out, config.report);
  }

  if (!config.export_density.empty()) {
    const auto &scored = result.meta.scored;
    std::ofstream out = OpenOutput(config.export_density);
    WriteDensityCsv(out, ProbabilityDensity(scored, data.gt));
    Close(out, config.export_density);

    std::vector<std::string> keys;
    keys.reserve(data.blocks.num_entities());
    for (EntityId e = 0; e < data.blocks.num_entities(); ++e) {
      keys.push_back(data.Key(e));
    }
    const auto nodes_path = Sibling(config.export_density, "_nodes");
    std::ofstream nodes = OpenOutput(nodes_path);
    WriteNodeThresholdsCsv(
        nodes, ComputeNodeThresholds(scored, data.blocks.num_entities()), keys);
    Close(nodes, nodes_path);
  }

  if (!config.export_block_dist.empty()) {
    std::ofstream out = OpenOutput(config.export_block_dist);
    WriteCommonBlockCsv(out, CommonBlockDistribution(data.blocks, data.gt));
    Close(out, config.export_block_dist);
  }

  if (!config.export_pairs.empty()) {
    std::ofstream out = OpenOutput(config.export_pairs);
    WriteCsvRow(out, {"key_i", "key_j", "probability"});
    for (std::size_t k : result.meta.retained) {
      const CandidatePair &pair = result.meta.scored[k];
      WriteCsvRow(out, {data.Key(pair.i), data.Key(pair.j),
                        ProbabilityText(*pair.probability)});
    }
    Close(out, config.export_pairs);
  }

  if (!config.model_out.empty()) {
    std::ofstream out = OpenOutput(config.model_out);
    out << result.meta.model.ToJson() << '\n';
    Close(out, config.model_out);
  }

  MetaBlockingOptions base;
  base.algorithm = config.algorithm;
  base.features = config.features;
  base.per_class = result.per_class;
  base.blast_ratio = config.blast_ratio;
  base.training = config.training;

  if (!config.subset_search.empty()) {
    const auto rows = FeatureSubsetSearch(
        data.blocks, data.candidates, data.gt, base, config.seeds, {},
        [&](std::size_t done, std::size_t total) {
          if (done % 32 == 0 || done == total) {
            note("subset search " + std::to_string(done) + "/" +
                 std::to_string(total));
          }
        },
        config.threads);
    std::ofstream out = OpenOutput(config.subset_search);
    WriteSubsetSearchCsv(out, rows);
    Close(out, config.subset_search);
  }

  if (!config.training_sweep.empty()) {
    const auto rows = TrainingSweep(data.blocks, data.candidates, data.gt, base,
                                    config.sweep_sizes, config.seeds);
    std::ofstream out = OpenOutput(config.training_sweep);
    WriteSweepCsv(out, rows);
    Close(out, config.training_sweep);
  }
  return result;
}

}  // namespace metablock
