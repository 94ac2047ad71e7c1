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

#include "cli.h"

#include <CLI11.hpp>
#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "metablock/error.h"
#include "metablock/pipeline.h"

namespace metablock {
namespace {

// "25" or "5%".
void ParsePerClass(const std::string &text, PipelineConfig &config) {
  std::string digits = text;
  const bool percent = !digits.empty() && digits.back() == '%';
  if (percent) digits.pop_back();
  try {
    std::size_t used = 0;
    if (percent) {
      const double pct = std::stod(digits, &used);
      if (used != digits.size()) throw std::invalid_argument(text);
      config.per_class_percent = pct;
    } else {
      const unsigned long long n = std::stoull(digits, &used);
      if (used != digits.size() || digits.front() == '-') {
        throw std::invalid_argument(text);
      }
      config.per_class = n;
      config.per_class_percent.reset();
    }
  } catch (const std::logic_error &) {
    throw UsageError("--per-class expects a count or a percentage, got '" +
                     text + "'");
  }
}

int ExitFor(const Error &e) {
  switch (e.kind()) {
    case ErrorKind::kUsage:
      return kExitUsage;
    case ErrorKind::kData:
      return kExitData;
    case ErrorKind::kInvariant:
      return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Supervised meta-blocking for entity resolution"};
  app.set_config("--config", "", "TOML/INI file with flag values");
  app.set_version_flag("--version", "metablock 0.1.0");

  // Raw values; each overrides the preset only when given.
  std::string e1, e2, gt, preset, format, key_column, algorithm, features,
      per_class, report, density, block_dist, pairs, model_out, subsets, sweep;
  bool dirty = false, quiet = false;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  double blast_ratio = 0, filter_ratio = 0;
  std::vector<std::size_t> sweep_sizes;
  std::vector<std::uint64_t> seeds;

  app.add_option("--e1", e1, "First collection (or the only one, Dirty ER)");
  app.add_option("--e2", e2, "Second collection (Clean-Clean ER)");
  app.add_flag("--dirty", dirty, "Deduplicate a single collection");
  app.add_option("--gt", gt, "Ground truth: two-column CSV of record keys");
  app.add_option("--preset", preset, "blast-50, rcnp-50 or legacy-bcl");
  app.add_option("--format", format, "csv or jsonl (default: by extension)");
  app.add_option("--key-column", key_column,
                 "Record key column (default: first CSV column, JSON 'id')");
  app.add_option("--algorithm", algorithm,
                 "BCl, WEP, WNP, RWNP, BLAST, CEP, CNP or RCNP");
  app.add_option("--features", features,
                 "Comma-separated weighting schemes, e.g. CF-IBF,RACCB,RS,NRS");
  app.add_option("--per-class", per_class,
                 "Labelled instances per class: a count or 'P%' of |D|");
  app.add_option("--seed", seed, "Sampling seed");
  app.add_option("--blast-ratio", blast_ratio, "BLAST pruning ratio r");
  app.add_option("--filter-ratio", filter_ratio, "Block Filtering ratio");
  app.add_option("--report", report, "Write the JSON report here");
  app.add_option("--export-density", density,
                 "Probability density CSV (node thresholds go to *_nodes)");
  app.add_option("--export-block-dist", block_dist,
                 "Common-block distribution of the duplicates, CSV");
  app.add_option("--export-pairs", pairs, "Retained pairs CSV");
  app.add_option("--model-out", model_out, "Trained model JSON");
  app.add_option("--subset-search", subsets,
                 "Run the 255-subset feature search, write CSV here");
  app.add_option("--training-sweep", sweep,
                 "Run the training-size sweep, write CSV here");
  app.add_option("--sweep-sizes", sweep_sizes, "Training sizes for the sweep")
      ->delimiter(',');
  app.add_option("--seeds", seeds, "Seeds averaged by search and sweep")
      ->delimiter(',');
  app.add_option("--threads", threads, "Workers for the subset search");
  app.add_flag("--quiet", quiet, "No progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto given = [&](const char *name) { return app.count(name) > 0; };
  try {
    PipelineConfig config;
    if (given("--preset") && !ApplyPreset(preset, config)) {
      throw UsageError("unknown preset '" + preset + "'");
    }
    config.e1 = e1;
    config.e2 = e2;
    config.gt = gt;
    config.dirty = dirty;
    config.key_column = key_column;
    if (given("--format")) {
      config.format = ParseInputFormat(format);
      if (!config.format) throw UsageError("unknown format '" + format + "'");
    }
    if (given("--algorithm")) {
      const auto a = ParsePruningAlgorithm(algorithm);
      if (!a) throw UsageError("unknown algorithm '" + algorithm + "'");
      config.algorithm = *a;
    }
    if (given("--features")) config.features = FeatureSet::Parse(features);
    if (given("--per-class")) ParsePerClass(per_class, config);
    if (given("--seed")) config.seed = seed;
    if (given("--blast-ratio")) config.blast_ratio = blast_ratio;
    if (given("--filter-ratio")) config.filter_ratio = filter_ratio;
    if (given("--sweep-sizes")) config.sweep_sizes = sweep_sizes;
    if (given("--seeds")) config.seeds = seeds;
    if (given("--threads")) config.threads = threads;
    config.report = report;
    config.export_density = density;
    config.export_block_dist = block_dist;
    config.export_pairs = pairs;
    config.model_out = model_out;
    config.subset_search = subsets;
    config.training_sweep = sweep;

    RunAll(config, [&](const std::string &line) {
      if (line.empty()) return;
      // The report itself is printed even when quiet.
      if (!quiet || (config.report.empty() && line.front() == '{')) {
        out << line << (line.back() == '\n' ? "" : "\n");
      }
    });
    return kExitOk;
  } catch (const Error &e) {
    err << "metablock: " << e.what() << '\n';
    return ExitFor(e);
  } catch (const std::exception &e) {
    err << "metablock: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace metablock
