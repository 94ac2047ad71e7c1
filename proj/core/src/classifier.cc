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

#include "metablock/classifier.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <nlohmann/json.hpp>
#include <random>
#include <utility>

#include "metablock/error.h"

namespace metablock {
namespace {

constexpr const char *kModelFormat = "metablock-logistic-model";
constexpr int kModelVersion = 1;

std::string PairName(EntityId i, EntityId j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

std::vector<std::size_t> SampleTrainingIndices(
    std::span<const CandidatePair> candidates, const GroundTruth &gt,
    std::size_t per_class, std::uint64_t seed) {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    (gt.Contains(candidates[k].i, candidates[k].j) ? positives : negatives)
        .push_back(k);
  }
  if (positives.size() < per_class) {
    throw DataError("training sample needs " + std::to_string(per_class) +
                    " positive pairs but the candidates hold only " +
                    std::to_string(positives.size()));
  }
  if (negatives.size() < per_class) {
    throw DataError("training sample needs " + std::to_string(per_class) +
                    " negative pairs but the candidates hold only " +
                    std::to_string(negatives.size()));
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  chosen.reserve(2 * per_class);
  std::sample(positives.begin(), positives.end(), std::back_inserter(chosen),
              per_class, rng);
  std::sample(negatives.begin(), negatives.end(), std::back_inserter(chosen),
              per_class, rng);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

TrainingSet MakeTrainingSet(std::span<const CandidatePair> candidates,
                            std::span<const std::size_t> indices,
                            const GroundTruth &gt, std::uint64_t seed,
                            std::span<const std::size_t> columns) {
  TrainingSet ts;
  ts.seed = seed;
  ts.instances.reserve(indices.size());
  for (std::size_t k : indices) {
    const CandidatePair &pair = candidates[k];
    if (pair.features.empty()) {
      throw InvariantError("training pair " + PairName(pair.i, pair.j) +
                           " has no features");
    }
    TrainingInstance instance;
    instance.i = pair.i;
    instance.j = pair.j;
    instance.positive = gt.Contains(pair.i, pair.j);
    if (columns.empty()) {
      instance.features = pair.features;
    } else {
      instance.features.reserve(columns.size());
      for (std::size_t c : columns)
        instance.features.push_back(pair.features[c]);
    }
    (instance.positive ? ts.positives : ts.negatives) += 1;
    ts.instances.push_back(std::move(instance));
  }
  return ts;
}

TrainingSet SampleTraining(std::span<const CandidatePair> candidates,
                           const GroundTruth &gt, std::size_t per_class,
                           std::uint64_t seed) {
  const auto indices = SampleTrainingIndices(candidates, gt, per_class, seed);
  return MakeTrainingSet(candidates, indices, gt, seed);
}

TrainedModel::TrainedModel(FeatureSet feature_set,
                           std::vector<SlotNormalization> normalization,
                           std::vector<double> weights, double intercept,
                           std::uint64_t seed)
    : feature_set_(std::move(feature_set)),
      normalization_(std::move(normalization)),
      weights_(std::move(weights)),
      intercept_(intercept),
      seed_(seed) {
  const std::size_t d = feature_set_.dimension();
  if (weights_.size() != d || normalization_.size() != d) {
    throw UsageError("model has " + std::to_string(weights_.size()) +
                     " weights and " + std::to_string(normalization_.size()) +
                     " normalization slots but feature set " +
                     feature_set_.ToString() + " needs " + std::to_string(d));
  }
}

double TrainedModel::Logit(std::span<const double> features) const {
  if (features.size() != weights_.size()) {
    throw UsageError("feature vector has " + std::to_string(features.size()) +
                     " slots but the model expects " +
                     std::to_string(weights_.size()) + " (" +
                     feature_set_.ToString() + ")");
  }
  double z = intercept_;
  for (std::size_t s = 0; s < weights_.size(); ++s) {
    z += weights_[s] * normalization_[s].Apply(features[s]);
  }
  return z;
}

double TrainedModel::Probability(std::span<const double> features) const {
  return Sigmoid(Logit(features));
}

std::string TrainedModel::ToJson() const {
  nlohmann::json features = nlohmann::json::array();
  for (Scheme s : feature_set_.schemes()) features.push_back(SchemeName(s));
  nlohmann::json slots = nlohmann::json::array();
  for (FeatureId id : feature_set_.Slots()) slots.push_back(FeatureName(id));
  nlohmann::json norm = nlohmann::json::array();
  for (const SlotNormalization &n : normalization_) {
    norm.push_back({{"mean", n.mean}, {"stddev", n.stddev}});
  }
  nlohmann::json doc = {
      {"format", kModelFormat},  {"version", kModelVersion},
      {"feature_set", features}, {"slots", slots},
      {"normalization", norm},   {"weights", weights_},
      {"intercept", intercept_}, {"seed", seed_},
  };
  return doc.dump(2);
}

TrainedModel TrainedModel::FromJson(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("model is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) {
      throw DataError("not a metablock model record");
    }
    if (doc.at("version").get<int>() != kModelVersion) {
      throw DataError("unsupported model version " + doc.at("version").dump());
    }
    std::vector<Scheme> schemes;
    for (const auto &name : doc.at("feature_set")) {
      auto scheme = ParseScheme(name.get<std::string>());
      if (!scheme) throw DataError("unknown scheme in model: " + name.dump());
      schemes.push_back(*scheme);
    }
    std::vector<SlotNormalization> norm;
    for (const auto &n : doc.at("normalization")) {
      norm.push_back(
          {n.at("mean").get<double>(), n.at("stddev").get<double>()});
    }
    return TrainedModel(FeatureSet(std::move(schemes)), std::move(norm),
                        doc.at("weights").get<std::vector<double>>(),
                        doc.at("intercept").get<double>(),
                        doc.at("seed").get<std::uint64_t>());
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("malformed model record: ") + e.what());
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::kData) throw;
    throw DataError(std::string("inconsistent model record: ") + e.what());
  }
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LogisticObjective::LogisticObjective(std::vector<std::vector<double>> rows,
                                     std::vector<double> labels, double l2)
    : rows_(std::move(rows)),
      labels_(std::move(labels)),
      l2_(l2),
      dimension_(rows_.empty() ? 0 : rows_.front().size()) {
  if (rows_.size() != labels_.size()) {
    throw InvariantError("objective has mismatched rows and labels");
  }
}

double LogisticObjective::Loss(std::span<const double> params) const {
  const double b = params[dimension_];
  double loss = 0.0;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    double z = b;
    for (std::size_t s = 0; s < dimension_; ++s) z += params[s] * rows_[r][s];
    // -[y log p + (1-y) log(1-p)] = softplus(z) - y z
    loss += Softplus(z) - labels_[r] * z;
  }
  loss /= static_cast<double>(rows_.size());
  double penalty = 0.0;
  for (std::size_t s = 0; s < dimension_; ++s) penalty += params[s] * params[s];
  return loss + 0.5 * l2_ * penalty;
}

std::vector<double> LogisticObjective::Gradient(
    std::span<const double> params) const {
  std::vector<double> grad(dimension_ + 1, 0.0);
  const double b = params[dimension_];
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    double z = b;
    for (std::size_t s = 0; s < dimension_; ++s) z += params[s] * rows_[r][s];
    const double residual = Sigmoid(z) - labels_[r];
    for (std::size_t s = 0; s < dimension_; ++s) {
      grad[s] += residual * rows_[r][s];
    }
    grad[dimension_] += residual;
  }
  const double n = static_cast<double>(rows_.size());
  for (double &g : grad) g /= n;
  for (std::size_t s = 0; s < dimension_; ++s) grad[s] += l2_ * params[s];
  return grad;
}

std::vector<SlotNormalization> FitNormalization(const TrainingSet &ts,
                                                std::size_t dimension) {
  std::vector<SlotNormalization> norm(dimension);
  const double n = static_cast<double>(ts.instances.size());
  for (std::size_t s = 0; s < dimension; ++s) {
    double mean = 0.0;
    for (const auto &inst : ts.instances) mean += inst.features[s];
    mean /= n;
    double var = 0.0;
    for (const auto &inst : ts.instances) {
      const double d = inst.features[s] - mean;
      var += d * d;
    }
    var /= n;
    double stddev = std::sqrt(var);
    // Columns constant up to rounding are treated as constant.
    if (stddev <= 1e-12 * std::max(1.0, std::abs(mean))) stddev = 0.0;
    norm[s] = {mean, stddev};
  }
  return norm;
}

TrainedModel Train(const TrainingSet &ts, const FeatureSet &fs,
                   const TrainingOptions &options) {
  const std::size_t d = fs.dimension();
  if (ts.instances.empty()) throw UsageError("training set is empty");
  for (const auto &inst : ts.instances) {
    if (inst.features.size() != d) {
      throw UsageError("training pair " + PairName(inst.i, inst.j) + " has " +
                       std::to_string(inst.features.size()) +
                       " features; feature set " + fs.ToString() + " needs " +
                       std::to_string(d));
    }
    for (std::size_t s = 0; s < d; ++s) {
      if (!std::isfinite(inst.features[s])) {
        throw DataError("training pair " + PairName(inst.i, inst.j) +
                        " has a non-finite " + FeatureName(fs.Slots()[s]) +
                        " value");
      }
    }
  }

  std::vector<SlotNormalization> norm = FitNormalization(ts, d);
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  rows.reserve(ts.instances.size());
  for (const auto &inst : ts.instances) {
    std::vector<double> row(d);
    for (std::size_t s = 0; s < d; ++s)
      row[s] = norm[s].Apply(inst.features[s]);
    rows.push_back(std::move(row));
    labels.push_back(inst.positive ? 1.0 : 0.0);
  }
  const LogisticObjective objective(std::move(rows), std::move(labels),
                                    options.l2);

  std::vector<double> params(d + 1, 0.0);
  double loss = objective.Loss(params);
  for (int it = 0; it < options.max_iterations; ++it) {
    const std::vector<double> grad = objective.Gradient(params);
    for (std::size_t s = 0; s <= d; ++s) {
      params[s] -= options.learning_rate * grad[s];
    }
    const double next = objective.Loss(params);
    const bool converged = std::abs(loss - next) < options.tolerance;
    loss = next;
    if (converged) break;
  }

  const double intercept = params[d];
  params.pop_back();
  return TrainedModel(fs, std::move(norm), std::move(params), intercept,
                      ts.seed);
}

double Predict(const TrainedModel &model, CandidatePair &pair) {
  const double p = model.Probability(pair.features);
  pair.probability = p;
  return p;
}

void PredictAll(const TrainedModel &model, std::span<CandidatePair> pairs) {
  for (CandidatePair &pair : pairs) Predict(model, pair);
}

}  // namespace metablock
