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

#ifndef METABLOCK_CLASSIFIER_H_
#define METABLOCK_CLASSIFIER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metablock/types.h"
#include "metablock/weighting.h"

namespace metablock {

struct TrainingInstance {
  EntityId i = 0;
  EntityId j = 0;
  std::vector<double> features;
  bool positive = false;
};

// Balanced labelled sample: positives == negatives.
struct TrainingSet {
  std::vector<TrainingInstance> instances;
  std::uint64_t seed = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

// Draws `per_class` positive and `per_class` negative candidates uniformly
// without replacement and returns their indices into `candidates`, in
// ascending order. Deterministic in (candidates, gt, per_class, seed).
// Throws a data error naming the class that falls short.
std::vector<std::size_t> SampleTrainingIndices(
    std::span<const CandidatePair> candidates, const GroundTruth &gt,
    std::size_t per_class, std::uint64_t seed);

// As above, copying the features of the drawn pairs. The pairs must already
// be featurized.
TrainingSet SampleTraining(std::span<const CandidatePair> candidates,
                           const GroundTruth &gt, std::size_t per_class,
                           std::uint64_t seed);

// Builds a training set from already chosen indices, optionally keeping only
// the feature columns listed in `columns` (all columns when empty).
TrainingSet MakeTrainingSet(std::span<const CandidatePair> candidates,
                            std::span<const std::size_t> indices,
                            const GroundTruth &gt, std::uint64_t seed,
                            std::span<const std::size_t> columns = {});

// z-score parameters for one slot. A zero stddev marks a constant training
// column, which is passed through unscaled.
struct SlotNormalization {
  double mean = 0.0;
  double stddev = 1.0;

  bool passthrough() const { return stddev == 0.0; }
  double Apply(double x) const {
    return passthrough() ? x : (x - mean) / stddev;
  }
  bool operator==(const SlotNormalization &) const = default;
};

struct TrainingOptions {
  double learning_rate = 0.1;
  int max_iterations = 5000;
  // Stop once the objective changes by less than this between iterations.
  double tolerance = 1e-8;
  // L2 penalty on the weights (not the intercept).
  double l2 = 1e-4;
};

// Logistic regression over standardized feature vectors.
class TrainedModel {
 public:
  TrainedModel(FeatureSet feature_set,
               std::vector<SlotNormalization> normalization,
               std::vector<double> weights, double intercept,
               std::uint64_t seed = 0);

  const FeatureSet &feature_set() const { return feature_set_; }
  std::span<const SlotNormalization> normalization() const {
    return normalization_;
  }
  std::span<const double> weights() const { return weights_; }
  double intercept() const { return intercept_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t dimension() const { return weights_.size(); }

  // w . normalize(x) + b. Throws on a dimension mismatch.
  double Logit(std::span<const double> features) const;
  double Probability(std::span<const double> features) const;

  // Versioned JSON record. FromJson rejects unknown versions and layouts
  // whose lengths disagree.
  std::string ToJson() const;
  static TrainedModel FromJson(std::string_view json);

  bool operator==(const TrainedModel &) const = default;

 private:
  FeatureSet feature_set_;
  std::vector<SlotNormalization> normalization_;
  std::vector<double> weights_;
  double intercept_;
  std::uint64_t seed_;
};

// Numerically stable logistic function.
double Sigmoid(double z);

// Mean log-loss plus (l2 / 2) * |w|^2 over standardized rows. Parameters are
// laid out as [w_0 .. w_{d-1}, intercept].
class LogisticObjective {
 public:
  LogisticObjective(std::vector<std::vector<double>> rows,
                    std::vector<double> labels, double l2);

  std::size_t dimension() const { return dimension_; }
  double Loss(std::span<const double> params) const;
  std::vector<double> Gradient(std::span<const double> params) const;

 private:
  std::vector<std::vector<double>> rows_;
  std::vector<double> labels_;
  double l2_;
  std::size_t dimension_;
};

// z-score statistics of each column of `ts`.
std::vector<SlotNormalization> FitNormalization(const TrainingSet &ts,
                                                std::size_t dimension);

// Full-batch gradient descent from the origin. Deterministic in (ts, fs,
// options). Throws a data error listing the pair when a feature is not
// finite, and a usage error when ts is empty or mis-sized.
TrainedModel Train(const TrainingSet &ts, const FeatureSet &fs,
                   const TrainingOptions &options = {});

// Scores the pair and stores the probability on it.
double Predict(const TrainedModel &model, CandidatePair &pair);
void PredictAll(const TrainedModel &model, std::span<CandidatePair> pairs);

}  // namespace metablock

#endif  // METABLOCK_CLASSIFIER_H_
