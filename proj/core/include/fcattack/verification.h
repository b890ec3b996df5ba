// Copyright 2026 The fcattack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FCATTACK_VERIFICATION_H_
#define FCATTACK_VERIFICATION_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcattack/corpus.h"
#include "fcattack/retrieval.h"

namespace fcattack {

struct SparseFeature {
  uint32_t index = 0;
  double value = 0.0;

  bool operator==(const SparseFeature&) const = default;
};
// Sorted by index, no duplicate indices, no explicit zeros.
using SparseVector = std::vector<SparseFeature>;

// Claim/evidence pair features. The first `hash_dim` slots hold hashed
// n-gram and cross-product indicators; a fixed block of dense slots follows
// (overlap ratio and buckets, negation markers, entity presence, length
// buckets).
class PairFeaturizer {
 public:
  // Dense slot layout after the hashed block.
  enum DenseSlot : uint32_t {
    kOverlapRatio = 0,
    kOverlapNone,
    kOverlapLow,
    kOverlapMid,
    kOverlapHigh,
    kOverlapFull,
    kClaimNegation,
    kEvidenceNegation,
    kEvidenceNegationFullOverlap,
    kEvidenceNegationHighOverlap,
    // How many of the claim's entity tokens the evidence contains.
    kEntityAllPresent,
    kEntitySomeMissing,
    kEntityAllMissing,
    kClaimLength0,  // 5 claim length buckets
    kEvidenceLength0 = kClaimLength0 + 5,  // 5 evidence length buckets
    kDenseSlotCount = kEvidenceLength0 + 5,
  };

  PairFeaturizer(uint32_t hash_dim, uint64_t hash_seed);

  uint32_t hash_dim() const { return hash_dim_; }
  uint64_t hash_seed() const { return hash_seed_; }
  uint32_t dimension() const { return hash_dim_ + kDenseSlotCount; }
  uint32_t DenseIndex(uint32_t slot) const { return hash_dim_ + slot; }

  SparseVector operator()(std::string_view claim, std::string_view evidence) const;

  // Fraction of the claim's distinct normalized tokens found in the evidence.
  static double OverlapRatio(std::string_view claim, std::string_view evidence);

 private:
  uint32_t Hash(std::string_view feature) const;

  uint32_t hash_dim_;
  uint64_t hash_seed_;
};

struct VerdictDistribution {
  double sup = 1.0 / 3.0;
  double ref = 1.0 / 3.0;
  double nei = 1.0 / 3.0;

  double operator[](Label label) const;
  Label Argmax() const;
};

struct TrainingConfig {
  int epochs = 4;
  double learning_rate = 0.2;
  uint64_t seed = 1;
  uint32_t hash_dim = 1u << 14;
  size_t nei_negatives = 3;
  size_t hard_negatives = 2;

  bool operator==(const TrainingConfig&) const = default;
};

// Multinomial logistic regression over PairFeaturizer features.
class Verifier {
 public:
  explicit Verifier(const TrainingConfig& config);

  const TrainingConfig& config() const { return config_; }
  const PairFeaturizer& featurizer() const { return featurizer_; }
  uint32_t dimension() const { return featurizer_.dimension(); }
  // Row-major 3 x dimension().
  std::span<const double> weights() const { return weights_; }
  std::span<double> mutable_weights() { return weights_; }

  VerdictDistribution Predict(std::string_view claim, std::string_view evidence) const;
  VerdictDistribution PredictFeatures(const SparseVector& features) const;

  void Write(std::ostream& out) const;
  static Verifier Read(std::istream& in);
  void Save(const std::string& path) const;
  static Verifier Load(const std::string& path);

  bool operator==(const Verifier& other) const;

 private:
  TrainingConfig config_;
  PairFeaturizer featurizer_;
  std::vector<double> weights_;
};

// Softmax of the three class scores of `features` under row-major `weights`.
std::array<double, 3> ClassProbabilities(std::span<const double> weights, uint32_t dimension,
                                         const SparseVector& features);

// Negative log-likelihood of `label`. When `gradient` is non-null it is
// resized to weights.size() and filled with d(loss)/d(weights).
double LogLoss(std::span<const double> weights, uint32_t dimension, const SparseVector& features,
               Label label, std::vector<double>* gradient);

struct TrainingPair {
  std::string claim;
  std::string evidence;
  Label label = Label::kNei;
};

// SUP/REF claims pair with each gold sentence and, labelled NEI, with their
// top `hard_negatives` non-gold sentences; NEI claims pair with their top
// `nei_negatives` sentences under `index` (zero scores included). Throws
// ValidationError listing every claim whose gold evidence does not resolve.
std::vector<TrainingPair> BuildTrainingPairs(const ClaimSet& claims, const Repository& repo,
                                             const Index& index, size_t nei_negatives = 3,
                                             size_t hard_negatives = 0);

// Plain SGD over shuffled pairs, one pass per epoch.
Verifier TrainVerifier(const std::vector<TrainingPair>& pairs, const TrainingConfig& config);
Verifier TrainVerifier(const ClaimSet& claims, const Repository& repo, const Index& index,
                       const TrainingConfig& config);

struct AggregationRule {
  double threshold = 0.5;
};

struct AggregateVerdict {
  Label label = Label::kNei;
  double confidence = 1.0;
};

// Per-sentence verdicts; the strongest SUP/REF probability m wins if
// m >= threshold, otherwise NEI with the largest per-sentence NEI probability.
// Empty evidence is (NEI, 1.0).
AggregateVerdict AggregateVerdictFor(const Verifier& verifier, std::string_view claim,
                                     const RankedEvidence& evidence, const Repository& repo,
                                     const AggregationRule& rule);
AggregateVerdict AggregateDistributions(std::span<const VerdictDistribution> per_sentence,
                                        const AggregationRule& rule);

}  // namespace fcattack

#endif  // FCATTACK_VERIFICATION_H_
