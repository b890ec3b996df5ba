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

#ifndef FCATTACK_EVALUATION_H_
#define FCATTACK_EVALUATION_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcattack/attack.h"
#include "fcattack/candidates.h"
#include "fcattack/corpus.h"
#include "fcattack/retrieval.h"
#include "fcattack/verification.h"

namespace fcattack {

struct PipelineConfig {
  RetrieverOptions retriever;
  AggregationRule rule;
  size_t k = 5;
};

struct Prediction {
  Label label = Label::kNei;
  double confidence = 1.0;
  std::vector<SentenceRef> top;
};

// The defender: retriever over the repository followed by the verifier and
// the aggregation rule.
class Pipeline {
 public:
  Pipeline(const Verifier& verifier, PipelineConfig config = {});

  const PipelineConfig& config() const { return config_; }
  const Verifier& verifier() const { return verifier_; }
  Prediction Predict(const Index& index, const Repository& repo, std::string_view claim) const;
  // Builds one index for `repo` and predicts every claim.
  std::vector<Prediction> PredictAll(const ClaimSet& claims, const Repository& repo) const;

 private:
  const Verifier& verifier_;
  PipelineConfig config_;
};

struct AttackOutcome {
  std::string claim_id;
  Label gold = Label::kNei;
  Label clean_label = Label::kNei;
  double clean_confidence = 1.0;
  Label attacked_label = Label::kNei;
  double attacked_confidence = 1.0;
  std::vector<SentenceRef> clean_top;
  std::vector<SentenceRef> attacked_top;
  // attacked_top[i] is attacker-controlled.
  std::vector<bool> attacked_top_marked;
  // Sentences written for this claim.
  std::vector<SentenceRef> attack_refs;
  // Per attempted sentence: the attack found a strictly better text.
  std::vector<bool> sentence_success;
  bool attacked = false;
};

// Pairs clean and attacked predictions for every claim.
enum class EvaluationScope {
  // Each claim is checked against the clean repository plus its own
  // modifications.
  kPerClaim,
  // Every claim is checked against the whole attacked repository.
  kJoint,
};

std::string_view EvaluationScopeName(EvaluationScope scope);
EvaluationScope ParseEvaluationScope(std::string_view name);

// `attacked` is only read for kJoint.
std::vector<AttackOutcome> BuildOutcomes(const Pipeline& pipeline, const ClaimSet& claims,
                                         const Repository& clean, const Repository& attacked,
                                         const std::vector<AttackRecord>& records,
                                         EvaluationScope scope = EvaluationScope::kPerClaim);

struct MetricsRecord {
  std::array<size_t, 3> counts{};
  std::array<size_t, 3> correct{};
  // Percentages; absent for labels without claims.
  std::array<std::optional<double>, 3> accuracy;
  // Percentage of attacked claims with an attack sentence in the top-k.
  std::optional<double> attack_recall;
  // Percentage of changed predictions that became NEI; absent without changes.
  std::optional<double> to_nei_ratio;
  size_t attacked_claims = 0;
  size_t changed = 0;
};

std::array<std::optional<double>, 3> AccuracyByLabel(std::span<const Label> gold,
                                                     std::span<const Label> predicted);
MetricsRecord EvaluateAccuracy(const Pipeline& pipeline, const ClaimSet& claims,
                               const Repository& repo);
std::optional<double> AttackRecall(std::span<const AttackOutcome> outcomes);
std::optional<double> ToNeiRatio(std::span<const AttackOutcome> outcomes);
MetricsRecord CleanMetrics(std::span<const AttackOutcome> outcomes);
// Accuracy after the attack together with recall and the NEI ratio.
MetricsRecord AttackedMetrics(std::span<const AttackOutcome> outcomes);

struct Histogram {
  std::vector<double> edges;  // bins are [edges[i], edges[i+1]), the last one closed
  std::vector<size_t> counts;

  explicit Histogram(std::vector<double> edges);
  // Values outside the edges are clamped into the first or last bin.
  void Add(double value);
  size_t total() const;
};

// 0, 0.1, ..., 1.5
std::vector<double> DistanceBinEdges();
// L2 distance between the unit TF-IDF vectors of two texts (0 .. sqrt 2).
double ClaimEvidenceDistance(const Index& index, std::string_view claim, std::string_view evidence);

struct TextPair {
  std::string claim;
  std::string evidence;
};
Histogram DistanceHistogram(const Index& index, std::span<const TextPair> pairs,
                            std::vector<double> edges = DistanceBinEdges());

struct Histogram2D {
  size_t bins = 10;
  // counts[before_bin * bins + after_bin]; confidence in [0, 1].
  std::vector<size_t> counts;
  size_t total() const;
};

// Confidence before vs after the attack for claims that were predicted
// correctly on the clean repository and wrongly after the attack.
Histogram2D ConfidenceTraversal(std::span<const AttackOutcome> outcomes, size_t bins = 10);
size_t ConfidenceBin(double confidence, size_t bins);

// The paraphrase of `original` with the highest retrieval score to it among
// candidates that are not exact matches and keep all of its entity tokens.
std::optional<std::string> SelectParaphrase(const Claim& original,
                                            const std::vector<PoolCandidate>& candidates,
                                            const Index& index);

struct ParaphraseRobustnessReport {
  size_t considered = 0;
  size_t survived = 0;
  ClaimSet originals;
  ClaimSet paraphrases;
  MetricsRecord original_attacked;
  MetricsRecord paraphrased_attacked;
  std::vector<std::string> dropped;  // claim ids without a usable paraphrase
};

// Chooses one paraphrase per claim (SelectParaphrase, scored on the clean
// repository), keeps those whose clean prediction matches the original's,
// and evaluates both sets against the attacked repository.
ParaphraseRobustnessReport ParaphraseRobustness(const ClaimSet& claims, const CandidatePool& pools,
                                                const Pipeline& pipeline, const Repository& clean,
                                                const Repository& attacked,
                                                const std::vector<AttackRecord>& records,
                                                EvaluationScope scope = EvaluationScope::kPerClaim);

}  // namespace fcattack

#endif  // FCATTACK_EVALUATION_H_
