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


#ifndef FCATTACK_EXPERIMENT_H_
#define FCATTACK_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcattack/attack.h"
#include "fcattack/camouflage.h"
#include "fcattack/candidates.h"
#include "fcattack/corpus.h"
#include "fcattack/evaluation.h"
#include "fcattack/planting.h"
#include "fcattack/retrieval.h"
#include "fcattack/synthetic.h"
#include "fcattack/verification.h"

namespace fcattack {

enum class AttackMethod {
  kNone,
  kLexicalVariation,
  kContextualizedReplace,
  kImperceptible,
  kOmitParaphrase,
  kOmitGenerate,
  kClaimAlignedRewrite,
  kSupportingGeneration,
  kCorrectClaims,
};

std::string_view AttackMethodName(AttackMethod method);
AttackMethod ParseAttackMethod(std::string_view name);

enum class AttackTarget { kNone, kCamouflage, kPlanting };
// How much of the original evidence context an attack keeps.
enum class ContextClass { kFull, kPartial, kNone };
// Fact-verification models the adversary needs.
enum class ModelCapability { kNone, kRetrieval, kVerification, kRetrievalAndVerification };
enum class Knowledge { kWhiteBox, kBlackBox };

std::string_view AttackTargetName(AttackTarget target);
std::string_view ContextClassName(ContextClass context);
std::string_view ModelCapabilityName(ModelCapability capability);
std::string_view KnowledgeName(Knowledge knowledge);

struct ExperimentConfig {
  std::string name = "experiment";
  AttackMethod method = AttackMethod::kNone;
  Modification::Kind modification = Modification::Kind::kReplace;
  bool allow_add_for_comparison = false;

  // Camouflage.
  PerturbationTechnique technique = PerturbationTechnique::kHomoglyph;
  AttackObjective objective = AttackObjective::kRetrievalScore;
  int epsilon = 5;
  size_t max_edited = 5;

  // Planting.
  MaskerKind masker = MaskerKind::kVerifierImportance;
  FilterDirection filter = FilterDirection::kStanceMax;
  size_t n_evidence = 2;
  size_t n_samples = 60;
  size_t k_mask = 13;
  size_t n_keep = 2;
  double generator_copy_rate = 0.1;
  size_t frequent_tokens = 50;

  // Defender.
  RetrieverKind defender_retriever = RetrieverKind::kTfIdfCosine;
  uint32_t defender_hash_dim = 1u << 14;
  uint64_t defender_seed = 1;
  double threshold = 0.5;
  size_t top_k = 5;

  // Adversary.
  RetrieverKind adversary_retriever = RetrieverKind::kTfIdfCosine;
  double adversary_data_fraction = 1.0;
  uint32_t adversary_hash_dim = 1u << 13;
  uint64_t adversary_seed = 2;

  uint64_t corpus_seed = 7;
  uint64_t attack_seed = 0;
  EvaluationScope scope = EvaluationScope::kPerClaim;
  bool paraphrase_robustness = false;

  bool operator==(const ExperimentConfig&) const = default;
};

struct TaxonomyCoordinates {
  AttackTarget target = AttackTarget::kNone;
  Modification::Kind modification = Modification::Kind::kReplace;
  ContextClass context = ContextClass::kFull;
  ModelCapability capability = ModelCapability::kNone;
  Knowledge knowledge = Knowledge::kWhiteBox;
  double data_fraction = 1.0;
};

TaxonomyCoordinates CoordinatesOf(const ExperimentConfig& config);
AttackTarget TargetOf(AttackMethod method);
// Gold labels an attack is run against.
std::vector<Label> TargetLabels(AttackMethod method);

// Throws ConfigError on out-of-range values and on coordinate conflicts.
void ValidateExperimentConfig(const ExperimentConfig& config);

// Pretty-printed JSON with a fixed field order; round-trips through
// ParseExperimentConfig. Unknown keys are rejected.
std::string ExperimentConfigJson(const ExperimentConfig& config);
ExperimentConfig ParseExperimentConfig(std::string_view json, const std::string& source = "<config>");
ExperimentConfig LoadExperimentConfig(const std::string& path);

struct AttackInputs {
  const ClaimSet* claims = nullptr;
  const Repository* repo = nullptr;
  const Index* adversary_index = nullptr;
  const Verifier* adversary_verifier = nullptr;
  const EmbeddingLexicon* lexicon = nullptr;
  const CandidatePool* token_pool = nullptr;
  const CandidatePool* rewrite_pool = nullptr;
  const std::vector<Counterclaim>* counterclaims = nullptr;
};

// Claims of `claims` the configured attack applies to.
ClaimSet TargetClaims(const ExperimentConfig& config, const ClaimSet& claims);

// Runs the configured attack against TargetClaims(). kNone returns the
// repository unchanged.
AttackResult ExecuteAttack(const ExperimentConfig& config, const AttackInputs& inputs);

// The frozen corpus and the defender's verifier, shared across runs.
struct ExperimentData {
  SynthConfig synth;
  uint64_t corpus_seed = 7;
  RetrieverKind defender_retriever = RetrieverKind::kTfIdfCosine;
  uint32_t defender_hash_dim = 1u << 14;
  uint64_t defender_seed = 1;
  SyntheticCorpus corpus;
  Verifier defender{TrainingConfig{}};
};

ExperimentData PrepareExperimentData(const ExperimentConfig& config, const SynthConfig& synth = {});
// Trains the adversary's verifier on its share of the training claims.
Verifier TrainAdversaryVerifier(const ExperimentConfig& config, const SyntheticCorpus& corpus,
                                const Index& adversary_index);

struct ReferenceValue {
  std::string source;
  std::string field;
  double value = 0.0;
};

// Values from the original full-scale study for side-by-side reading; not
// reproduced by this harness.
std::vector<ReferenceValue> ReferenceValues(const ExperimentConfig& config);

struct ExperimentReport {
  ExperimentConfig config;
  TaxonomyCoordinates coordinates;
  size_t target_claims = 0;
  size_t attempted_sentences = 0;
  size_t successful_sentences = 0;
  MetricsRecord clean;
  MetricsRecord attacked;
  // Planting only: claim to top retrieved attack sentence, over claims
  // predicted SUP after the attack, next to claim to gold evidence.
  std::optional<Histogram> attack_distance;
  std::optional<Histogram> gold_distance;
  std::optional<Histogram2D> traversal;
  std::optional<ParaphraseRobustnessReport> paraphrase;
  std::vector<ReferenceValue> reference;
};

// Throws ConfigError when `data` was prepared for other corpus or defender
// settings.
ExperimentReport RunExperiment(const ExperimentConfig& config, const ExperimentData& data);

// Named groups of the sweep grid: "main", "budget", "planted", "modification",
// "knowledge", "fraction", "paraphrase".
std::vector<ExperimentConfig> SweepGrid(const std::vector<std::string>& groups = {});
std::vector<std::string> SweepGroups();

// Runs every configuration on up to `jobs` threads; reports come back in grid
// order.
std::vector<ExperimentReport> RunSweep(const std::vector<ExperimentConfig>& grid,
                                       const ExperimentData& data, size_t jobs);

}  // namespace fcattack

#endif  // FCATTACK_EXPERIMENT_H_
