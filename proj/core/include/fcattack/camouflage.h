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

#ifndef FCATTACK_CAMOUFLAGE_H_
#define FCATTACK_CAMOUFLAGE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fcattack/attack.h"
#include "fcattack/candidates.h"
#include "fcattack/corpus.h"
#include "fcattack/homoglyphs.h"
#include "fcattack/optimizers.h"
#include "fcattack/retrieval.h"
#include "fcattack/text.h"
#include "fcattack/verification.h"

namespace fcattack {

struct TokenImportance {
  size_t position = 0;
  double importance = 0.0;
};

// p(label | claim, evidence) - p(label | claim, evidence without token i) for
// every token, most important first, ties by position.
std::vector<TokenImportance> RankTokenImportance(const Verifier& verifier, std::string_view claim,
                                                 const TokenizedText& evidence, Label label);

struct LexicalVariationOptions {
  double max_distance = 0.4;
  // Neighbours considered per token.
  size_t max_neighbors = 8;
  SearchBudget budget = DefaultGeneticBudget();
  // Stop once p(target) reaches this value.
  double target_probability = 0.5;
};

// Genetic search over lexicon substitutions maximising p(target | claim, x).
// Throws AttackInapplicable when no evidence token has a lexicon neighbour.
PerturbedEvidence LexicalVariation(std::string_view claim, std::string_view evidence,
                                   const Verifier& verifier, const EmbeddingLexicon& lexicon,
                                   Label target, const LexicalVariationOptions& options = {});

struct ContextualizedReplaceOptions {
  double max_token_fraction = 0.15;
  double candidate_threshold = 1.0e-5;
};

// Greedy replacement in token-importance order, keeping for each position the
// candidate with the largest drop in p(correct). Stops when the verdict flips
// or floor(max_token_fraction * tokens) replacements are spent. Throws
// AttackInapplicable when no position has a candidate above the threshold.
PerturbedEvidence ContextualizedReplace(std::string_view claim, std::string_view evidence,
                                        std::string_view sentence_key, const Verifier& verifier,
                                        const CandidateGenerator& generator, Label correct,
                                        const ContextualizedReplaceOptions& options = {});

struct ImperceptibleOptions {
  PerturbationTechnique technique = PerturbationTechnique::kHomoglyph;
  int epsilon = 5;
  SearchBudget budget = DefaultEvolutionBudget();
  const HomoglyphTable* table = nullptr;  // null = bundled table
};

// Differential evolution over `epsilon` (position, choice) genes minimising
// `objective(decoded text)`. Epsilon is capped at the number of eligible
// positions. Throws AttackInapplicable when there are none.
PerturbedEvidence ImperceptibleAttack(std::string_view evidence,
                                      const std::function<double(std::string_view)>& objective,
                                      const ImperceptibleOptions& options = {});

// p(correct | claim, x) under `verifier`.
std::function<double(std::string_view)> VerifierLossObjective(const Verifier& verifier,
                                                              std::string_view claim, Label correct);
// Retrieval score of x against `claim`.
std::function<double(std::string_view)> RetrievalScoreObjective(const Index& index,
                                                                std::string_view claim);

// Index of the candidate with the lowest retrieval score against `claim`,
// first occurrence on ties. Throws AttackInapplicable on an empty list.
size_t SelectOmittingCandidate(const std::vector<std::string>& candidates, std::string_view claim,
                               const Index& index);

enum class CamouflageMethod {
  kLexicalVariation,
  kContextualizedReplace,
  kImperceptible,
  kOmitParaphrase,
  kOmitGenerate,
};

std::string_view CamouflageMethodName(CamouflageMethod method);
CamouflageMethod ParseCamouflageMethod(std::string_view name);

struct CamouflageConfig {
  CamouflageMethod method = CamouflageMethod::kImperceptible;
  PerturbationTechnique technique = PerturbationTechnique::kHomoglyph;
  AttackObjective objective = AttackObjective::kRetrievalScore;
  int epsilon = 5;
  // Sentences edited per claim, taken from the top of the adversary's ranking.
  size_t max_edited = 5;
  Modification::Kind modification = Modification::Kind::kReplace;
  // Camouflage is defined for replace only; add is accepted solely for the
  // add/replace comparison.
  bool allow_add_for_comparison = false;
  uint64_t seed = 0;
  SearchBudget evolution_budget = DefaultEvolutionBudget();
  SearchBudget genetic_budget = DefaultGeneticBudget();
  double lexical_distance = 0.4;
  double max_token_fraction = 0.15;
  double candidate_threshold = 1.0e-5;
  size_t rewrite_candidates = 20;
};

// Throws ConfigError on invalid values or a taxonomy conflict.
void ValidateCamouflageConfig(const CamouflageConfig& config);

struct CamouflageResources {
  // The adversary's verifier; required by verifier-based methods.
  const Verifier* verifier = nullptr;
  const EmbeddingLexicon* lexicon = nullptr;
  const CandidateGenerator* generator = nullptr;
  // Omitting candidates keyed by sentence reference (paraphrase) or prompt key
  // (generate). Missing keys fall back to `rewriter`.
  const CandidatePool* rewrite_pool = nullptr;
  const HomoglyphTable* homoglyphs = nullptr;
  RuleBasedRewriter rewriter;
};

// Attacks the top `max_edited` sentences retrieved by `adversary_index` for
// every SUP/REF claim and applies the results in one marked batch. NEI claims
// are skipped. Every claim attacks the original text of its sentences; each
// record keeps its own modifications, and in the batch a sentence edited for
// several claims ends with the last edit. Verifier-objective methods only
// attack sentences the adversary's verifier currently judges correctly.
AttackResult RunCamouflage(const ClaimSet& claims, const Repository& repo,
                           const Index& adversary_index, const CamouflageConfig& config,
                           const CamouflageResources& resources);

}  // namespace fcattack

#endif  // FCATTACK_CAMOUFLAGE_H_
