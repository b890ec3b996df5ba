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

#ifndef FCATTACK_SYNTHETIC_H_
#define FCATTACK_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fcattack/candidates.h"
#include "fcattack/corpus.h"

namespace fcattack {

struct SynthConfig {
  size_t sup_claims = 200;
  size_t ref_claims = 200;
  size_t nei_claims = 200;
  // 0 derives the entity count from the claim counts.
  size_t entities = 0;
  // Relations stated per entity document, at most 8.
  size_t facts_per_entity = 5;
  // Value choices per relation, at most 12.
  size_t values_per_relation = 12;
  size_t filler_sentences = 2;
  // Share of NEI claims about people absent from the corpus.
  double unknown_entity_share = 0.3;
  // Share of claims held out for evaluation; the rest is for training.
  double eval_fraction = 0.5;

  bool operator==(const SynthConfig&) const = default;
};

struct SyntheticCorpus {
  Repository repo;
  ClaimSet claims;
  ClaimSet train;
  ClaimSet eval;
  // Synonym groups sit within 0.4 of each other; unrelated words are far apart.
  EmbeddingLexicon lexicon;
  // Masked-language-model stand-in keyed by TokenKey().
  CandidatePool token_pool;
  // Rewrites of each claim keyed by claim id: an exact copy, entity-preserving
  // rewrites and entity-dropping rewrites.
  CandidatePool claim_paraphrases;
  // One mutually exclusive counterclaim per SUP claim.
  std::vector<Counterclaim> counterclaims;
};

// Closed-vocabulary people/relation corpus. One document per person, one
// sentence per stated relation plus filler sentences. A REF claim's gold
// sentence states the true value next to an explicit negation of the claimed
// one. Throws ConfigError on zero claim counts or an infeasible layout.
SyntheticCorpus GenerateSyntheticCorpus(const SynthConfig& config, uint64_t seed);

}  // namespace fcattack

#endif  // FCATTACK_SYNTHETIC_H_
