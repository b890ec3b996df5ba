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

#ifndef FCATTACK_ATTACK_H_
#define FCATTACK_ATTACK_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fcattack/corpus.h"

namespace fcattack {

enum class AttackObjective {
  kVerifierLoss,    // minimise p(correct label) under the adversary's verifier
  kRetrievalScore,  // minimise the adversary's retrieval score
};

std::string_view AttackObjectiveName(AttackObjective objective);
AttackObjective ParseAttackObjective(std::string_view name);

// One attacked or generated sentence.
struct PerturbedEvidence {
  // Source sentence; empty doc_id for free generation.
  SentenceRef ref;
  std::string original;
  std::string attacked;
  std::string method;
  // Tokens replaced, genes used or candidates sampled.
  int budget_used = 0;
  double objective_before = 0.0;
  double objective_after = 0.0;
  // Set when no strictly better text was found; `attacked` then equals
  // `original` for camouflage attacks.
  bool failed = false;
};

struct AttackRecord {
  std::string claim_id;
  // At least one modification was applied for this claim.
  bool attacked = false;
  // Reason when nothing was applied.
  std::string note;
  std::vector<PerturbedEvidence> edits;
  // This claim's own modifications, in application order.
  std::vector<Modification> modifications;
  // References of the sentences written into the attacked repository.
  std::vector<SentenceRef> applied;
};

struct AttackResult {
  Repository repo;
  std::vector<AttackRecord> records;
};

// JSON-lines, one record per claim:
//   {"claim_id":..,"attacked":true,"note":"","edits":[..],
//    "modifications":[{"kind":"replace","target":"doc#2","text":".."}],
//    "applied":["doc#2"]}
std::vector<AttackRecord> ParseAttackRecords(std::istream& in, const std::string& source_name = "<stream>");
std::vector<AttackRecord> LoadAttackRecords(const std::string& path);
void WriteAttackRecords(const std::vector<AttackRecord>& records, std::ostream& out);
void SaveAttackRecords(const std::vector<AttackRecord>& records, const std::string& path);

}  // namespace fcattack

#endif  // FCATTACK_ATTACK_H_
