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

#ifndef FCATTACK_PLANTING_H_
#define FCATTACK_PLANTING_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fcattack/attack.h"
#include "fcattack/candidates.h"
#include "fcattack/corpus.h"
#include "fcattack/retrieval.h"
#include "fcattack/text.h"
#include "fcattack/verification.h"

namespace fcattack {

// U+27E8 'M' U+27E9.
inline constexpr std::string_view kMaskPlaceholder = "\xE2\x9F\xA8M\xE2\x9F\xA9";

size_t CountPlaceholders(std::string_view text);

enum class MaskerKind { kVerifierImportance, kRetrievalImportance };

std::string_view MaskerKindName(MaskerKind kind);
MaskerKind ParseMaskerKind(std::string_view name);

struct MaskedEvidence {
  TokenizedText original;
  // Ascending token positions.
  std::vector<size_t> positions;
  MaskerKind masker = MaskerKind::kVerifierImportance;

  // The original text with every masked token replaced by the placeholder.
  std::string Render() const;
};

// Masks the min(k, tokens) positions with the largest drop in p(label).
MaskedEvidence MaskByVerifier(std::string_view claim, const TokenizedText& evidence,
                              const Verifier& verifier, Label label, size_t k);
// Masks the min(k, tokens) positions whose deletion leaves the lowest
// retrieval score; ties by position.
MaskedEvidence MaskByRetrieval(std::string_view claim, const TokenizedText& evidence,
                               const Index& index, size_t k);

// Fills the placeholders of a masked sentence conditioned on the claim.
class Corrector {
 public:
  virtual ~Corrector() = default;
  virtual std::vector<std::string> Correct(std::string_view claim, const MaskedEvidence& masked,
                                           size_t n_samples, uint64_t seed) const = 0;
};

// Candidate i fills the placeholders left to right with the claim's content
// tokens, starting at content token i and cycling. Candidates past the first
// round swap some fillers for frequent corpus tokens.
class ReferenceCorrector : public Corrector {
 public:
  explicit ReferenceCorrector(std::vector<std::string> frequent_tokens, double mix_rate = 0.25);
  std::vector<std::string> Correct(std::string_view claim, const MaskedEvidence& masked,
                                   size_t n_samples, uint64_t seed) const override;

 private:
  std::vector<std::string> frequent_tokens_;
  double mix_rate_;
};

// Candidates read from a pool keyed by CorrectorPromptKey(); throws
// ValidationError naming a missing key.
class PoolCorrector : public Corrector {
 public:
  explicit PoolCorrector(const CandidatePool& pool) : pool_(pool) {}
  std::vector<std::string> Correct(std::string_view claim, const MaskedEvidence& masked,
                                   size_t n_samples, uint64_t seed) const override;

 private:
  const CandidatePool& pool_;
};

std::string CorrectorPromptKey(std::string_view claim, std::string_view masked_text);

// The `n` most frequent non-function terms of an index, by document
// frequency then term.
std::vector<std::string> FrequentTokens(const Index& index, size_t n);

// Produces candidate evidence for a claim.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::vector<std::string> Generate(std::string_view claim, size_t n_samples,
                                            uint64_t seed) const = 0;
};

// Restates the claim followed by a sampled filler clause; a share of the
// samples are exact claim copies.
class ReferenceGenerator : public Generator {
 public:
  explicit ReferenceGenerator(double copy_rate = 0.1) : copy_rate_(copy_rate) {}
  std::vector<std::string> Generate(std::string_view claim, size_t n_samples,
                                    uint64_t seed) const override;

 private:
  double copy_rate_;
};

// Candidates read from a pool keyed by PromptKey(claim); throws
// ValidationError naming a missing key.
class PoolGenerator : public Generator {
 public:
  explicit PoolGenerator(const CandidatePool& pool) : pool_(pool) {}
  std::vector<std::string> Generate(std::string_view claim, size_t n_samples,
                                    uint64_t seed) const override;

 private:
  const CandidatePool& pool_;
};

enum class FilterDirection {
  kNone,          // first candidate that is not a claim copy
  kStanceMax,     // highest p(SUP) under the adversary's verifier
  kRetrievalMax,  // highest adversary retrieval score
};

std::string_view FilterDirectionName(FilterDirection direction);
FilterDirection ParseFilterDirection(std::string_view name);

// True when the candidate has exactly the claim's normalized tokens.
bool IsClaimCopy(std::string_view claim, std::string_view candidate);

struct CandidateScorer {
  FilterDirection direction = FilterDirection::kStanceMax;
  const Verifier* verifier = nullptr;
  const Index* index = nullptr;

  double operator()(std::string_view claim, std::string_view candidate) const;
};

// Indices of the best `n_keep` non-copy candidates, best first, earlier
// candidates first on ties. Throws AttackInapplicable when every candidate
// is a claim copy.
std::vector<size_t> SelectCandidates(const std::vector<std::string>& candidates,
                                     std::string_view claim, const CandidateScorer& scorer,
                                     size_t n_keep);
size_t SelectCandidate(const std::vector<std::string>& candidates, std::string_view claim,
                       const CandidateScorer& scorer);

// Document holding the sentences planted for a claim.
std::string PlantedDocumentId(std::string_view claim_id);

struct RewriteConfig {
  MaskerKind masker = MaskerKind::kVerifierImportance;
  FilterDirection filter = FilterDirection::kStanceMax;
  size_t n_evidence = 2;
  size_t n_samples = 60;
  size_t k_mask = 13;
  Modification::Kind modification = Modification::Kind::kAdd;
  uint64_t seed = 0;
};

// Masks, corrects and filters the top `n_evidence` sentences retrieved for
// each REF claim. Add writes the rewrites into PlantedDocumentId(claim);
// replace overwrites the source sentences. Throws ValidationError when a
// claim is not REF.
AttackResult ClaimAlignedRewrite(const ClaimSet& claims, const Repository& repo,
                                 const Index& adversary_index, const Verifier& adversary_verifier,
                                 const Corrector& corrector, const RewriteConfig& config);

struct GenerationConfig {
  size_t n_samples = 160;
  size_t n_keep = 2;
  FilterDirection filter = FilterDirection::kStanceMax;
  uint64_t seed = 0;
};

// Generates evidence for each REF/NEI claim and adds the `n_keep` best
// candidates as a new document. Throws ValidationError for SUP claims.
AttackResult SupportingGeneration(const ClaimSet& claims, const Repository& repo,
                                  const Generator& generator, const Verifier& adversary_verifier,
                                  const Index* adversary_index, const GenerationConfig& config);

// Generates evidence supporting each counterclaim and adds it under the
// original claim's planted document. Records are keyed by the original claim.
AttackResult AttackCorrectClaims(const ClaimSet& claims,
                                 const std::vector<Counterclaim>& counterclaims,
                                 const Repository& repo, const Generator& generator,
                                 const Verifier& adversary_verifier, const Index* adversary_index,
                                 const GenerationConfig& config);

struct DistantSupervisionRecord {
  std::string claim;
  std::string masked_evidence;
  std::string target;
  bool operator==(const DistantSupervisionRecord&) const = default;
};

// (claim, masked gold evidence, gold evidence) for every SUP claim.
std::vector<DistantSupervisionRecord> ExportDistantSupervision(const ClaimSet& claims,
                                                               const Repository& repo,
                                                               MaskerKind masker,
                                                               const Verifier* verifier,
                                                               const Index* index, size_t k = 16);
// JSON lines: {"claim":..,"masked_evidence":..,"target":..}
void WriteDistantSupervision(const std::vector<DistantSupervisionRecord>& records,
                             std::ostream& out);

}  // namespace fcattack

#endif  // FCATTACK_PLANTING_H_
