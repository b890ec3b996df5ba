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

#include "fcattack/planting.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "fcattack/camouflage.h"
#include "fcattack/errors.h"
#include "json.hpp"

namespace fcattack {

size_t CountPlaceholders(std::string_view text) {
  size_t n = 0;
  for (size_t at = text.find(kMaskPlaceholder); at != std::string_view::npos;
       at = text.find(kMaskPlaceholder, at + kMaskPlaceholder.size())) {
    ++n;
  }
  return n;
}

std::string_view MaskerKindName(MaskerKind kind) {
  return kind == MaskerKind::kVerifierImportance ? "verifier" : "retrieval";
}

MaskerKind ParseMaskerKind(std::string_view name) {
  if (name == "verifier") return MaskerKind::kVerifierImportance;
  if (name == "retrieval") return MaskerKind::kRetrievalImportance;
  throw ConfigError("unknown masker '" + std::string(name) + "' (expected verifier or retrieval)");
}

std::string MaskedEvidence::Render() const {
  std::vector<std::pair<size_t, std::string>> replacements;
  for (size_t p : positions) replacements.emplace_back(p, std::string(kMaskPlaceholder));
  return original.WithReplacements(replacements);
}

MaskedEvidence MaskByVerifier(std::string_view claim, const TokenizedText& evidence,
                              const Verifier& verifier, Label label, size_t k) {
  if (k < 1) throw ConfigError("mask count k must be >= 1");
  MaskedEvidence out{evidence, {}, MaskerKind::kVerifierImportance};
  for (const TokenImportance& ti : RankTokenImportance(verifier, claim, evidence, label)) {
    if (out.positions.size() >= k) break;
    out.positions.push_back(ti.position);
  }
  std::sort(out.positions.begin(), out.positions.end());
  return out;
}

MaskedEvidence MaskByRetrieval(std::string_view claim, const TokenizedText& evidence,
                               const Index& index, size_t k) {
  if (k < 1) throw ConfigError("mask count k must be >= 1");
  const std::vector<double> scores = index.MaskedSentenceScores(claim, evidence);
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  order.resize(std::min(k, order.size()));
  std::sort(order.begin(), order.end());
  return MaskedEvidence{evidence, std::move(order), MaskerKind::kRetrievalImportance};
}

namespace {

// Non-function tokens of the claim in surface form, deduplicated.
std::vector<std::string> ClaimContentTokens(std::string_view claim) {
  const TokenizedText tokens{std::string(claim)};
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (size_t i = 0; i < tokens.size(); ++i) {
    std::string norm = tokens.normalized(i);
    if (IsStopword(norm) || !seen.insert(norm).second) continue;
    out.emplace_back(tokens.token(i));
  }
  return out;
}

std::string FillPlaceholders(std::string_view masked, const std::vector<std::string>& fills) {
  std::string out;
  size_t from = 0;
  size_t k = 0;
  for (size_t at = masked.find(kMaskPlaceholder); at != std::string_view::npos;
       at = masked.find(kMaskPlaceholder, from)) {
    out.append(masked.substr(from, at - from));
    out += fills[k++ % fills.size()];
    from = at + kMaskPlaceholder.size();
  }
  out.append(masked.substr(from));
  return out;
}

}  // namespace

ReferenceCorrector::ReferenceCorrector(std::vector<std::string> frequent_tokens, double mix_rate)
    : frequent_tokens_(std::move(frequent_tokens)), mix_rate_(mix_rate) {}

std::vector<std::string> ReferenceCorrector::Correct(std::string_view claim,
                                                     const MaskedEvidence& masked,
                                                     size_t n_samples, uint64_t seed) const {
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
  const std::string rendered = masked.Render();
  const size_t holes = CountPlaceholders(rendered);
  std::vector<std::string> content = ClaimContentTokens(claim);
  if (content.empty()) content = frequent_tokens_;
  if (content.empty()) content = {"it"};
  std::mt19937_64 rng(HashCombine(seed, Fnv1a64(rendered)));
  std::bernoulli_distribution mix(mix_rate_);
  std::vector<std::string> out;
  out.reserve(n_samples);
  for (size_t i = 0; i < n_samples; ++i) {
    if (holes == 0) {
      out.push_back(rendered);
      continue;
    }
    std::vector<std::string> fills;
    for (size_t j = 0; j < holes; ++j) {
      if (i >= content.size() && !frequent_tokens_.empty() && mix(rng)) {
        fills.push_back(
            frequent_tokens_[std::uniform_int_distribution<size_t>(0, frequent_tokens_.size() - 1)(rng)]);
      } else {
        fills.push_back(content[(i + j) % content.size()]);
      }
    }
    out.push_back(FillPlaceholders(rendered, fills));
  }
  return out;
}

std::string CorrectorPromptKey(std::string_view claim, std::string_view masked_text) {
  std::string prompt(claim);
  prompt += '\n';
  prompt += masked_text;
  return PromptKey(prompt);
}

std::vector<std::string> PoolCorrector::Correct(std::string_view claim,
                                                const MaskedEvidence& masked, size_t n_samples,
                                                uint64_t) const {
  const std::string rendered = masked.Render();
  const std::string key = CorrectorPromptKey(claim, rendered);
  const auto* found = pool_.Find(key);
  if (found == nullptr || found->empty()) {
    throw ValidationError("corrector pool has no candidates for key '" + key + "'");
  }
  std::vector<std::string> out;
  for (size_t i = 0; i < found->size() && i < n_samples; ++i) out.push_back((*found)[i].text);
  return out;
}

std::vector<std::string> FrequentTokens(const Index& index, size_t n) {
  std::vector<uint32_t> ids;
  for (uint32_t t = 0; t < index.vocabulary_size(); ++t) {
    if (!IsStopword(index.terms()[t])) ids.push_back(t);
  }
  std::stable_sort(ids.begin(), ids.end(), [&](uint32_t a, uint32_t b) {
    const uint32_t da = index.DocumentFrequency(a), db = index.DocumentFrequency(b);
    return da != db ? da > db : index.terms()[a] < index.terms()[b];
  });
  std::vector<std::string> out;
  for (size_t i = 0; i < ids.size() && i < n; ++i) out.push_back(index.terms()[ids[i]]);
  return out;
}

namespace {

std::string StripPeriod(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.back() == '.' || s.back() == ' ')) s.pop_back();
  return s;
}

const std::vector<std::string>& SupportClauses() {
  static const std::vector<std::string> kClauses = {
      "according to a recent interview",
      "as confirmed by a close friend",
      "as several biographies point out",
      "a fact that is often repeated",
      "which is mentioned in many profiles",
      "as reported by a local newspaper",
      "something few people dispute",
      "as an archived article explains",
  };
  return kClauses;
}

const std::vector<std::string>& SupportPrefixes() {
  static const std::vector<std::string> kPrefixes = {
      "It is widely reported that",
      "Several sources confirm that",
      "Records indicate that",
      "It is well known that",
  };
  return kPrefixes;
}

}  // namespace

std::vector<std::string> ReferenceGenerator::Generate(std::string_view claim, size_t n_samples,
                                                      uint64_t seed) const {
  std::mt19937_64 rng(HashCombine(seed, Fnv1a64(claim)));
  std::bernoulli_distribution copy(copy_rate_);
  std::bernoulli_distribution prefix(0.35);
  const std::string body = StripPeriod(claim);
  const auto& clauses = SupportClauses();
  const auto& prefixes = SupportPrefixes();
  std::vector<std::string> out;
  out.reserve(n_samples);
  for (size_t i = 0; i < n_samples; ++i) {
    if (copy(rng)) {
      out.emplace_back(claim);
    } else if (prefix(rng)) {
      out.push_back(prefixes[std::uniform_int_distribution<size_t>(0, prefixes.size() - 1)(rng)] +
                    " " + body + ".");
    } else {
      out.push_back(body + ", " +
                    clauses[std::uniform_int_distribution<size_t>(0, clauses.size() - 1)(rng)] +
                    ".");
    }
  }
  return out;
}

std::vector<std::string> PoolGenerator::Generate(std::string_view claim, size_t n_samples,
                                                 uint64_t) const {
  const std::string key = PromptKey(claim);
  const auto* found = pool_.Find(key);
  if (found == nullptr || found->empty()) {
    throw ValidationError("generator pool has no candidates for key '" + key + "'");
  }
  std::vector<std::string> out;
  for (size_t i = 0; i < found->size() && i < n_samples; ++i) out.push_back((*found)[i].text);
  return out;
}

std::string_view FilterDirectionName(FilterDirection direction) {
  switch (direction) {
    case FilterDirection::kNone: return "none";
    case FilterDirection::kStanceMax: return "stance";
    case FilterDirection::kRetrievalMax: return "retrieval";
  }
  return "?";
}

FilterDirection ParseFilterDirection(std::string_view name) {
  for (auto d : {FilterDirection::kNone, FilterDirection::kStanceMax,
                 FilterDirection::kRetrievalMax}) {
    if (FilterDirectionName(d) == name) return d;
  }
  throw ConfigError("unknown filter '" + std::string(name) +
                    "' (expected none, stance or retrieval)");
}

bool IsClaimCopy(std::string_view claim, std::string_view candidate) {
  return NormalizedTokens(claim) == NormalizedTokens(candidate);
}

double CandidateScorer::operator()(std::string_view claim, std::string_view candidate) const {
  switch (direction) {
    case FilterDirection::kNone:
      return 0.0;
    case FilterDirection::kStanceMax:
      if (verifier == nullptr) throw ConfigError("stance filtering needs a verifier");
      return verifier->Predict(claim, candidate).sup;
    case FilterDirection::kRetrievalMax:
      if (index == nullptr) throw ConfigError("retrieval filtering needs a retriever");
      return index->Score(claim, candidate);
  }
  return 0.0;
}

std::vector<size_t> SelectCandidates(const std::vector<std::string>& candidates,
                                     std::string_view claim, const CandidateScorer& scorer,
                                     size_t n_keep) {
  std::vector<std::pair<double, size_t>> scored;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (IsClaimCopy(claim, candidates[i])) continue;
    scored.emplace_back(scorer(claim, candidates[i]), i);
  }
  if (scored.empty()) throw AttackInapplicable("every candidate is a copy of the claim");
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<size_t> out;
  for (size_t i = 0; i < scored.size() && out.size() < n_keep; ++i) out.push_back(scored[i].second);
  return out;
}

size_t SelectCandidate(const std::vector<std::string>& candidates, std::string_view claim,
                       const CandidateScorer& scorer) {
  return SelectCandidates(candidates, claim, scorer, 1).front();
}

std::string PlantedDocumentId(std::string_view claim_id) {
  return "planted:" + std::string(claim_id);
}

namespace {

double MeanScore(const std::vector<std::string>& candidates, std::string_view claim,
                 const CandidateScorer& scorer) {
  double sum = 0.0;
  size_t n = 0;
  for (const std::string& c : candidates) {
    if (IsClaimCopy(claim, c)) continue;
    sum += scorer(claim, c);
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

// Scorer used for bookkeeping when no filter is configured.
CandidateScorer ReportingScorer(const CandidateScorer& scorer) {
  if (scorer.direction != FilterDirection::kNone) return scorer;
  CandidateScorer stance = scorer;
  stance.direction =
      scorer.verifier ? FilterDirection::kStanceMax : FilterDirection::kRetrievalMax;
  if (!scorer.verifier && !scorer.index) stance.direction = FilterDirection::kNone;
  return stance;
}

void ApplyPlanted(AttackResult& result, const Repository& repo, std::vector<Modification>& mods,
                  const std::vector<size_t>& owners) {
  std::vector<SentenceRef> touched;
  result.repo = ApplyModifications(repo, mods, /*mark_as_attack=*/true, &touched);
  for (size_t i = 0; i < touched.size(); ++i) {
    AttackRecord& record = result.records[owners[i]];
    record.modifications.push_back(mods[i]);
    record.applied.push_back(touched[i]);
    record.attacked = true;
  }
}

AttackResult GenerateAndPlant(
    const std::vector<std::pair<const Claim*, std::string>>& targets, const ClaimSet& claims,
    const Repository& repo, const Generator& generator, const Verifier& verifier,
    const Index* index, const GenerationConfig& config) {
  if (config.n_samples < 1 || config.n_keep < 1) {
    throw ConfigError("n_samples and n_keep must be >= 1");
  }
  const CandidateScorer scorer{config.filter, &verifier, index};
  const CandidateScorer reporting = ReportingScorer(scorer);
  std::map<std::string, std::string> prompt_of;
  for (const auto& [claim, prompt] : targets) prompt_of[claim->id] = prompt;

  AttackResult result;
  std::vector<Modification> mods;
  std::vector<size_t> owners;
  for (const Claim& claim : claims) {
    AttackRecord record;
    record.claim_id = claim.id;
    auto it = prompt_of.find(claim.id);
    if (it == prompt_of.end()) {
      record.note = "not targeted";
      result.records.push_back(std::move(record));
      continue;
    }
    const std::string& prompt = it->second;
    const uint64_t seed = HashCombine(config.seed, Fnv1a64(claim.id));
    const std::vector<std::string> candidates =
        generator.Generate(prompt, config.n_samples, seed);
    try {
      const double mean = MeanScore(candidates, prompt, reporting);
      for (size_t pick : SelectCandidates(candidates, prompt, scorer, config.n_keep)) {
        PerturbedEvidence pe;
        pe.original = prompt;
        pe.attacked = candidates[pick];
        pe.method = "supporting-generation";
        pe.budget_used = static_cast<int>(candidates.size());
        pe.objective_before = mean;
        pe.objective_after = reporting(prompt, candidates[pick]);
        mods.push_back(Modification::Add(PlantedDocumentId(claim.id), pe.attacked));
        owners.push_back(result.records.size());
        record.edits.push_back(std::move(pe));
      }
    } catch (const AttackInapplicable& e) {
      record.note = e.what();
    }
    result.records.push_back(std::move(record));
  }
  ApplyPlanted(result, repo, mods, owners);
  return result;
}

}  // namespace

AttackResult ClaimAlignedRewrite(const ClaimSet& claims, const Repository& repo,
                                 const Index& adversary_index, const Verifier& adversary_verifier,
                                 const Corrector& corrector, const RewriteConfig& config) {
  if (config.n_evidence < 1 || config.n_samples < 1 || config.k_mask < 1) {
    throw ConfigError("n_evidence, n_samples and k_mask must be >= 1");
  }
  for (const Claim& claim : claims) {
    if (claim.label != Label::kRef) {
      throw ValidationError("claim-aligned rewriting applies to REF claims only; '" + claim.id +
                            "' is " + std::string(LabelName(claim.label)));
    }
  }
  const CandidateScorer scorer{config.filter, &adversary_verifier, &adversary_index};
  const CandidateScorer reporting = ReportingScorer(scorer);
  AttackResult result;
  std::vector<Modification> mods;
  std::vector<size_t> owners;
  for (const Claim& claim : claims) {
    AttackRecord record;
    record.claim_id = claim.id;
    const RankedEvidence ranked =
        adversary_index.Retrieve(repo, claim.text, config.n_evidence);
    if (ranked.items.empty()) record.note = "no evidence retrieved";
    const uint64_t claim_seed = HashCombine(config.seed, Fnv1a64(claim.id));
    for (const ScoredSentence& item : ranked.items) {
      const std::string& text = repo.SentenceText(item.ref);
      const TokenizedText tokens(text);
      const MaskedEvidence masked =
          config.masker == MaskerKind::kVerifierImportance
              ? MaskByVerifier(claim.text, tokens, adversary_verifier, claim.label, config.k_mask)
              : MaskByRetrieval(claim.text, tokens, adversary_index, config.k_mask);
      const std::vector<std::string> candidates = corrector.Correct(
          claim.text, masked, config.n_samples, HashCombine(claim_seed, Fnv1a64(item.ref.ToString())));
      PerturbedEvidence pe;
      pe.ref = item.ref;
      pe.original = text;
      pe.method = "claim-aligned-rewrite";
      pe.budget_used = static_cast<int>(masked.positions.size());
      pe.objective_before = reporting(claim.text, text);
      try {
        const size_t pick = SelectCandidate(candidates, claim.text, scorer);
        pe.attacked = candidates[pick];
        pe.objective_after = reporting(claim.text, pe.attacked);
        if (config.modification == Modification::Kind::kAdd) {
          mods.push_back(Modification::Add(PlantedDocumentId(claim.id), pe.attacked));
        } else {
          mods.push_back(Modification::Replace(item.ref, pe.attacked));
        }
        owners.push_back(result.records.size());
      } catch (const AttackInapplicable& e) {
        pe.attacked = text;
        pe.failed = true;
        record.note = e.what();
      }
      record.edits.push_back(std::move(pe));
    }
    result.records.push_back(std::move(record));
  }
  ApplyPlanted(result, repo, mods, owners);
  return result;
}

AttackResult SupportingGeneration(const ClaimSet& claims, const Repository& repo,
                                  const Generator& generator, const Verifier& adversary_verifier,
                                  const Index* adversary_index, const GenerationConfig& config) {
  std::vector<std::pair<const Claim*, std::string>> targets;
  for (const Claim& claim : claims) {
    if (claim.label == Label::kSup) {
      throw ValidationError("supporting generation applies to REF and NEI claims only; '" +
                            claim.id + "' is SUP");
    }
    targets.emplace_back(&claim, claim.text);
  }
  return GenerateAndPlant(targets, claims, repo, generator, adversary_verifier, adversary_index,
                          config);
}

AttackResult AttackCorrectClaims(const ClaimSet& claims,
                                 const std::vector<Counterclaim>& counterclaims,
                                 const Repository& repo, const Generator& generator,
                                 const Verifier& adversary_verifier, const Index* adversary_index,
                                 const GenerationConfig& config) {
  std::map<std::string, std::string> counter;
  for (const Counterclaim& c : counterclaims) counter.emplace(c.claim_id, c.text);
  std::vector<std::pair<const Claim*, std::string>> targets;
  for (const Claim& claim : claims) {
    auto it = counter.find(claim.id);
    if (it != counter.end() && claim.label == Label::kSup) targets.emplace_back(&claim, it->second);
  }
  return GenerateAndPlant(targets, claims, repo, generator, adversary_verifier, adversary_index,
                          config);
}

std::vector<DistantSupervisionRecord> ExportDistantSupervision(const ClaimSet& claims,
                                                               const Repository& repo,
                                                               MaskerKind masker,
                                                               const Verifier* verifier,
                                                               const Index* index, size_t k) {
  if (masker == MaskerKind::kVerifierImportance && verifier == nullptr) {
    throw ConfigError("verifier masking needs a verifier");
  }
  if (masker == MaskerKind::kRetrievalImportance && index == nullptr) {
    throw ConfigError("retrieval masking needs a retriever");
  }
  std::vector<DistantSupervisionRecord> out;
  for (const Claim& claim : claims) {
    if (claim.label != Label::kSup) continue;
    for (const SentenceRef& ref : claim.gold_evidence) {
      const std::string& text = repo.SentenceText(ref);
      const TokenizedText tokens(text);
      const MaskedEvidence masked =
          masker == MaskerKind::kVerifierImportance
              ? MaskByVerifier(claim.text, tokens, *verifier, Label::kSup, k)
              : MaskByRetrieval(claim.text, tokens, *index, k);
      out.push_back({claim.text, masked.Render(), text});
    }
  }
  return out;
}

void WriteDistantSupervision(const std::vector<DistantSupervisionRecord>& records,
                             std::ostream& out) {
  for (const DistantSupervisionRecord& r : records) {
    nlohmann::ordered_json record;
    record["claim"] = r.claim;
    record["masked_evidence"] = r.masked_evidence;
    record["target"] = r.target;
    out << record.dump() << '\n';
  }
}

}  // namespace fcattack
