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

#include "fcattack/evaluation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fcattack/errors.h"
#include "fcattack/text.h"

namespace fcattack {

Pipeline::Pipeline(const Verifier& verifier, PipelineConfig config)
    : verifier_(verifier), config_(std::move(config)) {}

Prediction Pipeline::Predict(const Index& index, const Repository& repo,
                             std::string_view claim) const {
  const RankedEvidence ranked = index.Retrieve(repo, claim, config_.k);
  const AggregateVerdict verdict = AggregateVerdictFor(verifier_, claim, ranked, repo, config_.rule);
  return {verdict.label, verdict.confidence, ranked.Refs()};
}

std::vector<Prediction> Pipeline::PredictAll(const ClaimSet& claims, const Repository& repo) const {
  const Index index = Index::Build(repo, config_.retriever);
  std::vector<Prediction> out;
  out.reserve(claims.size());
  for (const Claim& c : claims) out.push_back(Predict(index, repo, c.text));
  return out;
}

std::string_view EvaluationScopeName(EvaluationScope scope) {
  return scope == EvaluationScope::kPerClaim ? "per-claim" : "joint";
}

EvaluationScope ParseEvaluationScope(std::string_view name) {
  if (name == "per-claim") return EvaluationScope::kPerClaim;
  if (name == "joint") return EvaluationScope::kJoint;
  throw ConfigError("unknown evaluation scope '" + std::string(name) + "'");
}

std::vector<AttackOutcome> BuildOutcomes(const Pipeline& pipeline, const ClaimSet& claims,
                                         const Repository& clean, const Repository& attacked,
                                         const std::vector<AttackRecord>& records,
                                         EvaluationScope scope) {
  std::map<std::string, const AttackRecord*> by_claim;
  for (const AttackRecord& r : records) by_claim[r.claim_id] = &r;
  const std::vector<Prediction> before = pipeline.PredictAll(claims, clean);
  std::vector<Prediction> joint;
  if (scope == EvaluationScope::kJoint) joint = pipeline.PredictAll(claims, attacked);
  std::vector<AttackOutcome> out;
  out.reserve(claims.size());
  for (size_t i = 0; i < claims.size(); ++i) {
    AttackOutcome o;
    o.claim_id = claims[i].id;
    o.gold = claims[i].label;
    o.clean_label = before[i].label;
    o.clean_confidence = before[i].confidence;
    const auto it = by_claim.find(o.claim_id);
    const AttackRecord* record = it == by_claim.end() ? nullptr : it->second;
    Prediction after = before[i];
    if (scope == EvaluationScope::kJoint) {
      after = joint[i];
      for (const SentenceRef& ref : after.top) o.attacked_top_marked.push_back(attacked.IsAttackMarked(ref));
      if (record != nullptr) o.attack_refs = record->applied;
    } else if (record != nullptr && !record->modifications.empty()) {
      const Repository own =
          ApplyModifications(clean, record->modifications, /*mark_as_attack=*/true, &o.attack_refs);
      const Index index = Index::Build(own, pipeline.config().retriever);
      after = pipeline.Predict(index, own, claims[i].text);
      for (const SentenceRef& ref : after.top) o.attacked_top_marked.push_back(own.IsAttackMarked(ref));
    } else {
      o.attacked_top_marked.assign(after.top.size(), false);
    }
    o.attacked_label = after.label;
    o.attacked_confidence = after.confidence;
    o.clean_top = before[i].top;
    o.attacked_top = std::move(after.top);
    if (record != nullptr) {
      for (const PerturbedEvidence& e : record->edits) o.sentence_success.push_back(!e.failed);
      o.attacked = record->attacked;
    }
    out.push_back(std::move(o));
  }
  return out;
}

namespace {

double Percent(size_t part, size_t whole) {
  return 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

std::array<std::optional<double>, 3> AccuracyByLabel(std::span<const Label> gold,
                                                     std::span<const Label> predicted) {
  if (gold.size() != predicted.size()) throw ValidationError("label lists differ in length");
  std::array<size_t, 3> counts{}, correct{};
  for (size_t i = 0; i < gold.size(); ++i) {
    ++counts[LabelIndex(gold[i])];
    if (gold[i] == predicted[i]) ++correct[LabelIndex(gold[i])];
  }
  std::array<std::optional<double>, 3> out;
  for (size_t l = 0; l < 3; ++l) {
    if (counts[l]) out[l] = Percent(correct[l], counts[l]);
  }
  return out;
}

namespace {

MetricsRecord AccuracyRecord(std::span<const Label> gold, std::span<const Label> predicted) {
  MetricsRecord m;
  for (size_t i = 0; i < gold.size(); ++i) {
    ++m.counts[LabelIndex(gold[i])];
    if (gold[i] == predicted[i]) ++m.correct[LabelIndex(gold[i])];
  }
  m.accuracy = AccuracyByLabel(gold, predicted);
  return m;
}

}  // namespace

MetricsRecord EvaluateAccuracy(const Pipeline& pipeline, const ClaimSet& claims,
                               const Repository& repo) {
  std::vector<Label> gold, predicted;
  const std::vector<Prediction> preds = pipeline.PredictAll(claims, repo);
  for (size_t i = 0; i < claims.size(); ++i) {
    gold.push_back(claims[i].label);
    predicted.push_back(preds[i].label);
  }
  return AccuracyRecord(gold, predicted);
}

std::optional<double> AttackRecall(std::span<const AttackOutcome> outcomes) {
  size_t attacked = 0, retrieved = 0;
  for (const AttackOutcome& o : outcomes) {
    if (!o.attacked) continue;
    ++attacked;
    if (std::find(o.attacked_top_marked.begin(), o.attacked_top_marked.end(), true) !=
        o.attacked_top_marked.end()) {
      ++retrieved;
    }
  }
  if (attacked == 0) return std::nullopt;
  return Percent(retrieved, attacked);
}

std::optional<double> ToNeiRatio(std::span<const AttackOutcome> outcomes) {
  size_t changed = 0, to_nei = 0;
  for (const AttackOutcome& o : outcomes) {
    if (o.clean_label == o.attacked_label) continue;
    ++changed;
    if (o.attacked_label == Label::kNei) ++to_nei;
  }
  if (changed == 0) return std::nullopt;
  return Percent(to_nei, changed);
}

MetricsRecord CleanMetrics(std::span<const AttackOutcome> outcomes) {
  std::vector<Label> gold, predicted;
  for (const AttackOutcome& o : outcomes) {
    gold.push_back(o.gold);
    predicted.push_back(o.clean_label);
  }
  return AccuracyRecord(gold, predicted);
}

MetricsRecord AttackedMetrics(std::span<const AttackOutcome> outcomes) {
  std::vector<Label> gold, predicted;
  for (const AttackOutcome& o : outcomes) {
    gold.push_back(o.gold);
    predicted.push_back(o.attacked_label);
  }
  MetricsRecord m = AccuracyRecord(gold, predicted);
  m.attack_recall = AttackRecall(outcomes);
  m.to_nei_ratio = ToNeiRatio(outcomes);
  for (const AttackOutcome& o : outcomes) {
    if (o.attacked) ++m.attacked_claims;
    if (o.clean_label != o.attacked_label) ++m.changed;
  }
  return m;
}

Histogram::Histogram(std::vector<double> e) : edges(std::move(e)) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
    throw ConfigError("histogram needs at least two ascending edges");
  }
  counts.assign(edges.size() - 1, 0);
}

void Histogram::Add(double value) {
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  long bin = static_cast<long>(it - edges.begin()) - 1;
  bin = std::clamp<long>(bin, 0, static_cast<long>(counts.size()) - 1);
  ++counts[static_cast<size_t>(bin)];
}

size_t Histogram::total() const {
  size_t n = 0;
  for (size_t c : counts) n += c;
  return n;
}

std::vector<double> DistanceBinEdges() {
  std::vector<double> edges;
  for (int i = 0; i <= 15; ++i) edges.push_back(i / 10.0);
  return edges;
}

double ClaimEvidenceDistance(const Index& index, std::string_view claim,
                             std::string_view evidence) {
  const auto a = index.UnitTfIdfVector(claim);
  const auto b = index.UnitTfIdfVector(evidence);
  double sq = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      sq += a[i].second * a[i].second;
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      sq += b[j].second * b[j].second;
      ++j;
    } else {
      const double d = a[i].second - b[j].second;
      sq += d * d;
      ++i;
      ++j;
    }
  }
  return std::sqrt(sq);
}

Histogram DistanceHistogram(const Index& index, std::span<const TextPair> pairs,
                            std::vector<double> edges) {
  Histogram h(std::move(edges));
  for (const TextPair& p : pairs) h.Add(ClaimEvidenceDistance(index, p.claim, p.evidence));
  return h;
}

size_t Histogram2D::total() const {
  size_t n = 0;
  for (size_t c : counts) n += c;
  return n;
}

size_t ConfidenceBin(double confidence, size_t bins) {
  const double clamped = std::clamp(confidence, 0.0, 1.0);
  return std::min(bins - 1, static_cast<size_t>(std::floor(clamped * static_cast<double>(bins))));
}

Histogram2D ConfidenceTraversal(std::span<const AttackOutcome> outcomes, size_t bins) {
  if (bins < 1) throw ConfigError("traversal needs at least one bin");
  Histogram2D h;
  h.bins = bins;
  h.counts.assign(bins * bins, 0);
  for (const AttackOutcome& o : outcomes) {
    if (o.clean_label != o.gold || o.attacked_label == o.gold) continue;
    ++h.counts[ConfidenceBin(o.clean_confidence, bins) * bins +
               ConfidenceBin(o.attacked_confidence, bins)];
  }
  return h;
}

std::optional<std::string> SelectParaphrase(const Claim& original,
                                            const std::vector<PoolCandidate>& candidates,
                                            const Index& index) {
  const std::vector<std::string> original_tokens = NormalizedTokens(original.text);
  std::vector<std::string> entities;
  for (const std::string& e : EntityTokens(original.text)) entities.push_back(AsciiLower(e));
  std::optional<std::string> best;
  double best_score = 0.0;
  for (const PoolCandidate& c : candidates) {
    const std::vector<std::string> tokens = NormalizedTokens(c.text);
    if (tokens == original_tokens) continue;
    const std::set<std::string> present(tokens.begin(), tokens.end());
    bool keeps_entities = true;
    for (const std::string& e : entities) keeps_entities = keeps_entities && present.count(e);
    if (!keeps_entities) continue;
    const double score = index.Score(original.text, c.text);
    if (!best || score > best_score) {
      best = c.text;
      best_score = score;
    }
  }
  return best;
}

ParaphraseRobustnessReport ParaphraseRobustness(const ClaimSet& claims, const CandidatePool& pools,
                                                const Pipeline& pipeline, const Repository& clean,
                                                const Repository& attacked,
                                                const std::vector<AttackRecord>& records,
                                                EvaluationScope scope) {
  const Index index = Index::Build(clean, pipeline.config().retriever);
  ParaphraseRobustnessReport report;
  std::map<std::string, std::string> paraphrase_id;
  for (const Claim& claim : claims) {
    ++report.considered;
    const auto* pool = pools.Find(claim.id);
    std::optional<std::string> chosen;
    if (pool != nullptr) chosen = SelectParaphrase(claim, *pool, index);
    if (!chosen) {
      report.dropped.push_back(claim.id);
      continue;
    }
    const Prediction a = pipeline.Predict(index, clean, claim.text);
    const Prediction b = pipeline.Predict(index, clean, *chosen);
    if (a.label != b.label) {
      report.dropped.push_back(claim.id);
      continue;
    }
    ++report.survived;
    Claim p = claim;
    p.id = claim.id + "~p";
    p.text = *chosen;
    p.origin = {ClaimOrigin::Kind::kParaphraseOf, claim.id};
    paraphrase_id[claim.id] = p.id;
    report.originals.Add(claim);
    report.paraphrases.Add(std::move(p));
  }
  std::vector<AttackRecord> renamed;
  for (const AttackRecord& r : records) {
    auto it = paraphrase_id.find(r.claim_id);
    if (it == paraphrase_id.end()) continue;
    AttackRecord copy = r;
    copy.claim_id = it->second;
    renamed.push_back(std::move(copy));
  }
  report.original_attacked =
      AttackedMetrics(BuildOutcomes(pipeline, report.originals, clean, attacked, records, scope));
  report.paraphrased_attacked =
      AttackedMetrics(BuildOutcomes(pipeline, report.paraphrases, clean, attacked, renamed, scope));
  return report;
}

}  // namespace fcattack
