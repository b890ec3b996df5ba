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

#include <gtest/gtest.h>

#include "fcattack/camouflage.h"
#include "fcattack/errors.h"
#include "metric_oracle.h"
#include "test_world.h"

namespace fcattack {
namespace {

using testing::World;

TEST(MetricsTest, MatchesOracleOnRandomOutcomes) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const auto outcomes = testing::RandomOutcomes(seed);
    const MetricsRecord m = AttackedMetrics(outcomes);
    EXPECT_TRUE(testing::MatchesOracle(m, testing::ComputeOracle(outcomes))) << "seed " << seed;
    size_t attacked = 0;
    for (const auto& o : outcomes) attacked += o.attacked;
    EXPECT_EQ(m.attacked_claims, attacked);
  }
}

TEST(MetricsTest, HandWorkedExample) {
  std::vector<AttackOutcome> o(4);
  o[0] = {.gold = Label::kSup, .clean_label = Label::kSup, .attacked_label = Label::kNei};
  o[0].attacked = true;
  o[0].attacked_top_marked = {false, true};
  o[1] = {.gold = Label::kSup, .clean_label = Label::kSup, .attacked_label = Label::kSup};
  o[1].attacked = true;
  o[1].attacked_top_marked = {false};
  o[2] = {.gold = Label::kRef, .clean_label = Label::kRef, .attacked_label = Label::kSup};
  o[3] = {.gold = Label::kRef, .clean_label = Label::kNei, .attacked_label = Label::kNei};
  const MetricsRecord m = AttackedMetrics(o);
  EXPECT_DOUBLE_EQ(*m.accuracy[0], 50.0);
  EXPECT_DOUBLE_EQ(*m.accuracy[1], 0.0);
  EXPECT_FALSE(m.accuracy[2].has_value());
  EXPECT_DOUBLE_EQ(*m.attack_recall, 50.0);
  EXPECT_DOUBLE_EQ(*m.to_nei_ratio, 50.0);
  EXPECT_EQ(m.changed, 2u);
  EXPECT_DOUBLE_EQ(*CleanMetrics(o).accuracy[1], 50.0);
  EXPECT_FALSE(ToNeiRatio(std::span<const AttackOutcome>(o).subspan(1, 1)).has_value());
  EXPECT_FALSE(AttackRecall(std::span<const AttackOutcome>(o).subspan(2)).has_value());
}

TEST(MetricsTest, AccuracyLengthMismatchThrows) {
  const std::vector<Label> a = {Label::kSup}, b;
  EXPECT_THROW(AccuracyByLabel(a, b), ValidationError);
}

TEST(HistogramTest, BinsAndClamping) {
  Histogram h({0.0, 0.5, 1.0});
  for (double v : {-1.0, 0.0, 0.49, 0.5, 1.0, 7.0}) h.Add(v);
  EXPECT_EQ(h.counts, (std::vector<size_t>{3, 3}));
  EXPECT_EQ(h.total(), 6u);
  EXPECT_THROW(Histogram({1.0}), ConfigError);
  EXPECT_THROW(Histogram({1.0, 0.0}), ConfigError);
  EXPECT_EQ(DistanceBinEdges().size(), 16u);
  EXPECT_DOUBLE_EQ(DistanceBinEdges().back(), 1.5);
}

TEST(HistogramTest, ClaimEvidenceDistanceBounds) {
  const Index& index = World().index;
  const Claim& c = World().corpus.eval[0];
  EXPECT_NEAR(ClaimEvidenceDistance(index, c.text, c.text), 0.0, 1e-12);
  const double d = ClaimEvidenceDistance(index, c.text, "zzzz qqqq");
  EXPECT_NEAR(d, 1.0, 1e-12);  // unit vector against the empty vector
  for (const Claim& claim : World().corpus.eval) {
    for (const SentenceRef& ref : claim.gold_evidence) {
      const double x = ClaimEvidenceDistance(index, claim.text, World().corpus.repo.SentenceText(ref));
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, std::sqrt(2.0) + 1e-12);
    }
  }
}

TEST(TraversalTest, CountsOnlyCorrectToWrong) {
  EXPECT_EQ(ConfidenceBin(0.0, 10), 0u);
  EXPECT_EQ(ConfidenceBin(0.95, 10), 9u);
  EXPECT_EQ(ConfidenceBin(1.0, 10), 9u);
  EXPECT_EQ(ConfidenceBin(0.3, 10), 3u);
  std::vector<AttackOutcome> o(3);
  o[0] = {.gold = Label::kSup, .clean_label = Label::kSup, .clean_confidence = 0.92,
          .attacked_label = Label::kNei, .attacked_confidence = 0.41};
  o[1] = {.gold = Label::kSup, .clean_label = Label::kSup, .attacked_label = Label::kSup};
  o[2] = {.gold = Label::kRef, .clean_label = Label::kNei, .attacked_label = Label::kSup};
  const Histogram2D h = ConfidenceTraversal(o);
  EXPECT_EQ(h.total(), 1u);
  EXPECT_EQ(h.counts[9 * 10 + 4], 1u);
  EXPECT_THROW(ConfidenceTraversal(o, 0), ConfigError);
}

TEST(SelectParaphraseTest, KeepsEntitiesAndSkipsExactCopies) {
  const Index& index = World().index;
  for (const Claim& claim : World().corpus.eval) {
    const auto* pool = World().corpus.claim_paraphrases.Find(claim.id);
    ASSERT_NE(pool, nullptr) << claim.id;
    const auto chosen = SelectParaphrase(claim, *pool, index);
    if (!chosen) continue;
    EXPECT_NE(NormalizedTokens(*chosen), NormalizedTokens(claim.text));
    const auto tokens = NormalizedTokens(*chosen);
    for (const std::string& e : EntityTokens(claim.text)) {
      EXPECT_NE(std::find(tokens.begin(), tokens.end(), AsciiLower(e)), tokens.end()) << *chosen;
    }
    // Nothing admissible scores higher.
    for (const PoolCandidate& c : *pool) {
      if (NormalizedTokens(c.text) == NormalizedTokens(claim.text)) continue;
      bool keeps = true;
      const auto ct = NormalizedTokens(c.text);
      for (const std::string& e : EntityTokens(claim.text)) {
        keeps = keeps && std::find(ct.begin(), ct.end(), AsciiLower(e)) != ct.end();
      }
      if (keeps) EXPECT_LE(index.Score(claim.text, c.text), index.Score(claim.text, *chosen));
    }
  }
  Claim c{.id = "x", .text = "Ada Quast was born in Peru."};
  EXPECT_FALSE(SelectParaphrase(c, {{"Ada Quast was born in Peru", 1.0}, {"She was born in Peru.", 1.0}},
                                index));
}

TEST(BuildOutcomesTest, PerClaimUsesOnlyOwnModifications) {
  size_t kept = 0;
  const ClaimSet claims = World().corpus.eval.Filter([&](const Claim& c) {
    return c.label != Label::kNei && kept++ < 6;
  });
  CamouflageConfig config;
  config.epsilon = 12;
  const AttackResult r = RunCamouflage(claims, World().corpus.repo, World().index, config, {});
  const Pipeline pipeline(World().verifier);
  const auto per_claim = BuildOutcomes(pipeline, claims, World().corpus.repo, r.repo, r.records);
  ASSERT_EQ(per_claim.size(), claims.size());
  for (size_t i = 0; i < claims.size(); ++i) {
    const AttackOutcome& o = per_claim[i];
    const Repository own = ApplyModifications(World().corpus.repo, r.records[i].modifications, true);
    const Prediction p = pipeline.PredictAll(claims.Filter([&](const Claim& c) { return c.id == claims[i].id; }), own)[0];
    EXPECT_EQ(o.attacked_label, p.label);
    EXPECT_EQ(o.attacked_top, p.top);
    EXPECT_EQ(o.attack_refs, r.records[i].applied);
    EXPECT_EQ(o.sentence_success.size(), r.records[i].edits.size());
    EXPECT_EQ(o.attacked_top_marked.size(), o.attacked_top.size());
  }
  const auto joint = BuildOutcomes(pipeline, claims, World().corpus.repo, r.repo, r.records,
                                   EvaluationScope::kJoint);
  const auto joint_preds = pipeline.PredictAll(claims, r.repo);
  for (size_t i = 0; i < claims.size(); ++i) EXPECT_EQ(joint[i].attacked_label, joint_preds[i].label);
  EXPECT_EQ(ParseEvaluationScope(EvaluationScopeName(EvaluationScope::kJoint)), EvaluationScope::kJoint);
  EXPECT_THROW(ParseEvaluationScope("global"), ConfigError);
}

TEST(BuildOutcomesTest, NoRecordsMeansNoChange) {
  const Pipeline pipeline(World().verifier);
  const auto o = BuildOutcomes(pipeline, World().corpus.eval, World().corpus.repo, World().corpus.repo, {});
  for (const AttackOutcome& x : o) {
    EXPECT_EQ(x.clean_label, x.attacked_label);
    EXPECT_FALSE(x.attacked);
  }
  EXPECT_FALSE(ToNeiRatio(o).has_value());
}

TEST(ParaphraseRobustnessTest, SurvivorsShareCleanPrediction) {
  const Pipeline pipeline(World().verifier);
  const auto report = ParaphraseRobustness(World().corpus.eval, World().corpus.claim_paraphrases,
                                           pipeline, World().corpus.repo, World().corpus.repo, {});
  EXPECT_EQ(report.considered, World().corpus.eval.size());
  EXPECT_EQ(report.survived + report.dropped.size(), report.considered);
  ASSERT_EQ(report.originals.size(), report.paraphrases.size());
  const auto a = pipeline.PredictAll(report.originals, World().corpus.repo);
  const auto b = pipeline.PredictAll(report.paraphrases, World().corpus.repo);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].label, b[i].label);
}

}  // namespace
}  // namespace fcattack
