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


#include "fcattack/retrieval.h"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "fcattack/errors.h"
#include "fcattack/text.h"
#include "test_world.h"

namespace fcattack {
namespace {

using testing::MakeRepository;

// Straightforward recomputation over raw token lists.
struct Oracle {
  std::vector<std::vector<std::string>> sentences;

  double Df(const std::string& term) const {
    double df = 0;
    for (const auto& s : sentences) df += std::count(s.begin(), s.end(), term) > 0;
    return df;
  }
  bool Known(const std::string& term) const { return Df(term) > 0; }

  double TfIdfCosine(const std::vector<std::string>& query, const std::vector<std::string>& doc) const {
    const double n = static_cast<double>(sentences.size());
    std::map<std::string, double> q, d;
    for (const auto& t : query) {
      if (Known(t)) q[t] += 1;
    }
    for (const auto& t : doc) {
      if (Known(t)) d[t] += 1;
    }
    double dot = 0, qq = 0, dd = 0;
    for (auto& [t, tf] : q) {
      tf *= std::log((1 + n) / (1 + Df(t))) + 1;
      qq += tf * tf;
    }
    for (auto& [t, tf] : d) {
      tf *= std::log((1 + n) / (1 + Df(t))) + 1;
      dd += tf * tf;
    }
    for (const auto& [t, w] : q) {
      if (d.count(t)) dot += w * d.at(t);
    }
    return qq == 0 || dd == 0 ? 0.0 : dot / std::sqrt(qq * dd);
  }

  double Bm25(const std::vector<std::string>& query, const std::vector<std::string>& doc) const {
    const double n = static_cast<double>(sentences.size());
    double total = 0;
    for (const auto& s : sentences) total += s.size();
    const double avg = std::max(1.0, total / n);
    const double k1 = 1.2, b = 0.75;
    double score = 0;
    for (const std::string& t : std::set<std::string>(query.begin(), query.end())) {
      if (!Known(t)) continue;
      const double tf = std::count(doc.begin(), doc.end(), t);
      if (tf == 0) continue;
      const double idf = std::log(1 + (n - Df(t) + 0.5) / (Df(t) + 0.5));
      score += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * doc.size() / avg));
    }
    return score;
  }
};

class RetrievalOracleTest : public ::testing::Test {
 protected:
  void SetUp() override {
    texts_ = {"the cat sat on the mat", "a dog sat on a log",      "cats and dogs are pets",
              "the mat was red",        "Lovelace wrote notes",    "notes on the analytical engine",
              "the the the cat",        "engine engine notes dog"};
    std::vector<std::string> docs_a(texts_.begin(), texts_.begin() + 4);
    std::vector<std::string> docs_b(texts_.begin() + 4, texts_.end());
    repo_ = MakeRepository({{"a", docs_a}, {"b", docs_b}});
    for (const auto& t : texts_) oracle_.sentences.push_back(NormalizedTokens(t));
  }

  std::vector<std::string> texts_;
  Repository repo_;
  Oracle oracle_;
};

TEST_F(RetrievalOracleTest, TfIdfMatchesOracle) {
  const Index index = Index::Build(repo_);
  for (const std::string query : {"cat on mat", "notes engine", "dog dog log", "unknown words only", "The CAT"}) {
    for (const std::string& s : texts_) {
      EXPECT_NEAR(index.Score(query, s), oracle_.TfIdfCosine(NormalizedTokens(query), NormalizedTokens(s)), 1e-12)
          << query << " | " << s;
    }
  }
}

TEST_F(RetrievalOracleTest, Bm25MatchesOracle) {
  RetrieverOptions options;
  options.kind = RetrieverKind::kBm25;
  const Index index = Index::Build(repo_, options);
  for (const std::string query : {"cat on mat", "notes engine engine", "dog log", "zebra"}) {
    for (const std::string& s : texts_) {
      EXPECT_NEAR(index.Score(query, s), oracle_.Bm25(NormalizedTokens(query), NormalizedTokens(s)), 1e-12)
          << query << " | " << s;
    }
  }
}

TEST_F(RetrievalOracleTest, RetrieveRanksByScoreThenReference) {
  for (RetrieverKind kind : {RetrieverKind::kTfIdfCosine, RetrieverKind::kBm25}) {
    RetrieverOptions options;
    options.kind = kind;
    const Index index = Index::Build(repo_, options);
    const std::string claim = "the cat notes";
    const RankedEvidence top = index.Retrieve(repo_, claim, 3);
    ASSERT_LE(top.items.size(), 3u);
    std::vector<ScoredSentence> all = index.RankAll(repo_, claim);
    ASSERT_EQ(all.size(), repo_.sentence_count());
    for (size_t i = 0; i + 1 < all.size(); ++i) {
      EXPECT_TRUE(all[i].score > all[i + 1].score ||
                  (all[i].score == all[i + 1].score && all[i].ref < all[i + 1].ref));
    }
    for (size_t i = 0; i < top.items.size(); ++i) {
      EXPECT_EQ(top.items[i].ref, all[i].ref);
      EXPECT_GT(top.items[i].score, 0.0);
      EXPECT_DOUBLE_EQ(top.items[i].score, index.Score(claim, repo_.SentenceText(top.items[i].ref)));
    }
  }
}

TEST_F(RetrievalOracleTest, RetrieveExcludesZeroScores) {
  const Index index = Index::Build(repo_);
  EXPECT_TRUE(index.Retrieve(repo_, "zebra giraffe", 5).items.empty());
  EXPECT_EQ(index.Retrieve(repo_, "Lovelace", 5).items.size(), 1u);
}

TEST_F(RetrievalOracleTest, MaskedScoreEqualsScoreWithoutToken) {
  const Index index = Index::Build(repo_);
  const TokenizedText sentence("notes on the analytical engine");
  const std::vector<double> masked = index.MaskedSentenceScores("analytical engine notes", sentence);
  ASSERT_EQ(masked.size(), sentence.size());
  for (size_t i = 0; i < sentence.size(); ++i) {
    EXPECT_DOUBLE_EQ(masked[i], index.Score("analytical engine notes", sentence.WithoutToken(i)));
    EXPECT_DOUBLE_EQ(masked[i], index.MaskedSentenceScore("analytical engine notes", sentence, i));
  }
}

TEST_F(RetrievalOracleTest, StaleRepositoryIsRejected) {
  const Index index = Index::Build(repo_);
  const Repository changed = ApplyModifications(repo_, std::vector<Modification>{Modification::Add("a", "new.")}, false);
  EXPECT_THROW(index.Retrieve(changed, "cat"), StaleIndexError);
  EXPECT_NO_THROW(index.Retrieve(repo_.WithAttackMarks({{"a", 0}}), "cat"));
}

TEST_F(RetrievalOracleTest, SaveLoadRoundTrip) {
  for (RetrieverKind kind : {RetrieverKind::kTfIdfCosine, RetrieverKind::kBm25}) {
    RetrieverOptions options;
    options.kind = kind;
    const Index index = Index::Build(repo_, options);
    std::stringstream s;
    index.Write(s);
    const Index back = Index::Read(s);
    EXPECT_TRUE(back == index);
    EXPECT_DOUBLE_EQ(back.Score("cat mat", texts_[0]), index.Score("cat mat", texts_[0]));
  }
}

TEST(RetrievalTest, UnitVectorHasUnitNorm) {
  const Repository repo = MakeRepository({{"d", {"alpha beta", "beta gamma", "gamma delta alpha"}}});
  const Index index = Index::Build(repo);
  double sq = 0;
  for (const auto& [term, w] : index.UnitTfIdfVector("alpha beta beta gamma")) sq += w * w;
  EXPECT_NEAR(sq, 1.0, 1e-12);
  EXPECT_TRUE(index.UnitTfIdfVector("zzz").empty());
}

TEST(RetrievalTest, ParseKind) {
  EXPECT_EQ(ParseRetrieverKind("bm25"), RetrieverKind::kBm25);
  EXPECT_THROW(ParseRetrieverKind("dense"), ConfigError);
}

}  // namespace
}  // namespace fcattack
