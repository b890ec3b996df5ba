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


#include "fcattack/candidates.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "fcattack/errors.h"

namespace fcattack {
namespace {

EmbeddingLexicon SmallLexicon() {
  EmbeddingLexicon lex;
  lex.Add("born", {0.0, 0.0});
  lex.Add("Raised", {0.3, 0.0});
  lex.Add("bred", {0.0, 0.3});
  lex.Add("sold", {3.0, 4.0});
  return lex;
}

TEST(EmbeddingLexiconTest, NeighborsSortedWithinRadius) {
  const EmbeddingLexicon lex = SmallLexicon();
  EXPECT_EQ(lex.size(), 4u);
  EXPECT_EQ(lex.dimension(), 2u);
  EXPECT_TRUE(lex.Contains("RAISED"));
  const auto n = lex.Neighbors("born", 1.0);
  ASSERT_EQ(n.size(), 2u);
  EXPECT_EQ(n[0].word, "bred");  // tie broken by word
  EXPECT_EQ(n[1].word, "raised");
  EXPECT_NEAR(n[0].distance, 0.3, 1e-12);
  EXPECT_EQ(lex.Neighbors("born", 5.0).back().word, "sold");
  EXPECT_NEAR(lex.Neighbors("born", 5.0).back().distance, 5.0, 1e-12);
  EXPECT_EQ(lex.Neighbors("born", 1.0, 1).size(), 1u);
  EXPECT_TRUE(lex.Neighbors("missing", 9.0).empty());
}

TEST(EmbeddingLexiconTest, ValidationAndRoundTrip) {
  EmbeddingLexicon lex = SmallLexicon();
  EXPECT_THROW(lex.Add("x", {1.0}), ValidationError);
  EXPECT_THROW(lex.Add("BORN", {1.0, 1.0}), ValidationError);
  std::stringstream buf;
  lex.Write(buf);
  const EmbeddingLexicon back = EmbeddingLexicon::Parse(buf);
  ASSERT_EQ(back.size(), lex.size());
  EXPECT_EQ(*back.Find("sold"), *lex.Find("sold"));

  std::istringstream bad("a 1 2\nb 1 x\n");
  try {
    EmbeddingLexicon::Parse(bad, "lex.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("lex.txt:2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(EmbeddingLexicon::Load("/nonexistent/lex.txt"), IoError);
}

TEST(CandidatePoolTest, ParseWriteRoundTrip) {
  std::istringstream in(
      "{\"key\":\"d#0@2\",\"candidates\":[\"raised\",\"bred\"],\"scores\":[0.5,0.25]}\n"
      "\n"
      "{\"key\":\"token:born\",\"candidates\":[\"reared\"]}\n");
  const CandidatePool pool = CandidatePool::Parse(in);
  EXPECT_EQ(pool.size(), 2u);
  ASSERT_NE(pool.Find("d#0@2"), nullptr);
  EXPECT_EQ(pool.Find("d#0@2")->at(1), (PoolCandidate{"bred", 0.25}));
  EXPECT_EQ(pool.Find("token:born")->at(0).score, 1.0);
  std::stringstream buf;
  pool.Write(buf);
  EXPECT_EQ(CandidatePool::Parse(buf), pool);

  std::istringstream mismatch("{\"key\":\"k\",\"candidates\":[\"a\"],\"scores\":[1,2]}\n");
  EXPECT_THROW(CandidatePool::Parse(mismatch), ParseError);
  std::istringstream not_json("{key}\n");
  EXPECT_THROW(CandidatePool::Parse(not_json), ParseError);
}

TEST(CandidateGeneratorTest, LexiconKeepsCapitalization) {
  const EmbeddingLexicon lex = SmallLexicon();
  LexiconCandidateGenerator gen(lex, 0.5);
  const TokenizedText s("Born in Peru.");
  const auto c = gen.Candidates(s, 0, "");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].text, "Bred");
  EXPECT_NEAR(c[0].score, std::exp(-0.3), 1e-12);
}

TEST(CandidateGeneratorTest, PoolPrefersPositionKey) {
  CandidatePool pool;
  pool.Add(PositionKey("d#0", 1), std::vector<std::string>{"raised", "BORN"});
  pool.Add(TokenKey("born"), std::vector<std::string>{"reared"});
  PoolCandidateGenerator gen(pool);
  const TokenizedText s("Ada born here");
  auto at_pos = gen.Candidates(s, 1, "d#0");
  ASSERT_EQ(at_pos.size(), 1u);  // identical token dropped
  EXPECT_EQ(at_pos[0].text, "raised");
  auto fallback = gen.Candidates(s, 1, "d#9");
  ASSERT_EQ(fallback.size(), 1u);
  EXPECT_EQ(fallback[0].text, "reared");
  EXPECT_TRUE(gen.Candidates(s, 0, "d#0").empty());
}

TEST(CandidateKeysTest, Formats) {
  EXPECT_EQ(PositionKey("doc#3", 7), "doc#3@7");
  EXPECT_EQ(TokenKey("born"), "token:born");
  EXPECT_EQ(PromptKey("abc"), HexDigest(Fnv1a64("abc")));
  EXPECT_EQ(MatchCapitalization("Peru", "chile"), "Chile");
  EXPECT_EQ(MatchCapitalization("peru", "Chile"), "Chile");
}

TEST(TidySentenceTest, Normalizes) {
  EXPECT_EQ(TidySentence("  a   b , c ,, d  "), "a b, c, d.");
  EXPECT_EQ(TidySentence("Done."), "Done.");
  EXPECT_EQ(TidySentence(""), "");
}

TEST(RuleBasedRewriterTest, ParaphrasesDeterministicAndTidy) {
  RuleBasedRewriter rw;
  const std::string text = "Ada Quast was born in Peru, and she studied chemistry in Lima.";
  const auto a = rw.Paraphrases(text, 6, 4);
  EXPECT_EQ(a, rw.Paraphrases(text, 6, 4));
  ASSERT_EQ(a.size(), 6u);
  bool hid_name = false;
  for (const std::string& p : a) {
    EXPECT_EQ(p.back(), '.');
    EXPECT_EQ(p, TidySentence(p));
    hid_name = hid_name || p.find("person") != std::string::npos;
  }
  EXPECT_TRUE(hid_name);
  EXPECT_EQ(a[0], TidySentence(text));
}

TEST(RuleBasedRewriterTest, GenerateKeepsPromptPrefix) {
  RuleBasedRewriter rw;
  const std::string prompt = "Ada Quast was born in Peru";
  const auto g = rw.Generate(prompt, 5, 1);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g, rw.Generate(prompt, 5, 1));
  for (const std::string& s : g) {
    EXPECT_EQ(s.rfind("Ada", 0), 0u) << s;
    EXPECT_EQ(s.back(), '.');
  }
}

}  // namespace
}  // namespace fcattack
