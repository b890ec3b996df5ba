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


#include "fcattack/homoglyphs.h"

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fcattack/errors.h"
#include "fcattack/text.h"

namespace fcattack {
namespace {

constexpr PerturbationTechnique kAll[] = {
    PerturbationTechnique::kHomoglyph, PerturbationTechnique::kReorder,
    PerturbationTechnique::kDelete, PerturbationTechnique::kInvisible};

std::string Recover(PerturbationTechnique t, const std::string& s) {
  return t == PerturbationTechnique::kHomoglyph ? HomoglyphTable::Default().Skeleton(s)
                                                 : StripControlPerturbations(s);
}

TEST(HomoglyphTableTest, DefaultIsConsistent) {
  const HomoglyphTable& table = HomoglyphTable::Default();
  EXPECT_GT(table.confusable_count(), 20u);
  for (const auto& [base, list] : table.entries()) {
    for (char32_t c : list) {
      EXPECT_NE(c, base);
      EXPECT_EQ(table.Base(c), base);
    }
  }
  EXPECT_FALSE(table.Confusables(U'a').empty());
  EXPECT_TRUE(table.Confusables(U'~').empty());
  EXPECT_EQ(table.Base(U'z'), U'z');
}

TEST(HomoglyphTableTest, ParseAndConflicts) {
  std::istringstream in("# comment\n\nU+0061 U+0430 U+0251\nU+006F U+043E  # o\n");
  HomoglyphTable t = HomoglyphTable::Parse(in);
  EXPECT_EQ(t.confusable_count(), 3u);
  EXPECT_EQ(t.Base(0x0251), U'a');
  EXPECT_EQ(t.Skeleton("\xd0\xb0\xd0\xbe"), "ao");

  std::istringstream dup("U+0061 U+0430\nU+006F U+0430\n");
  EXPECT_THROW(HomoglyphTable::Parse(dup), ParseError);
  std::istringstream bad("U+ZZ U+0430\n");
  EXPECT_THROW(HomoglyphTable::Parse(bad), ParseError);
  EXPECT_THROW(HomoglyphTable::Load("/nonexistent/table.txt"), IoError);
}

TEST(StripTest, RemovesControlsAndBackspacePairs) {
  std::u32string s = U"ab";
  s.insert(1, 1, kInvisibleCodepoints[1]);
  s += U"x";
  s += kBackspace;
  s += kRightToLeftOverride;
  s += U"c";
  s += kPopDirectionalFormatting;
  EXPECT_EQ(StripControlPerturbations(EncodeUtf8(s)), "abc");
  EXPECT_EQ(StripControlPerturbations("plain text"), "plain text");
}

TEST(PerturbationSitesTest, EmptyGenomeIsIdentity) {
  const std::string text = "Ada Quast was born in Peru.";
  for (PerturbationTechnique t : kAll) {
    PerturbationSites sites(t, text);
    EXPECT_GT(sites.position_count(), 0u) << PerturbationTechniqueName(t);
    EXPECT_GT(sites.choice_count(), 0);
    EXPECT_EQ(sites.Apply({}), text);
  }
}

TEST(PerturbationSitesTest, RandomGenomesRecoverOriginal) {
  const std::string text = "Ada Quast was born in Peru and studied chemistry.";
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> any(-50, 50);
  for (PerturbationTechnique t : kAll) {
    PerturbationSites sites(t, text);
    for (int trial = 0; trial < 100; ++trial) {
      PerturbationGenome g(1 + trial % 8);
      for (PerturbationGene& gene : g) gene = {any(rng), any(rng)};
      const std::string out = sites.Apply(g);
      EXPECT_NE(out, text) << PerturbationTechniqueName(t);
      EXPECT_EQ(Recover(t, out), text) << PerturbationTechniqueName(t);
      EXPECT_NO_THROW(DecodeUtf8(out));
    }
  }
}

TEST(PerturbationSitesTest, TokenCountPreserved) {
  const std::string text = "alpha beta gamma";
  for (PerturbationTechnique t : kAll) {
    PerturbationSites sites(t, text);
    const std::string out = sites.Apply({{0, 0}, {3, 1}});
    EXPECT_EQ(TokenizedText(out).size(), 3u) << PerturbationTechniqueName(t);
  }
}

TEST(PerturbationSitesTest, TechniqueNames) {
  for (PerturbationTechnique t : kAll) {
    EXPECT_EQ(ParsePerturbationTechnique(PerturbationTechniqueName(t)), t);
  }
  EXPECT_THROW(ParsePerturbationTechnique("zalgo"), ConfigError);
}

}  // namespace
}  // namespace fcattack
