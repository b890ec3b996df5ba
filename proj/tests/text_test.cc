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


#include "fcattack/text.h"

#include <random>

#include <gtest/gtest.h>

#include "fcattack/errors.h"

namespace fcattack {
namespace {

TEST(TokenizedTextTest, SplitsOnWhitespaceAndPunctuation) {
  TokenizedText t("Ada Lovelace, born 1815.");
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t.token(0), "Ada");
  EXPECT_EQ(t.token(1), "Lovelace");
  EXPECT_EQ(t.token(2), "born");
  EXPECT_EQ(t.token(3), "1815");
  EXPECT_EQ(t.normalized(1), "lovelace");
}

TEST(TokenizedTextTest, NonAsciiBytesStayInsideTokens) {
  // Cyrillic a (U+0430) and a zero-width space inside one word.
  TokenizedText t("p\xD0\xB0ris lo\xE2\x80\x8Bndon");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.token(0), "p\xD0\xB0ris");
  EXPECT_EQ(t.token(1), "lo\xE2\x80\x8Bndon");
}

TEST(TokenizedTextTest, EditsPreserveSurroundingBytes) {
  TokenizedText t("She  was born, in Oslo.");
  EXPECT_EQ(t.WithoutToken(1), "She   born, in Oslo.");
  EXPECT_EQ(t.WithReplacement(4, "Bergen"), "She  was born, in Bergen.");
  EXPECT_EQ(t.WithReplacements({{0, "He"}, {2, "raised"}}), "He  was raised, in Oslo.");
}

TEST(TokenizedTextTest, EmptyText) {
  TokenizedText t("  ... ");
  EXPECT_TRUE(t.empty());
  EXPECT_TRUE(NormalizedTokens("").empty());
}

TEST(TextTest, ContentWordsDropStopwordsAndDuplicates) {
  EXPECT_EQ(ContentWords("The cat and the Cat sat on a mat"),
            (std::vector<std::string>{"cat", "sat", "mat"}));
}

TEST(TextTest, EntityTokensAreCapitalisedNonStopwords) {
  EXPECT_EQ(EntityTokens("The painter Ada Quast lives in Peru and Ada paints."),
            (std::vector<std::string>{"Ada", "Quast", "Peru"}));
}

TEST(TextTest, NegationMarkers) {
  EXPECT_TRUE(IsNegationMarker("not"));
  EXPECT_TRUE(IsNegationMarker("never"));
  EXPECT_FALSE(IsNegationMarker("note"));
}

TEST(TextTest, Fnv1aKnownValues) {
  EXPECT_EQ(Fnv1a64(""), kFnvOffsetBasis);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(Fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(HexDigest(0xabcULL), "0000000000000abc");
}

TEST(Utf8Test, RoundTripsRandomCodepoints) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<uint32_t> pick(1, 0x10FFFF);
  for (int trial = 0; trial < 200; ++trial) {
    std::u32string cps;
    while (cps.size() < 20) {
      const char32_t cp = pick(rng);
      if (cp >= 0xD800 && cp <= 0xDFFF) continue;
      cps.push_back(cp);
    }
    EXPECT_EQ(DecodeUtf8(EncodeUtf8(cps)), cps);
  }
}

TEST(Utf8Test, RejectsMalformedInput) {
  EXPECT_THROW(DecodeUtf8("\xC3"), ValidationError);
  EXPECT_THROW(DecodeUtf8("\x80"), ValidationError);
  EXPECT_THROW(DecodeUtf8("\xED\xA0\x80"), ValidationError);
}

}  // namespace
}  // namespace fcattack
