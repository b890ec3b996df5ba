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

#ifndef FCATTACK_TEXT_H_
#define FCATTACK_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fcattack {

// Tokens are maximal runs of bytes that are neither ASCII whitespace nor
// ASCII punctuation. Bytes >= 0x80 and ASCII control characters other than
// whitespace are token bytes, so any inserted codepoint outside printable
// ASCII stays glued to the token it lands in.
bool IsSeparatorByte(unsigned char c);

std::string AsciiLower(std::string_view text);

struct TokenSpan {
  size_t begin = 0;
  size_t end = 0;
};

// A text together with the byte spans of its tokens. Edits splice the
// original bytes, so everything outside the edited span is preserved.
class TokenizedText {
 public:
  TokenizedText() = default;
  explicit TokenizedText(std::string text);

  const std::string& text() const { return text_; }
  size_t size() const { return spans_.size(); }
  bool empty() const { return spans_.empty(); }
  const TokenSpan& span(size_t i) const { return spans_.at(i); }
  std::string_view token(size_t i) const;
  std::string normalized(size_t i) const;
  std::vector<std::string> NormalizedTokens() const;

  // Text with token `i` removed (its bytes deleted, separators kept).
  std::string WithoutToken(size_t i) const;
  std::string WithReplacement(size_t i, std::string_view replacement) const;
  // Replacements keyed by token position; positions must be distinct.
  std::string WithReplacements(
      const std::vector<std::pair<size_t, std::string>>& replacements) const;

 private:
  std::string text_;
  std::vector<TokenSpan> spans_;
};

std::vector<std::string> NormalizedTokens(std::string_view text);

// Closed-class English function words.
bool IsStopword(std::string_view normalized_token);
// not, never, no, false, ...
bool IsNegationMarker(std::string_view normalized_token);

// Normalized tokens that are not stopwords, in order of first appearance,
// without duplicates.
std::vector<std::string> ContentWords(std::string_view text);

// Capitalised tokens other than function words (a stand-in for named
// entities), in order, deduplicated by normalized form.
std::vector<std::string> EntityTokens(std::string_view text);

inline constexpr uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
uint64_t Fnv1a64(std::string_view bytes, uint64_t basis = kFnvOffsetBasis);
uint64_t HashCombine(uint64_t seed, uint64_t value);
std::string HexDigest(uint64_t value);

// UTF-8 helpers. Decoding throws ValidationError on malformed input.
std::u32string DecodeUtf8(std::string_view bytes);
std::string EncodeUtf8(std::u32string_view codepoints);
void AppendUtf8(std::string& out, char32_t codepoint);

}  // namespace fcattack

#endif  // FCATTACK_TEXT_H_
