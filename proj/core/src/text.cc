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

#include <algorithm>
#include <cctype>
#include <array>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "fcattack/errors.h"

namespace fcattack {

bool IsSeparatorByte(unsigned char c) {
  switch (c) {
    case ' ':
    case '\t':
    case '\n':
    case '\r':
    case '\f':
    case '\v':
      return true;
    default:
      break;
  }
  return c < 0x80 && ((c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) ||
                      (c >= 0x5b && c <= 0x60) || (c >= 0x7b && c <= 0x7e));
}

std::string AsciiLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

namespace {

std::vector<TokenSpan> Spans(std::string_view text) {
  std::vector<TokenSpan> spans;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSeparatorByte(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    size_t begin = i;
    while (i < text.size() && !IsSeparatorByte(static_cast<unsigned char>(text[i]))) ++i;
    spans.push_back({begin, i});
  }
  return spans;
}

}  // namespace

TokenizedText::TokenizedText(std::string text)
    : text_(std::move(text)), spans_(Spans(text_)) {}

std::string_view TokenizedText::token(size_t i) const {
  const TokenSpan& s = spans_.at(i);
  return std::string_view(text_).substr(s.begin, s.end - s.begin);
}

std::string TokenizedText::normalized(size_t i) const { return AsciiLower(token(i)); }

std::vector<std::string> TokenizedText::NormalizedTokens() const {
  std::vector<std::string> out;
  out.reserve(spans_.size());
  for (size_t i = 0; i < spans_.size(); ++i) out.push_back(normalized(i));
  return out;
}

std::string TokenizedText::WithoutToken(size_t i) const { return WithReplacement(i, ""); }

std::string TokenizedText::WithReplacement(size_t i, std::string_view replacement) const {
  const TokenSpan& s = spans_.at(i);
  std::string out;
  out.reserve(text_.size() + replacement.size());
  out.append(text_, 0, s.begin);
  out.append(replacement);
  out.append(text_, s.end, std::string::npos);
  return out;
}

std::string TokenizedText::WithReplacements(
    const std::vector<std::pair<size_t, std::string>>& replacements) const {
  std::vector<std::pair<size_t, const std::string*>> sorted;
  sorted.reserve(replacements.size());
  for (const auto& [pos, text] : replacements) {
    if (pos >= spans_.size()) throw std::out_of_range("token position out of range");
    sorted.emplace_back(pos, &text);
  }
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  size_t cursor = 0;
  for (size_t k = 0; k < sorted.size(); ++k) {
    if (k > 0 && sorted[k].first == sorted[k - 1].first) {
      throw std::invalid_argument("duplicate replacement position");
    }
    const TokenSpan& s = spans_[sorted[k].first];
    out.append(text_, cursor, s.begin - cursor);
    out.append(*sorted[k].second);
    cursor = s.end;
  }
  out.append(text_, cursor, std::string::npos);
  return out;
}

std::vector<std::string> NormalizedTokens(std::string_view text) {
  std::vector<std::string> out;
  for (const TokenSpan& s : Spans(text)) out.push_back(AsciiLower(text.substr(s.begin, s.end - s.begin)));
  return out;
}

bool IsStopword(std::string_view token) {
  static const std::unordered_set<std::string_view> kStopwords = {
      "a",     "an",    "the",   "is",    "was",   "were",  "are",  "be",
      "been",  "being", "am",    "in",    "of",    "to",    "and",  "or",
      "as",    "at",    "by",    "for",   "from",  "on",    "with", "that",
      "this",  "these", "those", "it",    "its",   "which", "who",  "whom",
      "where", "when",  "has",   "have",  "had",   "he",    "she",  "they",
      "his",   "her",   "their", "them",  "him",   "there", "then", "than",
      "also",  "into",  "over",  "under", "about", "after", "before",
      "while", "during", "but",  "s",     "do",    "does",  "did",  "so",
      "such",  "some",  "any",   "all",   "both",  "each",  "other", "own",
      "same",  "very",  "can",   "will",  "would", "could", "should", "may",
      "might", "must",  "i",     "we",    "you",   "our",   "your", "my",
      "me",    "us",    "what",  "why",   "how",   "here",  "one",  "person"};
  return kStopwords.count(token) > 0;
}

bool IsNegationMarker(std::string_view token) {
  static const std::unordered_set<std::string_view> kNegations = {
      "not", "never", "no", "none", "neither", "nor", "nobody", "nothing",
      "false", "incorrect", "untrue", "contrary", "cannot", "isn", "wasn",
      "didn", "doesn", "t", "without", "refuted", "denied"};
  return kNegations.count(token) > 0;
}

std::vector<std::string> ContentWords(std::string_view text) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (std::string& tok : NormalizedTokens(text)) {
    if (IsStopword(tok)) continue;
    if (seen.insert(tok).second) out.push_back(std::move(tok));
  }
  return out;
}

std::vector<std::string> EntityTokens(std::string_view text) {
  TokenizedText tokens{std::string(text)};
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string_view tok = tokens.token(i);
    if (!std::isupper(static_cast<unsigned char>(tok[0]))) continue;
    std::string norm = tokens.normalized(i);
    if (IsStopword(norm)) continue;
    if (seen.insert(norm).second) out.emplace_back(tok);
  }
  return out;
}

uint64_t Fnv1a64(std::string_view bytes, uint64_t basis) {
  uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t HashCombine(uint64_t seed, uint64_t value) {
  // splitmix64 finalizer over the xor-shifted pair.
  uint64_t z = seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string HexDigest(uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return std::string(buf, 16);
}

std::u32string DecodeUtf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  size_t i = 0;
  auto bad = [&]() {
    throw ValidationError("invalid UTF-8 at byte offset " + std::to_string(i));
  };
  while (i < bytes.size()) {
    unsigned char c = static_cast<unsigned char>(bytes[i]);
    char32_t cp = 0;
    size_t extra = 0;
    if (c < 0x80) {
      cp = c;
      extra = 0;
    } else if ((c & 0xe0) == 0xc0) {
      cp = c & 0x1f;
      extra = 1;
    } else if ((c & 0xf0) == 0xe0) {
      cp = c & 0x0f;
      extra = 2;
    } else if ((c & 0xf8) == 0xf0) {
      cp = c & 0x07;
      extra = 3;
    } else {
      bad();
    }
    if (i + extra >= bytes.size()) bad();
    for (size_t k = 1; k <= extra; ++k) {
      unsigned char cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xc0) != 0x80) bad();
      cp = (cp << 6) | (cc & 0x3f);
    }
    static constexpr std::array<char32_t, 4> kMin = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) bad();
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

void AppendUtf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

std::string EncodeUtf8(std::u32string_view codepoints) {
  std::string out;
  out.reserve(codepoints.size());
  for (char32_t cp : codepoints) AppendUtf8(out, cp);
  return out;
}

}  // namespace fcattack
