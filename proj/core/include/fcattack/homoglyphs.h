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

#ifndef FCATTACK_HOMOGLYPHS_H_
#define FCATTACK_HOMOGLYPHS_H_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fcattack/optimizers.h"

namespace fcattack {

// Visually confusable codepoints keyed by their Latin base character.
//
// Extension format, one base per line:
//   U+0061 U+0430 U+0251   # base followed by its confusables
// Blank lines and '#' comments are ignored. A confusable may belong to one
// base only.
class HomoglyphTable {
 public:
  // Bundled table: Cyrillic, Greek, Armenian and Roman-numeral lookalikes of
  // Latin letters and a few digits.
  static const HomoglyphTable& Default();
  static HomoglyphTable Parse(std::istream& in, const std::string& source_name = "<stream>");
  static HomoglyphTable Load(const std::string& path);

  void Add(char32_t base, char32_t confusable);
  // Empty when `base` has no confusables.
  const std::vector<char32_t>& Confusables(char32_t base) const;
  // The base of a confusable, or `cp` itself.
  char32_t Base(char32_t cp) const;
  std::string Skeleton(std::string_view utf8) const;
  size_t confusable_count() const { return to_base_.size(); }
  const std::map<char32_t, std::vector<char32_t>>& entries() const { return by_base_; }

 private:
  std::map<char32_t, std::vector<char32_t>> by_base_;
  std::map<char32_t, char32_t> to_base_;
};

inline constexpr std::array<char32_t, 3> kInvisibleCodepoints = {0x200B, 0x200C, 0x200D};
inline constexpr char32_t kBackspace = 0x0008;
inline constexpr char32_t kLeftToRightOverride = 0x202D;
inline constexpr char32_t kRightToLeftOverride = 0x202E;
inline constexpr char32_t kPopDirectionalFormatting = 0x202C;

bool IsInvisibleCodepoint(char32_t cp);
bool IsDirectionalityCodepoint(char32_t cp);
// Removes invisible and directionality codepoints and every
// (filler, backspace) pair.
std::string StripControlPerturbations(std::string_view utf8);

enum class PerturbationTechnique { kHomoglyph, kReorder, kDelete, kInvisible };

std::string_view PerturbationTechniqueName(PerturbationTechnique technique);
PerturbationTechnique ParsePerturbationTechnique(std::string_view name);

// Where a technique can act on a text, and how a genome decodes.
//   Homoglyph: letters with confusables; choice picks the confusable.
//   Invisible: boundaries between two codepoints of one token; choice picks
//              the zero-width codepoint.
//   Delete:    same boundaries; choice picks the filler letter that precedes
//              the inserted backspace.
//   Reorder:   codepoints inside tokens; the codepoint is wrapped in a
//              left-to-right (choice 0) or right-to-left (choice 1) override
//              closed by a pop. A single wrapped codepoint renders unchanged.
class PerturbationSites {
 public:
  PerturbationSites(PerturbationTechnique technique, std::string_view text,
                    const HomoglyphTable& table = HomoglyphTable::Default());

  PerturbationTechnique technique() const { return technique_; }
  size_t position_count() const { return sites_.size(); }
  int choice_count() const { return choice_count_; }
  // Genes with out-of-range values wrap around; repeated positions keep the
  // first gene.
  std::string Apply(const PerturbationGenome& genome) const;

 private:
  PerturbationTechnique technique_;
  const HomoglyphTable* table_;
  std::u32string codepoints_;
  std::vector<size_t> sites_;  // codepoint indices
  int choice_count_ = 0;
};

}  // namespace fcattack

#endif  // FCATTACK_HOMOGLYPHS_H_
