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

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "fcattack/errors.h"
#include "fcattack/text.h"

namespace fcattack {
namespace {

struct Row {
  char32_t base;
  std::vector<char32_t> confusables;
};

const std::vector<Row>& BundledRows() {
  static const std::vector<Row> kRows = {
      {U'a', {0x0430, 0x0251}}, {U'c', {0x0441, 0x03F2}}, {U'd', {0x0501}},
      {U'e', {0x0435}},         {U'g', {0x0261}},         {U'h', {0x04BB}},
      {U'i', {0x0456}},         {U'j', {0x0458}},         {U'l', {0x04CF, 0x217C}},
      {U'm', {0x217F}},         {U'n', {0x0578}},         {U'o', {0x043E, 0x03BF, 0x0585}},
      {U'p', {0x0440, 0x03C1}}, {U'q', {0x051B}},         {U's', {0x0455}},
      {U'u', {0x057D}},         {U'v', {0x03BD, 0x0475}}, {U'w', {0x051D}},
      {U'x', {0x0445}},         {U'y', {0x0443, 0x04AF}}, {U'z', {0x1D22}},
      {U'A', {0x0410, 0x0391}}, {U'B', {0x0412, 0x0392}}, {U'C', {0x0421, 0x216D}},
      {U'D', {0x216E}},         {U'E', {0x0415, 0x0395}}, {U'H', {0x041D, 0x0397}},
      {U'I', {0x0406, 0x0399, 0x2160}},                   {U'J', {0x0408}},
      {U'K', {0x041A, 0x039A}}, {U'L', {0x216C}},         {U'M', {0x041C, 0x039C}},
      {U'N', {0x039D}},         {U'O', {0x041E, 0x039F}}, {U'P', {0x0420, 0x03A1}},
      {U'S', {0x0405}},         {U'T', {0x0422, 0x03A4}}, {U'V', {0x2164}},
      {U'X', {0x0425, 0x03A7}}, {U'Y', {0x04AE, 0x03A5}}, {U'Z', {0x0396}},
      {U'3', {0x0417}},
  };
  return kRows;
}

char32_t ParseCodepoint(const std::string& word, const std::string& source, size_t line) {
  std::string hex = word;
  if (hex.rfind("U+", 0) == 0 || hex.rfind("u+", 0) == 0) hex = hex.substr(2);
  if (hex.empty() || hex.size() > 6 ||
      hex.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
    throw ParseError(source, line, "bad codepoint '" + word + "'");
  }
  return static_cast<char32_t>(std::stoul(hex, nullptr, 16));
}

bool IsTokenCodepoint(char32_t cp) {
  return cp >= 0x80 || !IsSeparatorByte(static_cast<unsigned char>(cp));
}

}  // namespace

const HomoglyphTable& HomoglyphTable::Default() {
  static const HomoglyphTable kTable = [] {
    HomoglyphTable t;
    for (const Row& row : BundledRows()) {
      for (char32_t c : row.confusables) t.Add(row.base, c);
    }
    return t;
  }();
  return kTable;
}

void HomoglyphTable::Add(char32_t base, char32_t confusable) {
  if (base == confusable) throw ValidationError("codepoint cannot be its own confusable");
  if (to_base_.count(base)) throw ValidationError("base codepoint is itself a confusable");
  auto it = to_base_.find(confusable);
  if (it != to_base_.end()) {
    if (it->second == base) return;
    throw ValidationError("confusable mapped to two bases");
  }
  if (by_base_.count(confusable)) throw ValidationError("confusable is already a base");
  to_base_.emplace(confusable, base);
  by_base_[base].push_back(confusable);
}

HomoglyphTable HomoglyphTable::Parse(std::istream& in, const std::string& source_name) {
  HomoglyphTable table;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::vector<std::string> fields;
    for (std::string w; words >> w;) fields.push_back(w);
    if (fields.empty()) continue;
    if (fields.size() < 2) throw ParseError(source_name, line_no, "base without confusables");
    const char32_t base = ParseCodepoint(fields[0], source_name, line_no);
    for (size_t i = 1; i < fields.size(); ++i) {
      try {
        table.Add(base, ParseCodepoint(fields[i], source_name, line_no));
      } catch (const ValidationError& e) {
        throw ParseError(source_name, line_no, e.what());
      }
    }
  }
  return table;
}

HomoglyphTable HomoglyphTable::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return Parse(in, path);
}

const std::vector<char32_t>& HomoglyphTable::Confusables(char32_t base) const {
  static const std::vector<char32_t> kNone;
  auto it = by_base_.find(base);
  return it == by_base_.end() ? kNone : it->second;
}

char32_t HomoglyphTable::Base(char32_t cp) const {
  auto it = to_base_.find(cp);
  return it == to_base_.end() ? cp : it->second;
}

std::string HomoglyphTable::Skeleton(std::string_view utf8) const {
  std::u32string cps = DecodeUtf8(utf8);
  for (char32_t& c : cps) c = Base(c);
  return EncodeUtf8(cps);
}

bool IsInvisibleCodepoint(char32_t cp) {
  return std::find(kInvisibleCodepoints.begin(), kInvisibleCodepoints.end(), cp) !=
         kInvisibleCodepoints.end();
}

bool IsDirectionalityCodepoint(char32_t cp) {
  return cp == kLeftToRightOverride || cp == kRightToLeftOverride ||
         cp == kPopDirectionalFormatting;
}

std::string StripControlPerturbations(std::string_view utf8) {
  std::u32string out;
  for (char32_t c : DecodeUtf8(utf8)) {
    if (IsInvisibleCodepoint(c) || IsDirectionalityCodepoint(c)) continue;
    if (c == kBackspace) {
      if (!out.empty()) out.pop_back();
      continue;
    }
    out.push_back(c);
  }
  return EncodeUtf8(out);
}

std::string_view PerturbationTechniqueName(PerturbationTechnique technique) {
  switch (technique) {
    case PerturbationTechnique::kHomoglyph: return "homoglyph";
    case PerturbationTechnique::kReorder: return "reorder";
    case PerturbationTechnique::kDelete: return "delete";
    case PerturbationTechnique::kInvisible: return "invisible";
  }
  return "?";
}

PerturbationTechnique ParsePerturbationTechnique(std::string_view name) {
  for (auto t : {PerturbationTechnique::kHomoglyph, PerturbationTechnique::kReorder,
                 PerturbationTechnique::kDelete, PerturbationTechnique::kInvisible}) {
    if (PerturbationTechniqueName(t) == name) return t;
  }
  throw ConfigError("unknown perturbation technique '" + std::string(name) + "'");
}

PerturbationSites::PerturbationSites(PerturbationTechnique technique, std::string_view text,
                                     const HomoglyphTable& table)
    : technique_(technique), table_(&table), codepoints_(DecodeUtf8(text)) {
  const std::u32string& cps = codepoints_;
  switch (technique) {
    case PerturbationTechnique::kHomoglyph:
      for (size_t i = 0; i < cps.size(); ++i) {
        const size_t n = table.Confusables(cps[i]).size();
        if (n == 0) continue;
        sites_.push_back(i);
        choice_count_ = std::max(choice_count_, static_cast<int>(n));
      }
      break;
    case PerturbationTechnique::kInvisible:
    case PerturbationTechnique::kDelete:
      for (size_t i = 1; i < cps.size(); ++i) {
        if (IsTokenCodepoint(cps[i - 1]) && IsTokenCodepoint(cps[i])) sites_.push_back(i);
      }
      choice_count_ = technique == PerturbationTechnique::kInvisible
                          ? static_cast<int>(kInvisibleCodepoints.size())
                          : 26;
      break;
    case PerturbationTechnique::kReorder:
      for (size_t i = 0; i < cps.size(); ++i) {
        if (IsTokenCodepoint(cps[i])) sites_.push_back(i);
      }
      choice_count_ = 2;
      break;
  }
  if (sites_.empty()) choice_count_ = 0;
}

std::string PerturbationSites::Apply(const PerturbationGenome& genome) const {
  if (sites_.empty()) return EncodeUtf8(codepoints_);
  std::map<size_t, int> edits;  // codepoint index -> choice
  for (const PerturbationGene& gene : genome) {
    const size_t n = sites_.size();
    const size_t slot = static_cast<size_t>(((gene.position % static_cast<long>(n)) + n) % n);
    const int choice = ((gene.choice % choice_count_) + choice_count_) % choice_count_;
    edits.emplace(sites_[slot], choice);
  }
  std::u32string out;
  out.reserve(codepoints_.size() + 3 * edits.size());
  for (size_t i = 0; i < codepoints_.size(); ++i) {
    auto it = edits.find(i);
    const char32_t c = codepoints_[i];
    if (it == edits.end()) {
      out.push_back(c);
      continue;
    }
    const int choice = it->second;
    switch (technique_) {
      case PerturbationTechnique::kHomoglyph: {
        const auto& options = table_->Confusables(c);
        out.push_back(options[static_cast<size_t>(choice) % options.size()]);
        break;
      }
      case PerturbationTechnique::kInvisible:
        out.push_back(kInvisibleCodepoints[static_cast<size_t>(choice)]);
        out.push_back(c);
        break;
      case PerturbationTechnique::kDelete:
        out.push_back(static_cast<char32_t>(U'a' + choice));
        out.push_back(kBackspace);
        out.push_back(c);
        break;
      case PerturbationTechnique::kReorder:
        out.push_back(choice == 0 ? kLeftToRightOverride : kRightToLeftOverride);
        out.push_back(c);
        out.push_back(kPopDirectionalFormatting);
        break;
    }
  }
  return EncodeUtf8(out);
}

}  // namespace fcattack
