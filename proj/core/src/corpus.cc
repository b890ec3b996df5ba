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

#include "fcattack/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "fcattack/errors.h"
#include "fcattack/text.h"
#include "json.hpp"

namespace fcattack {

using nlohmann::json;

std::string_view LabelName(Label label) {
  switch (label) {
    case Label::kSup:
      return "SUP";
    case Label::kRef:
      return "REF";
    case Label::kNei:
      return "NEI";
  }
  return "?";
}

Label ParseLabel(std::string_view name) {
  if (name == "SUP") return Label::kSup;
  if (name == "REF") return Label::kRef;
  if (name == "NEI") return Label::kNei;
  throw ValidationError("unknown label '" + std::string(name) + "'");
}

std::string SentenceRef::ToString() const { return doc_id + "#" + std::to_string(index); }

SentenceRef SentenceRef::Parse(std::string_view text) {
  size_t hash = text.rfind('#');
  if (hash == std::string_view::npos || hash == 0 || hash + 1 >= text.size()) {
    throw ValidationError("malformed sentence reference '" + std::string(text) + "'");
  }
  std::string_view digits = text.substr(hash + 1);
  size_t index = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw ValidationError("malformed sentence index in '" + std::string(text) + "'");
    }
    index = index * 10 + static_cast<size_t>(c - '0');
  }
  return SentenceRef{std::string(text.substr(0, hash)), index};
}

std::string ClaimOrigin::ToString() const {
  switch (kind) {
    case Kind::kOriginal:
      return "original";
    case Kind::kParaphraseOf:
      return "paraphrase-of:" + source_id;
    case Kind::kCounterclaimOf:
      return "counterclaim-of:" + source_id;
  }
  return "original";
}

ClaimOrigin ClaimOrigin::Parse(std::string_view text) {
  constexpr std::string_view kParaphrase = "paraphrase-of:";
  constexpr std::string_view kCounter = "counterclaim-of:";
  if (text == "original") return {};
  if (text.starts_with(kParaphrase) && text.size() > kParaphrase.size()) {
    return {Kind::kParaphraseOf, std::string(text.substr(kParaphrase.size()))};
  }
  if (text.starts_with(kCounter) && text.size() > kCounter.size()) {
    return {Kind::kCounterclaimOf, std::string(text.substr(kCounter.size()))};
  }
  throw ValidationError("unknown claim origin '" + std::string(text) + "'");
}

void ClaimSet::Add(Claim claim) {
  if (by_id_.count(claim.id)) throw ValidationError("duplicate claim id '" + claim.id + "'");
  if (claim.label == Label::kNei && !claim.gold_evidence.empty()) {
    throw ValidationError("NEI claim '" + claim.id + "' carries gold evidence");
  }
  by_id_.emplace(claim.id, claims_.size());
  claims_.push_back(std::move(claim));
}

void ClaimSet::Validate() const {
  for (const Claim& c : claims_) {
    if (c.origin.kind != ClaimOrigin::Kind::kOriginal && !by_id_.count(c.origin.source_id)) {
      throw ValidationError("claim '" + c.id + "' references unknown claim '" +
                            c.origin.source_id + "'");
    }
  }
}

const Claim* ClaimSet::Find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &claims_[it->second];
}

std::array<size_t, 3> ClaimSet::CountByLabel() const {
  std::array<size_t, 3> counts{};
  for (const Claim& c : claims_) ++counts[LabelIndex(c.label)];
  return counts;
}

ClaimSet ClaimSet::Filter(const std::function<bool(const Claim&)>& keep) const {
  ClaimSet out;
  for (const Claim& c : claims_) {
    if (keep(c)) out.Add(c);
  }
  return out;
}

namespace {

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

bool IsBlank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

const json& Field(const json& record, const char* name, const std::string& source, size_t line) {
  auto it = record.find(name);
  if (it == record.end()) throw ParseError(source, line, std::string("missing field '") + name + "'");
  return *it;
}

std::string StringField(const json& record, const char* name, const std::string& source,
                        size_t line) {
  const json& v = Field(record, name, source, line);
  if (!v.is_string()) throw ParseError(source, line, std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

ClaimSet ParseClaims(std::istream& in, const std::string& source) {
  ClaimSet claims;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(source, line_no, "record must be an object");
    Claim claim;
    claim.id = StringField(record, "id", source, line_no);
    claim.text = StringField(record, "text", source, line_no);
    try {
      claim.label = ParseLabel(StringField(record, "label", source, line_no));
      if (auto it = record.find("gold"); it != record.end()) {
        if (!it->is_array()) throw ParseError(source, line_no, "field 'gold' must be a list");
        for (const json& g : *it) {
          if (!g.is_string()) throw ParseError(source, line_no, "gold entries must be strings");
          claim.gold_evidence.push_back(SentenceRef::Parse(g.get<std::string>()));
        }
      }
      if (auto it = record.find("origin"); it != record.end()) {
        if (!it->is_string()) throw ParseError(source, line_no, "field 'origin' must be a string");
        claim.origin = ClaimOrigin::Parse(it->get<std::string>());
      }
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(source, line_no, e.what());
    }
    try {
      claims.Add(std::move(claim));
    } catch (const ValidationError& e) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  claims.Validate();
  return claims;
}

ClaimSet LoadClaims(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return ParseClaims(in, path);
}

void WriteClaims(const ClaimSet& claims, std::ostream& out) {
  for (const Claim& c : claims) {
    nlohmann::ordered_json record;
    record["id"] = c.id;
    record["text"] = c.text;
    record["label"] = std::string(LabelName(c.label));
    nlohmann::ordered_json gold = nlohmann::ordered_json::array();
    for (const SentenceRef& ref : c.gold_evidence) gold.push_back(ref.ToString());
    record["gold"] = std::move(gold);
    record["origin"] = c.origin.ToString();
    out << record.dump() << '\n';
  }
}

void SaveClaims(const ClaimSet& claims, const std::string& path) {
  std::ofstream out = OpenOutput(path);
  WriteClaims(claims, out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Repository

Repository::Repository() { Reindex(); }

Repository Repository::FromDocuments(std::vector<Document> documents) {
  Repository repo;
  repo.docs_.reserve(documents.size());
  for (Document& d : documents) {
    if (repo.by_id_.count(d.id)) throw ValidationError("duplicate document id '" + d.id + "'");
    repo.by_id_.emplace(d.id, repo.docs_.size());
    repo.docs_.push_back(std::make_shared<const Document>(std::move(d)));
  }
  repo.Reindex();
  return repo;
}

void Repository::Reindex() {
  uint64_t h = kFnvOffsetBasis;
  sentence_count_ = 0;
  for (const auto& d : docs_) {
    h = HashCombine(h, Fnv1a64(d->id));
    h = HashCombine(h, Fnv1a64(d->title));
    for (const std::string& s : d->sentences) h = HashCombine(h, Fnv1a64(s));
    h = HashCombine(h, d->sentences.size());
    sentence_count_ += d->sentences.size();
  }
  fingerprint_ = HashCombine(h, version_);
}

const Document* Repository::FindDocument(std::string_view doc_id) const {
  auto it = by_id_.find(std::string(doc_id));
  return it == by_id_.end() ? nullptr : docs_[it->second].get();
}

bool Repository::Contains(const SentenceRef& ref) const {
  const Document* d = FindDocument(ref.doc_id);
  return d != nullptr && ref.index < d->sentences.size();
}

const std::string& Repository::SentenceText(const SentenceRef& ref) const {
  const Document* d = FindDocument(ref.doc_id);
  if (d == nullptr || ref.index >= d->sentences.size()) {
    throw ValidationError("unresolvable sentence reference " + ref.ToString());
  }
  return d->sentences[ref.index];
}

std::vector<SentenceRef> Repository::AllSentenceRefs() const {
  std::vector<SentenceRef> refs;
  refs.reserve(sentence_count_);
  for (const auto& d : docs_) {
    for (size_t i = 0; i < d->sentences.size(); ++i) refs.push_back({d->id, i});
  }
  return refs;
}

Repository Repository::WithAttackMarks(std::set<SentenceRef> marks) const {
  for (const SentenceRef& ref : marks) {
    if (!Contains(ref)) throw ValidationError("attack mark " + ref.ToString() + " does not resolve");
  }
  Repository out = *this;
  out.attack_marks_ = std::move(marks);
  return out;
}

bool Repository::SameContent(const Repository& other) const {
  if (docs_.size() != other.docs_.size()) return false;
  for (size_t i = 0; i < docs_.size(); ++i) {
    if (!(*docs_[i] == *other.docs_[i])) return false;
  }
  return true;
}

Modification Modification::Add(std::string doc_id, std::string text) {
  return Modification{Kind::kAdd, SentenceRef{std::move(doc_id), 0}, std::move(text)};
}

Modification Modification::Replace(SentenceRef target, std::string text) {
  return Modification{Kind::kReplace, std::move(target), std::move(text)};
}

std::string_view ModificationKindName(Modification::Kind kind) {
  return kind == Modification::Kind::kAdd ? "add" : "replace";
}

Modification::Kind ParseModificationKind(std::string_view name) {
  if (name == "add") return Modification::Kind::kAdd;
  if (name == "replace") return Modification::Kind::kReplace;
  throw ConfigError("unknown modification kind '" + std::string(name) + "' (expected add|replace)");
}

Repository ApplyModifications(const Repository& repo, std::span<const Modification> mods,
                              bool mark_as_attack, std::vector<SentenceRef>* touched) {
  Repository out = repo;
  // Documents edited in this batch get a private copy; the rest stay shared.
  std::unordered_map<size_t, std::shared_ptr<Document>> edited;
  auto writable = [&](size_t doc_index) -> Document& {
    auto it = edited.find(doc_index);
    if (it != edited.end()) return *it->second;
    auto copy = std::make_shared<Document>(*out.docs_[doc_index]);
    out.docs_[doc_index] = copy;
    edited.emplace(doc_index, copy);
    return *copy;
  };
  if (touched != nullptr) touched->clear();
  for (const Modification& mod : mods) {
    SentenceRef result;
    auto it = out.by_id_.find(mod.target.doc_id);
    if (mod.kind == Modification::Kind::kReplace) {
      if (it == out.by_id_.end() || mod.target.index >= out.docs_[it->second]->sentences.size()) {
        throw ValidationError("replace target " + mod.target.ToString() + " does not resolve");
      }
      writable(it->second).sentences[mod.target.index] = mod.new_text;
      result = mod.target;
    } else {
      if (mod.target.doc_id.empty()) throw ValidationError("add modification without document id");
      size_t doc_index;
      if (it == out.by_id_.end()) {
        doc_index = out.docs_.size();
        auto doc = std::make_shared<Document>();
        doc->id = mod.target.doc_id;
        doc->title = mod.target.doc_id;
        out.docs_.push_back(doc);
        out.by_id_.emplace(doc->id, doc_index);
        edited.emplace(doc_index, doc);
      } else {
        doc_index = it->second;
      }
      Document& doc = writable(doc_index);
      doc.sentences.push_back(mod.new_text);
      result = SentenceRef{doc.id, doc.sentences.size() - 1};
    }
    if (mark_as_attack) out.attack_marks_.insert(result);
    if (touched != nullptr) touched->push_back(std::move(result));
  }
  out.version_ = repo.version_ + 1;
  out.Reindex();
  return out;
}

Repository ParseRepository(std::istream& in, const std::string& source) {
  std::vector<Document> docs;
  std::string line;
  size_t line_no = 0;
  std::unordered_map<std::string, size_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(source, line_no, "record must be an object");
    Document doc;
    doc.id = StringField(record, "doc_id", source, line_no);
    if (auto it = record.find("title"); it != record.end() && it->is_string()) {
      doc.title = it->get<std::string>();
    }
    const json& sentences = Field(record, "sentences", source, line_no);
    if (!sentences.is_array()) throw ParseError(source, line_no, "field 'sentences' must be a list");
    for (const json& s : sentences) {
      if (!s.is_string()) throw ParseError(source, line_no, "sentences must be strings");
      doc.sentences.push_back(s.get<std::string>());
    }
    if (seen.count(doc.id)) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": duplicate document id '" +
                            doc.id + "'");
    }
    seen.emplace(doc.id, line_no);
    docs.push_back(std::move(doc));
  }
  return Repository::FromDocuments(std::move(docs));
}

Repository LoadRepository(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return ParseRepository(in, path);
}

void WriteRepository(const Repository& repo, std::ostream& out) {
  for (size_t i = 0; i < repo.document_count(); ++i) {
    const Document& d = repo.document(i);
    nlohmann::ordered_json record;
    record["doc_id"] = d.id;
    record["title"] = d.title;
    record["sentences"] = d.sentences;
    out << record.dump() << '\n';
  }
}

void SaveRepository(const Repository& repo, const std::string& path) {
  std::ofstream out = OpenOutput(path);
  WriteRepository(repo, out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::set<SentenceRef> LoadAttackMarks(const std::string& path) {
  std::ifstream in = OpenInput(path);
  std::set<SentenceRef> marks;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    try {
      marks.insert(SentenceRef::Parse(line));
    } catch (const ValidationError& e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  return marks;
}

void SaveAttackMarks(const std::set<SentenceRef>& marks, const std::string& path) {
  std::ofstream out = OpenOutput(path);
  for (const SentenceRef& ref : marks) out << ref.ToString() << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<Counterclaim> ParseCounterclaims(std::istream& in, const std::string& source) {
  std::vector<Counterclaim> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(source, line_no, "record must be an object");
    out.push_back({StringField(record, "claim_id", source, line_no),
                   StringField(record, "counterclaim", source, line_no)});
  }
  return out;
}

std::vector<Counterclaim> LoadCounterclaims(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return ParseCounterclaims(in, path);
}

void WriteCounterclaims(const std::vector<Counterclaim>& counterclaims, std::ostream& out) {
  for (const Counterclaim& c : counterclaims) {
    nlohmann::ordered_json record;
    record["claim_id"] = c.claim_id;
    record["counterclaim"] = c.text;
    out << record.dump() << '\n';
  }
}

void SaveCounterclaims(const std::vector<Counterclaim>& counterclaims, const std::string& path) {
  std::ofstream out = OpenOutput(path);
  WriteCounterclaims(counterclaims, out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

ClaimSet SubsampleClaims(const ClaimSet& claims, double fraction, uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw ConfigError("subsample fraction must be in (0, 1], got " + std::to_string(fraction));
  }
  if (fraction == 1.0) return claims;
  const size_t total = static_cast<size_t>(std::ceil(fraction * static_cast<double>(claims.size())));
  std::array<std::vector<size_t>, 3> by_label;
  for (size_t i = 0; i < claims.size(); ++i) by_label[LabelIndex(claims[i].label)].push_back(i);

  // Largest-remainder apportionment of `total` over the labels.
  std::array<size_t, 3> take{};
  std::array<double, 3> remainder{};
  size_t assigned = 0;
  for (size_t l = 0; l < 3; ++l) {
    double exact = fraction * static_cast<double>(by_label[l].size());
    take[l] = static_cast<size_t>(std::floor(exact));
    remainder[l] = exact - std::floor(exact);
    assigned += take[l];
  }
  std::array<size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return remainder[a] > remainder[b]; });
  for (size_t l : order) {
    if (assigned >= total) break;
    if (take[l] < by_label[l].size()) {
      ++take[l];
      ++assigned;
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<size_t> chosen;
  for (size_t l = 0; l < 3; ++l) {
    std::vector<size_t> idx = by_label[l];
    std::shuffle(idx.begin(), idx.end(), rng);
    chosen.insert(chosen.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take[l]));
  }
  std::sort(chosen.begin(), chosen.end());
  ClaimSet out;
  for (size_t i : chosen) out.Add(claims[i]);
  return out;
}

ClaimSplit SplitClaims(const ClaimSet& claims, double second_fraction, uint64_t seed) {
  ClaimSplit split;
  split.second = SubsampleClaims(claims, second_fraction, seed);
  for (const Claim& c : claims) {
    if (split.second.Find(c.id) == nullptr) split.first.Add(c);
  }
  return split;
}

}  // namespace fcattack
