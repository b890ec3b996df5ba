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

#ifndef FCATTACK_CORPUS_H_
#define FCATTACK_CORPUS_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fcattack {

enum class Label { kSup = 0, kRef = 1, kNei = 2 };
inline constexpr std::array<Label, 3> kAllLabels = {Label::kSup, Label::kRef, Label::kNei};

std::string_view LabelName(Label label);
// Accepts exactly "SUP", "REF" or "NEI"; throws ValidationError otherwise.
Label ParseLabel(std::string_view name);
inline size_t LabelIndex(Label label) { return static_cast<size_t>(label); }

struct SentenceRef {
  std::string doc_id;
  size_t index = 0;

  auto operator<=>(const SentenceRef&) const = default;
  bool operator==(const SentenceRef&) const = default;

  // "doc_id#index"
  std::string ToString() const;
  // Splits on the last '#'.
  static SentenceRef Parse(std::string_view text);
};

struct ClaimOrigin {
  enum class Kind { kOriginal, kParaphraseOf, kCounterclaimOf };
  Kind kind = Kind::kOriginal;
  std::string source_id;

  bool operator==(const ClaimOrigin&) const = default;
  // "original", "paraphrase-of:<id>", "counterclaim-of:<id>"
  std::string ToString() const;
  static ClaimOrigin Parse(std::string_view text);
};

struct Claim {
  std::string id;
  std::string text;
  Label label = Label::kNei;
  std::vector<SentenceRef> gold_evidence;
  ClaimOrigin origin;

  bool operator==(const Claim&) const = default;
};

// Ordered claims with unique ids.
class ClaimSet {
 public:
  ClaimSet() = default;

  // Throws ValidationError on duplicate id or a NEI claim carrying gold
  // evidence. Origin references are checked by Validate().
  void Add(Claim claim);
  // Checks cross-claim invariants (origin references resolve).
  void Validate() const;

  size_t size() const { return claims_.size(); }
  bool empty() const { return claims_.empty(); }
  const Claim& operator[](size_t i) const { return claims_[i]; }
  std::vector<Claim>::const_iterator begin() const { return claims_.begin(); }
  std::vector<Claim>::const_iterator end() const { return claims_.end(); }
  const Claim* Find(std::string_view id) const;
  std::array<size_t, 3> CountByLabel() const;
  ClaimSet Filter(const std::function<bool(const Claim&)>& keep) const;

  bool operator==(const ClaimSet& other) const { return claims_ == other.claims_; }

 private:
  std::vector<Claim> claims_;
  std::unordered_map<std::string, size_t> by_id_;
};

// JSON-lines claim records:
//   {"id":..,"text":..,"label":"SUP","gold":["doc#0"],"origin":"original"}
ClaimSet ParseClaims(std::istream& in, const std::string& source_name = "<stream>");
ClaimSet LoadClaims(const std::string& path);
void WriteClaims(const ClaimSet& claims, std::ostream& out);
void SaveClaims(const ClaimSet& claims, const std::string& path);

// A manually written contradiction of a claim. JSON-lines records:
//   {"claim_id":"c0001","counterclaim":".."}
struct Counterclaim {
  std::string claim_id;
  std::string text;
  bool operator==(const Counterclaim&) const = default;
};

std::vector<Counterclaim> ParseCounterclaims(std::istream& in,
                                             const std::string& source_name = "<stream>");
std::vector<Counterclaim> LoadCounterclaims(const std::string& path);
void WriteCounterclaims(const std::vector<Counterclaim>& counterclaims, std::ostream& out);
void SaveCounterclaims(const std::vector<Counterclaim>& counterclaims, const std::string& path);

struct Document {
  std::string id;
  std::string title;
  std::vector<std::string> sentences;

  bool operator==(const Document&) const = default;
};

struct Modification;

// An immutable snapshot of the evidence corpus. Copies share document
// storage; ApplyModifications() produces a new snapshot and never touches the
// source. Attack marks are evaluation bookkeeping and are never handed to a
// retriever or verifier.
class Repository {
 public:
  Repository();
  // Throws ValidationError on duplicate document ids.
  static Repository FromDocuments(std::vector<Document> documents);

  uint64_t version() const { return version_; }
  uint64_t fingerprint() const { return fingerprint_; }
  size_t document_count() const { return docs_.size(); }
  size_t sentence_count() const { return sentence_count_; }

  const Document& document(size_t i) const { return *docs_.at(i); }
  const Document* FindDocument(std::string_view doc_id) const;
  bool Contains(const SentenceRef& ref) const;
  // Throws ValidationError if `ref` does not resolve.
  const std::string& SentenceText(const SentenceRef& ref) const;
  // Document order, then sentence order.
  std::vector<SentenceRef> AllSentenceRefs() const;

  const std::set<SentenceRef>& attack_marks() const { return attack_marks_; }
  bool IsAttackMarked(const SentenceRef& ref) const { return attack_marks_.count(ref) > 0; }
  // Same content and version with the given marks; every mark must resolve.
  Repository WithAttackMarks(std::set<SentenceRef> marks) const;

  // Document content equality (ignores version and marks).
  bool SameContent(const Repository& other) const;

 private:
  friend Repository ApplyModifications(const Repository& repo, std::span<const Modification> mods,
                                       bool mark_as_attack, std::vector<SentenceRef>* touched);
  void Reindex();

  std::vector<std::shared_ptr<const Document>> docs_;
  std::unordered_map<std::string, size_t> by_id_;
  std::set<SentenceRef> attack_marks_;
  uint64_t version_ = 0;
  uint64_t fingerprint_ = 0;
  size_t sentence_count_ = 0;
};

struct Modification {
  enum class Kind { kAdd, kReplace };
  Kind kind = Kind::kReplace;
  // Replace: the sentence to overwrite. Add: only doc_id is used; a missing
  // document is created, otherwise the sentence is appended.
  SentenceRef target;
  std::string new_text;

  static Modification Add(std::string doc_id, std::string text);
  static Modification Replace(SentenceRef target, std::string text);
};

std::string_view ModificationKindName(Modification::Kind kind);
Modification::Kind ParseModificationKind(std::string_view name);

// Returns a snapshot with version + 1. When `touched` is non-null it receives
// the resulting reference of every modification, in order.
Repository ApplyModifications(const Repository& repo, std::span<const Modification> mods,
                              bool mark_as_attack, std::vector<SentenceRef>* touched);
inline Repository ApplyModifications(const Repository& repo, std::span<const Modification> mods,
                                     bool mark_as_attack) {
  return ApplyModifications(repo, mods, mark_as_attack, nullptr);
}

// JSON-lines document records: {"doc_id":..,"title":..,"sentences":[..]}
Repository ParseRepository(std::istream& in, const std::string& source_name = "<stream>");
Repository LoadRepository(const std::string& path);
void WriteRepository(const Repository& repo, std::ostream& out);
void SaveRepository(const Repository& repo, const std::string& path);

// One "doc_id#index" per line.
std::set<SentenceRef> LoadAttackMarks(const std::string& path);
void SaveAttackMarks(const std::set<SentenceRef>& marks, const std::string& path);

// Stratified sample of ceil(fraction * |claims|) claims; per-label counts stay
// within one of fraction * count. Keeps the original relative order.
ClaimSet SubsampleClaims(const ClaimSet& claims, double fraction, uint64_t seed);

struct ClaimSplit {
  ClaimSet first;
  ClaimSet second;
};
// `second` is SubsampleClaims(claims, second_fraction, seed); `first` is the rest.
ClaimSplit SplitClaims(const ClaimSet& claims, double second_fraction, uint64_t seed);

}  // namespace fcattack

#endif  // FCATTACK_CORPUS_H_
