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

#ifndef FCATTACK_RETRIEVAL_H_
#define FCATTACK_RETRIEVAL_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fcattack/corpus.h"
#include "fcattack/text.h"

namespace fcattack {

enum class RetrieverKind {
  kTfIdfCosine,  // reference scorer
  kBm25,         // different-architecture proxy
};

std::string_view RetrieverKindName(RetrieverKind kind);
RetrieverKind ParseRetrieverKind(std::string_view name);

struct RetrieverOptions {
  RetrieverKind kind = RetrieverKind::kTfIdfCosine;
  bool lowercase = true;
  // Terms containing a byte outside printable ASCII are treated as unknown.
  bool ascii_only_vocabulary = false;
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;

  bool operator==(const RetrieverOptions&) const = default;
};

struct ScoredSentence {
  SentenceRef ref;
  double score = 0.0;
};

// Scores are non-increasing; equal scores are ordered by (doc_id, index).
struct RankedEvidence {
  std::vector<ScoredSentence> items;
  size_t k = 5;

  std::vector<SentenceRef> Refs() const;
};

// Sparse lexical index over every sentence of one repository snapshot.
// Immutable once built; concurrent queries are safe.
class Index {
 public:
  static constexpr uint32_t kUnknownTerm = 0xffffffffu;

  static Index Build(const Repository& repo, const RetrieverOptions& options = {});

  const RetrieverOptions& options() const { return options_; }
  RetrieverKind kind() const { return options_.kind; }
  uint64_t repo_version() const { return repo_version_; }
  uint64_t repo_fingerprint() const { return repo_fingerprint_; }
  size_t vocabulary_size() const { return terms_.size(); }
  size_t sentence_count() const { return refs_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  uint32_t TermId(std::string_view normalized) const;
  uint32_t DocumentFrequency(uint32_t term) const { return df_.at(term); }
  double Idf(uint32_t term) const;

  // TF-IDF: cosine in [0, 1]. BM25: >= 0 with the claim as the query.
  double Score(std::string_view claim_text, std::string_view sentence_text) const;
  // Score of `sentence` with the token at `position` deleted.
  double MaskedSentenceScore(std::string_view claim_text, const TokenizedText& sentence,
                             size_t position) const;
  std::vector<double> MaskedSentenceScores(std::string_view claim_text,
                                           const TokenizedText& sentence) const;

  // Top-k sentences with a positive score. Throws StaleIndexError unless
  // `repo` is the snapshot this index was built from.
  RankedEvidence Retrieve(const Repository& repo, std::string_view claim_text, size_t k = 5) const;
  // Every sentence, including zero scores, in ranking order.
  std::vector<ScoredSentence> RankAll(const Repository& repo, std::string_view claim_text) const;

  // Unit-normalised TF-IDF vector of an arbitrary text (sorted term ids).
  std::vector<std::pair<uint32_t, double>> UnitTfIdfVector(std::string_view text) const;

  void Write(std::ostream& out) const;
  static Index Read(std::istream& in);
  void Save(const std::string& path) const;
  static Index Load(const std::string& path);

  bool operator==(const Index& other) const;

 private:
  using TermCounts = std::vector<std::pair<uint32_t, uint32_t>>;  // sorted by term id

  struct Query {
    std::vector<std::pair<uint32_t, double>> weights;  // sorted by term id
    double norm = 0.0;
  };

  TermCounts Count(std::string_view text, size_t* token_count) const;
  Query MakeQuery(std::string_view claim_text) const;
  double ScoreCounts(const Query& query, const TermCounts& counts, size_t length) const;
  std::vector<double> ScoreAll(std::string_view claim_text) const;
  void CheckFresh(const Repository& repo) const;
  void Finalize();

  RetrieverOptions options_;
  uint64_t repo_version_ = 0;
  uint64_t repo_fingerprint_ = 0;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, uint32_t> term_ids_;
  std::vector<uint32_t> df_;
  std::vector<SentenceRef> refs_;
  std::vector<TermCounts> sentence_counts_;
  std::vector<uint32_t> sentence_lengths_;

  // Derived on build/load.
  std::vector<double> idf_;
  std::vector<double> sentence_norms_;
  double average_length_ = 0.0;
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> postings_;  // term -> (sentence, tf)
};

}  // namespace fcattack

#endif  // FCATTACK_RETRIEVAL_H_
