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

#ifndef FCATTACK_CANDIDATES_H_
#define FCATTACK_CANDIDATES_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fcattack/text.h"

namespace fcattack {

// Word vectors with Euclidean nearest-neighbour queries. Words are stored
// lowercased. Text format: one "word v1 v2 ... vd" line per word.
class EmbeddingLexicon {
 public:
  struct Neighbor {
    std::string word;
    double distance = 0.0;
  };

  EmbeddingLexicon() = default;
  EmbeddingLexicon(const EmbeddingLexicon& other);
  EmbeddingLexicon& operator=(const EmbeddingLexicon& other);

  // Throws ValidationError on a dimension mismatch or a repeated word.
  void Add(std::string_view word, std::vector<double> vector);
  size_t size() const { return vectors_.size(); }
  size_t dimension() const { return dimension_; }
  bool Contains(std::string_view word) const;
  const std::vector<double>* Find(std::string_view word) const;
  // Other words within `max_distance`, nearest first, ties by word.
  std::vector<Neighbor> Neighbors(std::string_view word, double max_distance,
                                  size_t limit = std::numeric_limits<size_t>::max()) const;

  static EmbeddingLexicon Parse(std::istream& in, const std::string& source_name = "<stream>");
  static EmbeddingLexicon Load(const std::string& path);
  void Write(std::ostream& out) const;
  void Save(const std::string& path) const;

 private:
  size_t dimension_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::string, std::vector<Neighbor>> cache_;  // within any distance
};

struct PoolCandidate {
  std::string text;
  double score = 1.0;
  bool operator==(const PoolCandidate&) const = default;
};

// Externally produced candidates keyed by sentence reference, token position
// or prompt hash. JSON-lines records:
//   {"key":"doc#3","candidates":["..",".."],"scores":[0.4,0.1]}
// "scores" is optional and defaults to 1 for every candidate.
class CandidatePool {
 public:
  // Appends to any candidates already stored under `key`.
  void Add(const std::string& key, std::vector<PoolCandidate> candidates);
  void Add(const std::string& key, const std::vector<std::string>& texts);
  const std::vector<PoolCandidate>* Find(std::string_view key) const;
  size_t size() const { return entries_.size(); }
  const std::map<std::string, std::vector<PoolCandidate>, std::less<>>& entries() const {
    return entries_;
  }

  static CandidatePool Parse(std::istream& in, const std::string& source_name = "<stream>");
  static CandidatePool Load(const std::string& path);
  void Write(std::ostream& out) const;
  void Save(const std::string& path) const;

  bool operator==(const CandidatePool&) const = default;

 private:
  std::map<std::string, std::vector<PoolCandidate>, std::less<>> entries_;
};

// "doc#3@7": candidates for token 7 of sentence doc#3.
std::string PositionKey(std::string_view sentence_key, size_t position);
// "token:born": candidates for any occurrence of a token.
std::string TokenKey(std::string_view normalized_token);
// Hex FNV-1a digest of a generation prompt.
std::string PromptKey(std::string_view prompt);

struct ScoredCandidate {
  std::string text;
  double score = 0.0;
};

// Single-token replacement candidates for one position of a sentence.
class CandidateGenerator {
 public:
  virtual ~CandidateGenerator() = default;
  // `sentence_key` identifies the sentence for keyed providers; may be empty.
  virtual std::vector<ScoredCandidate> Candidates(const TokenizedText& sentence, size_t position,
                                                  std::string_view sentence_key) const = 0;
};

// Lexicon neighbours within `max_distance`, scored exp(-distance), with the
// capitalisation of the replaced token.
class LexiconCandidateGenerator : public CandidateGenerator {
 public:
  explicit LexiconCandidateGenerator(const EmbeddingLexicon& lexicon, double max_distance = 0.4,
                                     size_t limit = 50)
      : lexicon_(lexicon), max_distance_(max_distance), limit_(limit) {}
  std::vector<ScoredCandidate> Candidates(const TokenizedText& sentence, size_t position,
                                          std::string_view sentence_key) const override;

 private:
  const EmbeddingLexicon& lexicon_;
  double max_distance_;
  size_t limit_;
};

// Candidates looked up under PositionKey(sentence_key, position), falling
// back to TokenKey(token).
class PoolCandidateGenerator : public CandidateGenerator {
 public:
  explicit PoolCandidateGenerator(const CandidatePool& pool) : pool_(pool) {}
  std::vector<ScoredCandidate> Candidates(const TokenizedText& sentence, size_t position,
                                          std::string_view sentence_key) const override;

 private:
  const CandidatePool& pool_;
};

// Copies the capitalisation of `model`'s first letter onto `word`.
std::string MatchCapitalization(std::string_view model, std::string_view word);

// Deterministic stand-in for neural paraphrasers and prompted generators.
class RuleBasedRewriter {
 public:
  // Variants built by rotating comma-separated clauses, replacing the first
  // full name with a neutral reference and dropping single tokens from longer
  // sentences.
  std::vector<std::string> Paraphrases(std::string_view text, size_t n, uint64_t seed) const;
  // A leading fragment of `prompt` continued with a neutral filler clause.
  std::vector<std::string> Generate(std::string_view prompt, size_t n, uint64_t seed) const;
};

// Collapses whitespace runs, removes spaces before punctuation and ensures a
// final period.
std::string TidySentence(std::string_view text);

}  // namespace fcattack

#endif  // FCATTACK_CANDIDATES_H_
