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

#include "fcattack/retrieval.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "fcattack/errors.h"
#include "json.hpp"

namespace fcattack {

std::string_view RetrieverKindName(RetrieverKind kind) {
  return kind == RetrieverKind::kBm25 ? "bm25" : "tfidf";
}

RetrieverKind ParseRetrieverKind(std::string_view name) {
  if (name == "tfidf") return RetrieverKind::kTfIdfCosine;
  if (name == "bm25") return RetrieverKind::kBm25;
  throw ConfigError("unknown retriever kind '" + std::string(name) + "' (expected tfidf|bm25)");
}

std::vector<SentenceRef> RankedEvidence::Refs() const {
  std::vector<SentenceRef> refs;
  refs.reserve(items.size());
  for (const ScoredSentence& s : items) refs.push_back(s.ref);
  return refs;
}

namespace {

bool InAlphabet(std::string_view token) {
  return std::all_of(token.begin(), token.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u >= 0x21 && u < 0x7f;
  });
}

bool RankBefore(const ScoredSentence& a, const ScoredSentence& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.ref.doc_id != b.ref.doc_id) return a.ref.doc_id < b.ref.doc_id;
  return a.ref.index < b.ref.index;
}

// Shared by the postings path and the direct path so both produce
// bit-identical sums.
inline double TermContribution(double query_weight, uint32_t tf, double idf) {
  return query_weight * (static_cast<double>(tf) * idf);
}

}  // namespace

uint32_t Index::TermId(std::string_view normalized) const {
  auto it = term_ids_.find(std::string(normalized));
  return it == term_ids_.end() ? kUnknownTerm : it->second;
}

double Index::Idf(uint32_t term) const { return idf_.at(term); }

Index Index::Build(const Repository& repo, const RetrieverOptions& options) {
  Index index;
  index.options_ = options;
  index.repo_version_ = repo.version();
  index.repo_fingerprint_ = repo.fingerprint();
  for (size_t d = 0; d < repo.document_count(); ++d) {
    const Document& doc = repo.document(d);
    for (size_t s = 0; s < doc.sentences.size(); ++s) {
      TokenizedText tokens(doc.sentences[s]);
      std::vector<uint32_t> ids;
      ids.reserve(tokens.size());
      for (size_t i = 0; i < tokens.size(); ++i) {
        std::string term = options.lowercase ? tokens.normalized(i) : std::string(tokens.token(i));
        if (options.ascii_only_vocabulary && !InAlphabet(term)) continue;
        auto [it, inserted] =
            index.term_ids_.emplace(term, static_cast<uint32_t>(index.terms_.size()));
        if (inserted) {
          index.terms_.push_back(term);
          index.df_.push_back(0);
        }
        ids.push_back(it->second);
      }
      std::sort(ids.begin(), ids.end());
      TermCounts counts;
      for (uint32_t id : ids) {
        if (!counts.empty() && counts.back().first == id) {
          ++counts.back().second;
        } else {
          counts.emplace_back(id, 1);
          ++index.df_[id];
        }
      }
      index.refs_.push_back({doc.id, s});
      index.sentence_counts_.push_back(std::move(counts));
      index.sentence_lengths_.push_back(static_cast<uint32_t>(tokens.size()));
    }
  }
  index.Finalize();
  return index;
}

void Index::Finalize() {
  const double n = static_cast<double>(refs_.size());
  idf_.resize(terms_.size());
  for (size_t t = 0; t < terms_.size(); ++t) {
    const double df = df_[t];
    idf_[t] = options_.kind == RetrieverKind::kTfIdfCosine
                  ? std::log((1.0 + n) / (1.0 + df)) + 1.0
                  : std::log(1.0 + (n - df + 0.5) / (df + 0.5));
  }
  postings_.assign(terms_.size(), {});
  sentence_norms_.assign(refs_.size(), 0.0);
  double total_length = 0.0;
  for (size_t j = 0; j < refs_.size(); ++j) {
    double sq = 0.0;
    for (const auto& [term, tf] : sentence_counts_[j]) {
      postings_[term].emplace_back(static_cast<uint32_t>(j), tf);
      const double w = static_cast<double>(tf) * idf_[term];
      sq += w * w;
    }
    sentence_norms_[j] = std::sqrt(sq);
    total_length += sentence_lengths_[j];
  }
  average_length_ = refs_.empty() ? 1.0 : std::max(1.0, total_length / n);
}

Index::TermCounts Index::Count(std::string_view text, size_t* token_count) const {
  TokenizedText tokens{std::string(text)};
  std::vector<uint32_t> ids;
  ids.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    std::string term = options_.lowercase ? tokens.normalized(i) : std::string(tokens.token(i));
    uint32_t id = TermId(term);
    if (id != kUnknownTerm) ids.push_back(id);
  }
  if (token_count != nullptr) *token_count = tokens.size();
  std::sort(ids.begin(), ids.end());
  TermCounts counts;
  for (uint32_t id : ids) {
    if (!counts.empty() && counts.back().first == id) {
      ++counts.back().second;
    } else {
      counts.emplace_back(id, 1);
    }
  }
  return counts;
}

Index::Query Index::MakeQuery(std::string_view claim_text) const {
  Query q;
  TermCounts counts = Count(claim_text, nullptr);
  double sq = 0.0;
  for (const auto& [term, tf] : counts) {
    double w = options_.kind == RetrieverKind::kTfIdfCosine ? static_cast<double>(tf) * idf_[term]
                                                             : 1.0;
    q.weights.emplace_back(term, w);
    sq += w * w;
  }
  q.norm = std::sqrt(sq);
  return q;
}

double Index::ScoreCounts(const Query& query, const TermCounts& counts, size_t length) const {
  if (query.weights.empty() || counts.empty()) return 0.0;
  if (options_.kind == RetrieverKind::kTfIdfCosine) {
    double dot = 0.0;
    double sq = 0.0;
    for (const auto& [term, tf] : counts) {
      const double w = static_cast<double>(tf) * idf_[term];
      sq += w * w;
    }
    auto it = counts.begin();
    for (const auto& [term, qw] : query.weights) {
      while (it != counts.end() && it->first < term) ++it;
      if (it != counts.end() && it->first == term) dot += TermContribution(qw, it->second, idf_[term]);
    }
    const double denom = query.norm * std::sqrt(sq);
    if (denom <= 0.0) return 0.0;
    return std::min(1.0, dot / denom);
  }
  const double k1 = options_.bm25_k1;
  const double b = options_.bm25_b;
  const double len_norm = k1 * (1.0 - b + b * static_cast<double>(length) / average_length_);
  double score = 0.0;
  auto it = counts.begin();
  for (const auto& [term, qw] : query.weights) {
    (void)qw;
    while (it != counts.end() && it->first < term) ++it;
    if (it != counts.end() && it->first == term) {
      const double tf = it->second;
      score += idf_[term] * (tf * (k1 + 1.0) / (tf + len_norm));
    }
  }
  return score;
}

double Index::Score(std::string_view claim_text, std::string_view sentence_text) const {
  size_t length = 0;
  TermCounts counts = Count(sentence_text, &length);
  return ScoreCounts(MakeQuery(claim_text), counts, length);
}

double Index::MaskedSentenceScore(std::string_view claim_text, const TokenizedText& sentence,
                                  size_t position) const {
  if (position >= sentence.size()) {
    throw ValidationError("masked position " + std::to_string(position) +
                          " out of range for a sentence of " + std::to_string(sentence.size()) +
                          " tokens");
  }
  return Score(claim_text, sentence.WithoutToken(position));
}

std::vector<double> Index::MaskedSentenceScores(std::string_view claim_text,
                                                const TokenizedText& sentence) const {
  Query q = MakeQuery(claim_text);
  std::vector<double> out(sentence.size());
  for (size_t i = 0; i < sentence.size(); ++i) {
    size_t length = 0;
    TermCounts counts = Count(sentence.WithoutToken(i), &length);
    out[i] = ScoreCounts(q, counts, length);
  }
  return out;
}

std::vector<double> Index::ScoreAll(std::string_view claim_text) const {
  Query q = MakeQuery(claim_text);
  std::vector<double> acc(refs_.size(), 0.0);
  if (q.weights.empty()) return acc;
  if (options_.kind == RetrieverKind::kTfIdfCosine) {
    for (const auto& [term, qw] : q.weights) {
      for (const auto& [j, tf] : postings_[term]) acc[j] += TermContribution(qw, tf, idf_[term]);
    }
    for (size_t j = 0; j < acc.size(); ++j) {
      const double denom = q.norm * sentence_norms_[j];
      acc[j] = (denom <= 0.0 || acc[j] == 0.0) ? 0.0 : std::min(1.0, acc[j] / denom);
    }
    return acc;
  }
  const double k1 = options_.bm25_k1;
  const double b = options_.bm25_b;
  for (const auto& [term, qw] : q.weights) {
    (void)qw;
    for (const auto& [j, tf_int] : postings_[term]) {
      const double tf = tf_int;
      const double len_norm =
          k1 * (1.0 - b + b * static_cast<double>(sentence_lengths_[j]) / average_length_);
      acc[j] += idf_[term] * (tf * (k1 + 1.0) / (tf + len_norm));
    }
  }
  return acc;
}

void Index::CheckFresh(const Repository& repo) const {
  if (repo.version() != repo_version_ || repo.fingerprint() != repo_fingerprint_) {
    throw StaleIndexError("index built for repository version " + std::to_string(repo_version_) +
                          " queried against version " + std::to_string(repo.version()));
  }
}

RankedEvidence Index::Retrieve(const Repository& repo, std::string_view claim_text,
                               size_t k) const {
  CheckFresh(repo);
  std::vector<double> scores = ScoreAll(claim_text);
  std::vector<ScoredSentence> hits;
  for (size_t j = 0; j < scores.size(); ++j) {
    if (scores[j] > 0.0) hits.push_back({refs_[j], scores[j]});
  }
  const size_t keep = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(),
                    RankBefore);
  hits.resize(keep);
  return RankedEvidence{std::move(hits), k};
}

std::vector<ScoredSentence> Index::RankAll(const Repository& repo,
                                           std::string_view claim_text) const {
  CheckFresh(repo);
  std::vector<double> scores = ScoreAll(claim_text);
  std::vector<ScoredSentence> all;
  all.reserve(scores.size());
  for (size_t j = 0; j < scores.size(); ++j) all.push_back({refs_[j], scores[j]});
  std::sort(all.begin(), all.end(), RankBefore);
  return all;
}

std::vector<std::pair<uint32_t, double>> Index::UnitTfIdfVector(std::string_view text) const {
  const double n = static_cast<double>(refs_.size());
  TermCounts counts = Count(text, nullptr);
  std::vector<std::pair<uint32_t, double>> v;
  double sq = 0.0;
  for (const auto& [term, tf] : counts) {
    const double idf = std::log((1.0 + n) / (1.0 + df_[term])) + 1.0;
    const double w = static_cast<double>(tf) * idf;
    v.emplace_back(term, w);
    sq += w * w;
  }
  const double norm = std::sqrt(sq);
  if (norm > 0.0) {
    for (auto& [term, w] : v) w /= norm;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Persistence: a JSON header line, one JSON string per term, then one JSON
// array [ref, length, [term, count, ...]] per sentence. Derived statistics
// are recomputed on load, so the round trip is exact.

namespace {
constexpr int kIndexFormatVersion = 1;
}

void Index::Write(std::ostream& out) const {
  nlohmann::ordered_json header;
  header["format"] = "fcattack-index";
  header["version"] = kIndexFormatVersion;
  header["kind"] = std::string(RetrieverKindName(options_.kind));
  header["lowercase"] = options_.lowercase;
  header["ascii_only_vocabulary"] = options_.ascii_only_vocabulary;
  header["bm25_k1"] = options_.bm25_k1;
  header["bm25_b"] = options_.bm25_b;
  header["repo_version"] = repo_version_;
  header["repo_fingerprint"] = HexDigest(repo_fingerprint_);
  header["terms"] = terms_.size();
  header["sentences"] = refs_.size();
  out << header.dump() << '\n';
  for (size_t t = 0; t < terms_.size(); ++t) {
    out << nlohmann::json(terms_[t]).dump() << '\n';
  }
  for (size_t j = 0; j < refs_.size(); ++j) {
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& [term, tf] : sentence_counts_[j]) {
      counts.push_back(term);
      counts.push_back(tf);
    }
    nlohmann::json row = nlohmann::json::array({refs_[j].ToString(), sentence_lengths_[j], counts});
    out << row.dump() << '\n';
  }
}

Index Index::Read(std::istream& in) {
  auto next = [&](const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(std::string("truncated index: missing ") + what);
    try {
      return nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(std::string("corrupt index ") + what + ": " + e.what());
    }
  };
  nlohmann::json header = next("header");
  if (header.value("format", "") != "fcattack-index" ||
      header.value("version", 0) != kIndexFormatVersion) {
    throw ValidationError("not an fcattack index (or unsupported format version)");
  }
  Index index;
  index.options_.kind = ParseRetrieverKind(header.at("kind").get<std::string>());
  index.options_.lowercase = header.at("lowercase").get<bool>();
  index.options_.ascii_only_vocabulary = header.at("ascii_only_vocabulary").get<bool>();
  index.options_.bm25_k1 = header.at("bm25_k1").get<double>();
  index.options_.bm25_b = header.at("bm25_b").get<double>();
  index.repo_version_ = header.at("repo_version").get<uint64_t>();
  index.repo_fingerprint_ =
      std::stoull(header.at("repo_fingerprint").get<std::string>(), nullptr, 16);
  const size_t n_terms = header.at("terms").get<size_t>();
  const size_t n_sentences = header.at("sentences").get<size_t>();
  for (size_t t = 0; t < n_terms; ++t) {
    std::string term = next("term").get<std::string>();
    index.term_ids_.emplace(term, static_cast<uint32_t>(index.terms_.size()));
    index.terms_.push_back(std::move(term));
  }
  index.df_.assign(n_terms, 0);
  for (size_t j = 0; j < n_sentences; ++j) {
    nlohmann::json row = next("sentence");
    index.refs_.push_back(SentenceRef::Parse(row.at(0).get<std::string>()));
    index.sentence_lengths_.push_back(row.at(1).get<uint32_t>());
    const nlohmann::json& flat = row.at(2);
    TermCounts counts;
    for (size_t i = 0; i + 1 < flat.size(); i += 2) {
      uint32_t term = flat[i].get<uint32_t>();
      if (term >= n_terms) throw ValidationError("corrupt index: term id out of range");
      counts.emplace_back(term, flat[i + 1].get<uint32_t>());
      ++index.df_[term];
    }
    index.sentence_counts_.push_back(std::move(counts));
  }
  index.Finalize();
  return index;
}

void Index::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  Write(out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

Index Index::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return Read(in);
}

bool Index::operator==(const Index& other) const {
  return options_ == other.options_ && repo_version_ == other.repo_version_ &&
         repo_fingerprint_ == other.repo_fingerprint_ && terms_ == other.terms_ &&
         df_ == other.df_ && refs_ == other.refs_ && sentence_counts_ == other.sentence_counts_ &&
         sentence_lengths_ == other.sentence_lengths_;
}

}  // namespace fcattack
