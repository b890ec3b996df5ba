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

#include "fcattack/candidates.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "fcattack/errors.h"
#include "json.hpp"

namespace fcattack {

using nlohmann::json;

EmbeddingLexicon::EmbeddingLexicon(const EmbeddingLexicon& other)
    : dimension_(other.dimension_), vectors_(other.vectors_) {}

EmbeddingLexicon& EmbeddingLexicon::operator=(const EmbeddingLexicon& other) {
  if (this != &other) {
    dimension_ = other.dimension_;
    vectors_ = other.vectors_;
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.clear();
  }
  return *this;
}

void EmbeddingLexicon::Add(std::string_view word, std::vector<double> vector) {
  if (vector.empty()) throw ValidationError("empty embedding vector");
  if (dimension_ != 0 && vector.size() != dimension_) {
    throw ValidationError("embedding for '" + std::string(word) + "' has dimension " +
                          std::to_string(vector.size()) + ", expected " +
                          std::to_string(dimension_));
  }
  std::string key = AsciiLower(word);
  if (vectors_.count(key)) throw ValidationError("repeated embedding for '" + key + "'");
  dimension_ = vector.size();
  vectors_.emplace(std::move(key), std::move(vector));
  std::lock_guard<std::mutex> lock(cache_mutex_);
  cache_.clear();
}

bool EmbeddingLexicon::Contains(std::string_view word) const { return Find(word) != nullptr; }

const std::vector<double>* EmbeddingLexicon::Find(std::string_view word) const {
  auto it = vectors_.find(AsciiLower(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

std::vector<EmbeddingLexicon::Neighbor> EmbeddingLexicon::Neighbors(std::string_view word,
                                                                    double max_distance,
                                                                    size_t limit) const {
  const std::string key = AsciiLower(word);
  std::vector<Neighbor> all;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto cached = cache_.find(key);
    if (cached != cache_.end()) all = cached->second;
  }
  if (all.empty()) {
    auto self = vectors_.find(key);
    if (self == vectors_.end()) return {};
    for (const auto& [other, vec] : vectors_) {
      if (other == key) continue;
      double sq = 0.0;
      for (size_t d = 0; d < dimension_; ++d) {
        const double diff = vec[d] - self->second[d];
        sq += diff * diff;
      }
      all.push_back({other, std::sqrt(sq)});
    }
    std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
      return a.distance != b.distance ? a.distance < b.distance : a.word < b.word;
    });
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(key, all);
  }
  std::vector<Neighbor> out;
  for (const Neighbor& n : all) {
    if (n.distance > max_distance || out.size() >= limit) break;
    out.push_back(n);
  }
  return out;
}

EmbeddingLexicon EmbeddingLexicon::Parse(std::istream& in, const std::string& source_name) {
  EmbeddingLexicon lexicon;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> vec;
    for (std::string v; fields >> v;) {
      char* end = nullptr;
      const double x = std::strtod(v.c_str(), &end);
      if (end == v.c_str() || *end != '\0') {
        throw ParseError(source_name, line_no, "bad vector component '" + v + "'");
      }
      vec.push_back(x);
    }
    try {
      lexicon.Add(word, std::move(vec));
    } catch (const ValidationError& e) {
      throw ParseError(source_name, line_no, e.what());
    }
  }
  return lexicon;
}

EmbeddingLexicon EmbeddingLexicon::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return Parse(in, path);
}

void EmbeddingLexicon::Write(std::ostream& out) const {
  char buf[40];
  for (const auto& [word, vec] : vectors_) {
    out << word;
    for (double x : vec) {
      std::snprintf(buf, sizeof(buf), " %.17g", x);
      out << buf;
    }
    out << '\n';
  }
}

void EmbeddingLexicon::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  Write(out);
}

void CandidatePool::Add(const std::string& key, std::vector<PoolCandidate> candidates) {
  auto& slot = entries_[key];
  for (PoolCandidate& c : candidates) slot.push_back(std::move(c));
}

void CandidatePool::Add(const std::string& key, const std::vector<std::string>& texts) {
  std::vector<PoolCandidate> candidates;
  for (const std::string& t : texts) candidates.push_back({t, 1.0});
  Add(key, std::move(candidates));
}

const std::vector<PoolCandidate>* CandidatePool::Find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

CandidatePool CandidatePool::Parse(std::istream& in, const std::string& source_name) {
  CandidatePool pool;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source_name, line_no, std::string("invalid JSON: ") + e.what());
    }
    auto key = record.find("key");
    auto texts = record.find("candidates");
    if (!record.is_object() || key == record.end() || !key->is_string() ||
        texts == record.end() || !texts->is_array()) {
      throw ParseError(source_name, line_no, "expected {\"key\": string, \"candidates\": list}");
    }
    std::vector<PoolCandidate> candidates;
    for (const json& t : *texts) {
      if (!t.is_string()) throw ParseError(source_name, line_no, "candidates must be strings");
      candidates.push_back({t.get<std::string>(), 1.0});
    }
    if (auto scores = record.find("scores"); scores != record.end()) {
      if (!scores->is_array() || scores->size() != candidates.size()) {
        throw ParseError(source_name, line_no, "scores must be a list matching candidates");
      }
      for (size_t i = 0; i < candidates.size(); ++i) {
        if (!(*scores)[i].is_number()) throw ParseError(source_name, line_no, "bad score");
        candidates[i].score = (*scores)[i].get<double>();
      }
    }
    pool.Add(key->get<std::string>(), std::move(candidates));
  }
  return pool;
}

CandidatePool CandidatePool::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return Parse(in, path);
}

void CandidatePool::Write(std::ostream& out) const {
  for (const auto& [key, candidates] : entries_) {
    nlohmann::ordered_json record;
    record["key"] = key;
    json texts = json::array();
    json scores = json::array();
    bool all_default = true;
    for (const PoolCandidate& c : candidates) {
      texts.push_back(c.text);
      scores.push_back(c.score);
      all_default = all_default && c.score == 1.0;
    }
    record["candidates"] = std::move(texts);
    if (!all_default) record["scores"] = std::move(scores);
    out << record.dump() << '\n';
  }
}

void CandidatePool::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  Write(out);
}

std::string PositionKey(std::string_view sentence_key, size_t position) {
  return std::string(sentence_key) + "@" + std::to_string(position);
}

std::string TokenKey(std::string_view normalized_token) {
  return "token:" + std::string(normalized_token);
}

std::string PromptKey(std::string_view prompt) { return HexDigest(Fnv1a64(prompt)); }

std::string MatchCapitalization(std::string_view model, std::string_view word) {
  std::string out(word);
  if (!model.empty() && !out.empty() && std::isupper(static_cast<unsigned char>(model[0])) &&
      std::islower(static_cast<unsigned char>(out[0]))) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

std::vector<ScoredCandidate> LexiconCandidateGenerator::Candidates(const TokenizedText& sentence,
                                                                   size_t position,
                                                                   std::string_view) const {
  std::vector<ScoredCandidate> out;
  const std::string_view token = sentence.token(position);
  for (const auto& n : lexicon_.Neighbors(token, max_distance_, limit_)) {
    out.push_back({MatchCapitalization(token, n.word), std::exp(-n.distance)});
  }
  return out;
}

std::vector<ScoredCandidate> PoolCandidateGenerator::Candidates(const TokenizedText& sentence,
                                                                size_t position,
                                                                std::string_view sentence_key) const {
  const std::vector<PoolCandidate>* found = nullptr;
  if (!sentence_key.empty()) found = pool_.Find(PositionKey(sentence_key, position));
  if (found == nullptr) found = pool_.Find(TokenKey(sentence.normalized(position)));
  std::vector<ScoredCandidate> out;
  if (found == nullptr) return out;
  const std::string_view token = sentence.token(position);
  for (const PoolCandidate& c : *found) {
    if (AsciiLower(c.text) == AsciiLower(token)) continue;
    out.push_back({MatchCapitalization(token, c.text), c.score});
  }
  return out;
}

std::string TidySentence(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c));
    if (space) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
      continue;
    }
    if ((c == ',' || c == '.') && !out.empty() && out.back() == ' ') out.pop_back();
    if (c == ',' && !out.empty() && out.back() == ',') continue;
    out.push_back(c);
  }
  while (!out.empty() && (out.back() == ' ' || out.back() == ',')) out.pop_back();
  while (!out.empty() && (out.front() == ' ' || out.front() == ',')) out.erase(out.begin());
  if (!out.empty() && out.back() != '.') out.push_back('.');
  return out;
}

namespace {

std::string StripFinalPeriod(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.back() == '.' || s.back() == ' ')) s.pop_back();
  return s;
}

std::vector<std::string> SplitClauses(const std::string& body) {
  std::vector<std::string> clauses;
  size_t start = 0;
  while (true) {
    const size_t comma = body.find(", ", start);
    clauses.push_back(body.substr(start, comma == std::string::npos ? comma : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 2;
  }
  return clauses;
}

std::string LowerFirst(std::string s) {
  if (s.size() > 1 && std::isupper(static_cast<unsigned char>(s[0])) &&
      std::islower(static_cast<unsigned char>(s[1]))) {
    // Only sentence-initial function words are lowered; names keep case.
    const std::string first = s.substr(0, s.find(' '));
    if (IsStopword(AsciiLower(first))) s[0] = static_cast<char>(std::tolower(s[0]));
  }
  return s;
}

std::string UpperFirst(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

constexpr size_t kMinTokensForDrop = 6;

bool IsNameToken(const TokenizedText& tokens, size_t i) {
  const std::string_view t = tokens.token(i);
  return !t.empty() && std::isupper(static_cast<unsigned char>(t[0])) &&
         !IsStopword(tokens.normalized(i));
}

// Replaces the first multi-token name with a neutral reference.
std::string HideName(const std::string& text) {
  const TokenizedText tokens(text);
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (!IsNameToken(tokens, i) || !IsNameToken(tokens, i + 1)) continue;
    size_t j = i + 1;
    while (j + 1 < tokens.size() && IsNameToken(tokens, j + 1)) ++j;
    const std::string replacement = i == 0 ? "This person" : "this person";
    return text.substr(0, tokens.span(i).begin) + replacement + text.substr(tokens.span(j).end);
  }
  return text;
}

const std::vector<std::string>& FillerClauses() {
  static const std::vector<std::string> kFillers = {
      "has been discussed in several regional reports",
      "remains a topic of quiet local interest",
      "was mentioned briefly in an old newsletter",
      "appears in a number of archived interviews",
      "is described differently by various sources",
      "drew modest attention at the time",
      "has rarely been covered by the press",
      "is noted in a short encyclopedia entry",
      "came up again in a recent documentary",
      "is recalled fondly by former neighbours",
      "was the subject of a brief radio segment",
      "is still debated among enthusiasts",
  };
  return kFillers;
}

}  // namespace

std::vector<std::string> RuleBasedRewriter::Paraphrases(std::string_view text, size_t n,
                                                        uint64_t seed) const {
  std::mt19937_64 rng(HashCombine(seed, Fnv1a64(text)));
  const std::string body = StripFinalPeriod(text);
  std::vector<std::string> bases = {body};
  const std::vector<std::string> clauses = SplitClauses(body);
  for (size_t r = 1; r < clauses.size(); ++r) {
    std::string rotated;
    for (size_t i = 0; i < clauses.size(); ++i) {
      std::string clause = clauses[(i + r) % clauses.size()];
      clause = i == 0 ? UpperFirst(LowerFirst(clause)) : LowerFirst(clause);
      rotated += (i ? ", " : "") + clause;
    }
    bases.push_back(rotated);
  }
  const size_t plain = bases.size();
  for (size_t i = 0; i < plain; ++i) {
    std::string hidden = HideName(bases[i]);
    if (hidden != bases[i]) bases.push_back(std::move(hidden));
  }
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    const std::string& base = bases[i % bases.size()];
    std::string current = base;
    TokenizedText tokens(base);
    if (i >= bases.size() && tokens.size() >= kMinTokensForDrop) {
      std::uniform_int_distribution<size_t> pick(1, tokens.size() - 1);
      current = tokens.WithoutToken(pick(rng));
    }
    out.push_back(TidySentence(current));
  }
  return out;
}

std::vector<std::string> RuleBasedRewriter::Generate(std::string_view prompt, size_t n,
                                                     uint64_t seed) const {
  std::mt19937_64 rng(HashCombine(seed, Fnv1a64(prompt)));
  TokenizedText tokens(StripFinalPeriod(prompt));
  const auto& fillers = FillerClauses();
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    std::string text;
    if (!tokens.empty()) {
      const size_t max_prefix = std::max<size_t>(1, tokens.size() / 2);
      std::uniform_int_distribution<size_t> len(1, max_prefix);
      const size_t keep = len(rng);
      text = tokens.text().substr(0, tokens.span(keep - 1).end);
    }
    std::uniform_int_distribution<size_t> pick(0, fillers.size() - 1);
    text += " " + fillers[pick(rng)];
    out.push_back(TidySentence(text));
  }
  return out;
}

}  // namespace fcattack
