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

#include "fcattack/verification.h"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "fcattack/errors.h"
#include "fcattack/text.h"

namespace fcattack {

namespace {

constexpr char kSep = '\x1f';

uint32_t LengthBucket(size_t n) {
  if (n == 0) return 0;
  if (n <= 3) return 1;
  if (n <= 7) return 2;
  if (n <= 15) return 3;
  return 4;
}

SparseVector Canonicalize(std::vector<SparseFeature> raw) {
  std::sort(raw.begin(), raw.end(),
            [](const SparseFeature& a, const SparseFeature& b) { return a.index < b.index; });
  SparseVector out;
  out.reserve(raw.size());
  for (const SparseFeature& f : raw) {
    if (!out.empty() && out.back().index == f.index) {
      out.back().value += f.value;
    } else {
      out.push_back(f);
    }
  }
  std::erase_if(out, [](const SparseFeature& f) { return f.value == 0.0; });
  return out;
}

}  // namespace

PairFeaturizer::PairFeaturizer(uint32_t hash_dim, uint64_t hash_seed)
    : hash_dim_(hash_dim), hash_seed_(hash_seed) {
  if (hash_dim == 0) throw ConfigError("hash dimension must be positive");
}

uint32_t PairFeaturizer::Hash(std::string_view feature) const {
  return static_cast<uint32_t>(HashCombine(hash_seed_, Fnv1a64(feature)) % hash_dim_);
}

double PairFeaturizer::OverlapRatio(std::string_view claim, std::string_view evidence) {
  std::vector<std::string> claim_terms = ContentWords(claim);
  if (claim_terms.empty()) {
    std::unordered_set<std::string> all;
    for (std::string& t : NormalizedTokens(claim)) {
      if (all.insert(t).second) claim_terms.push_back(t);
    }
  }
  if (claim_terms.empty()) return 0.0;
  std::vector<std::string> ev = NormalizedTokens(evidence);
  std::unordered_set<std::string> ev_set(ev.begin(), ev.end());
  size_t hit = 0;
  for (const std::string& t : claim_terms) hit += ev_set.count(t);
  return static_cast<double>(hit) / static_cast<double>(claim_terms.size());
}

SparseVector PairFeaturizer::operator()(std::string_view claim, std::string_view evidence) const {
  const std::vector<std::string> c = NormalizedTokens(claim);
  const std::vector<std::string> e = NormalizedTokens(evidence);
  std::vector<SparseFeature> raw;
  raw.reserve(4 * (c.size() + e.size()) + 64);

  auto add_ngrams = [&](const std::vector<std::string>& toks, char side) {
    std::string key;
    for (size_t i = 0; i < toks.size(); ++i) {
      key.assign(1, side);
      key.push_back(kSep);
      key += toks[i];
      raw.push_back({Hash(key), 1.0});
      if (i + 1 < toks.size()) {
        key.assign(1, static_cast<char>(side + 1));
        key.push_back(kSep);
        key += toks[i];
        key.push_back(' ');
        key += toks[i + 1];
        raw.push_back({Hash(key), 1.0});
      }
    }
  };
  add_ngrams(c, 'c');
  add_ngrams(e, 'e');

  const std::vector<std::string> c_content = ContentWords(claim);
  const std::vector<std::string> e_content = ContentWords(evidence);
  std::string key;
  for (const std::string& a : c_content) {
    for (const std::string& b : e_content) {
      key.assign("x");
      key.push_back(kSep);
      key += a;
      key.push_back(kSep);
      key += b;
      raw.push_back({Hash(key), 1.0});
    }
  }

  bool claim_negated = std::any_of(c.begin(), c.end(), [](const std::string& t) { return IsNegationMarker(t); });
  bool evidence_negated = std::any_of(e.begin(), e.end(), [](const std::string& t) { return IsNegationMarker(t); });
  if (!c.empty()) {
    const double r = OverlapRatio(claim, evidence);
    raw.push_back({DenseIndex(kOverlapRatio), r});
    uint32_t bucket = r == 0.0    ? kOverlapNone
                      : r < 0.34  ? kOverlapLow
                      : r < 0.67  ? kOverlapMid
                      : r < 1.0   ? kOverlapHigh
                                  : kOverlapFull;
    raw.push_back({DenseIndex(bucket), 1.0});
    if (evidence_negated && bucket == kOverlapFull) {
      raw.push_back({DenseIndex(kEvidenceNegationFullOverlap), 1.0});
    }
    if (evidence_negated && bucket == kOverlapHigh) {
      raw.push_back({DenseIndex(kEvidenceNegationHighOverlap), 1.0});
    }
  }
  const std::vector<std::string> entities = EntityTokens(claim);
  if (!entities.empty()) {
    const std::unordered_set<std::string> present(e.begin(), e.end());
    size_t found = 0;
    for (const std::string& entity : entities) {
      const std::vector<std::string> norm = NormalizedTokens(entity);
      found += !norm.empty() && present.count(norm.front()) > 0;
    }
    raw.push_back({DenseIndex(found == entities.size() ? kEntityAllPresent
                              : found == 0             ? kEntityAllMissing
                                                       : kEntitySomeMissing),
                   1.0});
  }
  if (claim_negated) raw.push_back({DenseIndex(kClaimNegation), 1.0});
  if (evidence_negated) raw.push_back({DenseIndex(kEvidenceNegation), 1.0});
  raw.push_back({DenseIndex(kClaimLength0 + LengthBucket(c.size())), 1.0});
  raw.push_back({DenseIndex(kEvidenceLength0 + LengthBucket(e.size())), 1.0});
  return Canonicalize(std::move(raw));
}

double VerdictDistribution::operator[](Label label) const {
  switch (label) {
    case Label::kSup:
      return sup;
    case Label::kRef:
      return ref;
    case Label::kNei:
      return nei;
  }
  return 0.0;
}

Label VerdictDistribution::Argmax() const {
  if (sup >= ref && sup >= nei) return Label::kSup;
  if (ref >= nei) return Label::kRef;
  return Label::kNei;
}

std::array<double, 3> ClassProbabilities(std::span<const double> weights, uint32_t dimension,
                                         const SparseVector& features) {
  std::array<double, 3> z{};
  for (size_t k = 0; k < 3; ++k) {
    const double* row = weights.data() + k * dimension;
    double s = 0.0;
    for (const SparseFeature& f : features) s += row[f.index] * f.value;
    z[k] = s;
  }
  const double m = std::max({z[0], z[1], z[2]});
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    total += v;
  }
  for (double& v : z) v /= total;
  return z;
}

double LogLoss(std::span<const double> weights, uint32_t dimension, const SparseVector& features,
               Label label, std::vector<double>* gradient) {
  const std::array<double, 3> p = ClassProbabilities(weights, dimension, features);
  const size_t y = LabelIndex(label);
  if (gradient != nullptr) {
    gradient->assign(weights.size(), 0.0);
    for (size_t k = 0; k < 3; ++k) {
      const double g = p[k] - (k == y ? 1.0 : 0.0);
      for (const SparseFeature& f : features) (*gradient)[k * dimension + f.index] += g * f.value;
    }
  }
  return -std::log(std::max(p[y], 1e-300));
}

Verifier::Verifier(const TrainingConfig& config)
    : config_(config),
      featurizer_(config.hash_dim, HashCombine(0x5eed, config.seed)),
      weights_(3 * static_cast<size_t>(featurizer_.dimension()), 0.0) {}

VerdictDistribution Verifier::Predict(std::string_view claim, std::string_view evidence) const {
  return PredictFeatures(featurizer_(claim, evidence));
}

VerdictDistribution Verifier::PredictFeatures(const SparseVector& features) const {
  const std::array<double, 3> p = ClassProbabilities(weights_, dimension(), features);
  return VerdictDistribution{p[0], p[1], p[2]};
}

bool Verifier::operator==(const Verifier& other) const {
  return config_ == other.config_ && weights_ == other.weights_;
}

// Text dump: a header, the config echo, then three dense rows of hex floats
// (exact round trip).
void Verifier::Write(std::ostream& out) const {
  char buf[64];
  out << "fcattack-verifier 1\n";
  out << "epochs " << config_.epochs << '\n';
  std::snprintf(buf, sizeof(buf), "%a", config_.learning_rate);
  out << "learning_rate " << buf << '\n';
  out << "seed " << config_.seed << '\n';
  out << "hash_dim " << config_.hash_dim << '\n';
  out << "nei_negatives " << config_.nei_negatives << '\n';
  out << "hard_negatives " << config_.hard_negatives << '\n';
  out << "weights 3 " << dimension() << '\n';
  for (size_t k = 0; k < 3; ++k) {
    const double* row = weights_.data() + k * dimension();
    for (uint32_t i = 0; i < dimension(); ++i) {
      if (i > 0) out << ' ';
      if (row[i] == 0.0) {
        out << '0';
      } else {
        std::snprintf(buf, sizeof(buf), "%a", row[i]);
        out << buf;
      }
    }
    out << '\n';
  }
}

Verifier Verifier::Read(std::istream& in) {
  auto expect_key = [&](const char* key) {
    std::string k;
    if (!(in >> k) || k != key) {
      throw ValidationError(std::string("corrupt verifier file: expected '") + key + "'");
    }
  };
  auto read_double = [&]() {
    std::string tok;
    if (!(in >> tok)) throw ValidationError("corrupt verifier file: truncated");
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw ValidationError("corrupt verifier file: bad number");
    return v;
  };
  std::string magic;
  int format = 0;
  if (!(in >> magic >> format) || magic != "fcattack-verifier" || format != 1) {
    throw ValidationError("not an fcattack verifier file");
  }
  TrainingConfig config;
  expect_key("epochs");
  in >> config.epochs;
  expect_key("learning_rate");
  config.learning_rate = read_double();
  expect_key("seed");
  in >> config.seed;
  expect_key("hash_dim");
  in >> config.hash_dim;
  expect_key("nei_negatives");
  in >> config.nei_negatives;
  expect_key("hard_negatives");
  in >> config.hard_negatives;
  expect_key("weights");
  size_t rows = 0;
  uint32_t dim = 0;
  in >> rows >> dim;
  if (!in) throw ValidationError("corrupt verifier file: header");
  Verifier v(config);
  if (rows != 3 || dim != v.dimension()) throw ValidationError("verifier weight shape mismatch");
  for (double& w : v.weights_) w = read_double();
  return v;
}

void Verifier::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  Write(out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

Verifier Verifier::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return Read(in);
}

std::vector<TrainingPair> BuildTrainingPairs(const ClaimSet& claims, const Repository& repo,
                                             const Index& index, size_t nei_negatives,
                                             size_t hard_negatives) {
  std::vector<TrainingPair> pairs;
  std::vector<std::string> unresolved;
  for (const Claim& claim : claims) {
    if (claim.label == Label::kNei) {
      std::vector<ScoredSentence> ranked = index.RankAll(repo, claim.text);
      const size_t n = std::min(nei_negatives, ranked.size());
      for (size_t i = 0; i < n; ++i) {
        pairs.push_back({claim.text, repo.SentenceText(ranked[i].ref), Label::kNei});
      }
      continue;
    }
    bool ok = !claim.gold_evidence.empty();
    for (const SentenceRef& ref : claim.gold_evidence) ok = ok && repo.Contains(ref);
    if (!ok) {
      unresolved.push_back(claim.id);
      continue;
    }
    for (const SentenceRef& ref : claim.gold_evidence) {
      pairs.push_back({claim.text, repo.SentenceText(ref), claim.label});
    }
    if (hard_negatives == 0) continue;
    size_t added = 0;
    for (const ScoredSentence& s : index.RankAll(repo, claim.text)) {
      if (added == hard_negatives) break;
      if (std::find(claim.gold_evidence.begin(), claim.gold_evidence.end(), s.ref) != claim.gold_evidence.end()) {
        continue;
      }
      pairs.push_back({claim.text, repo.SentenceText(s.ref), Label::kNei});
      ++added;
    }
  }
  if (!unresolved.empty()) {
    std::string msg = "claims with unresolvable gold evidence:";
    for (const std::string& id : unresolved) msg += " " + id;
    throw ValidationError(msg);
  }
  return pairs;
}

Verifier TrainVerifier(const std::vector<TrainingPair>& pairs, const TrainingConfig& config) {
  Verifier verifier(config);
  if (config.epochs < 0) throw ConfigError("epochs must be non-negative");
  if (config.epochs == 0 || pairs.empty()) return verifier;
  const PairFeaturizer& featurizer = verifier.featurizer();
  const uint32_t dim = verifier.dimension();
  std::vector<SparseVector> features;
  features.reserve(pairs.size());
  for (const TrainingPair& p : pairs) features.push_back(featurizer(p.claim, p.evidence));

  std::span<double> w = verifier.mutable_weights();
  std::vector<size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    const double lr = config.learning_rate / (1.0 + 0.5 * epoch);
    for (size_t idx : order) {
      const SparseVector& x = features[idx];
      const std::array<double, 3> p = ClassProbabilities(w, dim, x);
      const size_t y = LabelIndex(pairs[idx].label);
      for (size_t k = 0; k < 3; ++k) {
        const double g = p[k] - (k == y ? 1.0 : 0.0);
        double* row = w.data() + k * dim;
        for (const SparseFeature& f : x) row[f.index] -= lr * g * f.value;
      }
    }
  }
  return verifier;
}

Verifier TrainVerifier(const ClaimSet& claims, const Repository& repo, const Index& index,
                       const TrainingConfig& config) {
  return TrainVerifier(BuildTrainingPairs(claims, repo, index, config.nei_negatives, config.hard_negatives), config);
}

AggregateVerdict AggregateDistributions(std::span<const VerdictDistribution> per_sentence,
                                        const AggregationRule& rule) {
  if (per_sentence.empty()) return {Label::kNei, 1.0};
  double best = -1.0;
  Label best_label = Label::kNei;
  double best_nei = 0.0;
  for (const VerdictDistribution& d : per_sentence) {
    const double m = std::max(d.sup, d.ref);
    if (m > best) {
      best = m;
      best_label = d.sup >= d.ref ? Label::kSup : Label::kRef;
    }
    best_nei = std::max(best_nei, d.nei);
  }
  if (best >= rule.threshold) return {best_label, best};
  return {Label::kNei, best_nei};
}

AggregateVerdict AggregateVerdictFor(const Verifier& verifier, std::string_view claim,
                                     const RankedEvidence& evidence, const Repository& repo,
                                     const AggregationRule& rule) {
  std::vector<VerdictDistribution> dists;
  dists.reserve(evidence.items.size());
  for (const ScoredSentence& s : evidence.items) {
    dists.push_back(verifier.Predict(claim, repo.SentenceText(s.ref)));
  }
  return AggregateDistributions(dists, rule);
}

}  // namespace fcattack
