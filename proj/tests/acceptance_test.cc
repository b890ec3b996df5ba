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


// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fcattack/camouflage.h"
#include "fcattack/evaluation.h"
#include "fcattack/experiment.h"
#include "fcattack/homoglyphs.h"
#include "fcattack/optimizers.h"
#include "fcattack/report.h"
#include "fcattack/retrieval.h"
#include "fcattack/verification.h"
#include "metric_oracle.h"

namespace fcattack {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Collects failure reasons for one criterion.
class Verdict {
 public:
  void Require(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

int g_failed = 0;

void Report(int id, const std::string& title, const Verdict& v, const std::string& detail) {
  std::printf("criterion %2d %s: %s (%s)\n", id, v.ok() ? "PASS" : "FAIL", title.c_str(), detail.c_str());
  for (const std::string& f : v.failures()) std::printf("    - %s\n", f.c_str());
  std::fflush(stdout);
  if (!v.ok()) ++g_failed;
}

std::string Fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

// Regression constants measured on the frozen corpus (corpus seed 7, default
// synthetic sizes, default defender). Keys are "<run>:<field>".
const std::map<std::string, double>& Pinned() {
  static const std::map<std::string, double> pinned = {
    {"modification/imperceptible/add:SUP", 100},
    {"modification/imperceptible/add:REF", 100},
    {"modification/imperceptible/add:changed", 0},
    {"modification/imperceptible/replace:SUP", 0},
    {"modification/imperceptible/replace:REF", 0},
    {"modification/imperceptible/replace:changed", 200},
    {"modification/contextualized-replace/add:SUP", 100},
    {"modification/contextualized-replace/add:REF", 100},
    {"modification/contextualized-replace/add:changed", 0},
    {"modification/contextualized-replace/replace:SUP", 46},
    {"modification/contextualized-replace/replace:REF", 0},
    {"modification/contextualized-replace/replace:changed", 154},
    {"modification/omitting-paraphrase/add:SUP", 100},
    {"modification/omitting-paraphrase/add:REF", 100},
    {"modification/omitting-paraphrase/add:changed", 0},
    {"modification/omitting-paraphrase/replace:SUP", 2},
    {"modification/omitting-paraphrase/replace:REF", 0},
    {"modification/omitting-paraphrase/replace:changed", 198},
    {"lexical-variation:to_nei", 100},
    {"contextualized-replace:to_nei", 100},
    {"imperceptible-homoglyph:to_nei", 99.5},
    {"imperceptible-reorder:to_nei", 99.5},
    {"imperceptible-delete:to_nei", 99.5},
    {"imperceptible-invisible:to_nei", 99.5},
    {"imperceptible-ret-homoglyph-5:to_nei", 96.464646464646464},
    {"imperceptible-ret-homoglyph-12:to_nei", 96.464646464646464},
    {"omitting-paraphrase:to_nei", 97.474747474747474},
    {"omitting-generate:to_nei", 95.959595959595958},
    {"rewrite:ref_to_nei", 0},
    {"rewrite:ref_to_sup", 100},
    {"rewrite-stance:ref_to_nei", 0},
    {"rewrite-stance:ref_to_sup", 100},
    {"rewrite-ret:ref_to_nei", 0},
    {"rewrite-ret:ref_to_sup", 100},
    {"rewrite-ret-filter:ref_to_nei", 0},
    {"rewrite-ret-filter:ref_to_sup", 100},
    {"supporting-generation:ref_to_nei", 0},
    {"supporting-generation:ref_to_sup", 100},
    {"supporting-generation-stance:ref_to_nei", 0},
    {"supporting-generation-stance:ref_to_sup", 100},
    {"knowledge/imperceptible/white-box:SUP", 0},
    {"knowledge/imperceptible/black-box:SUP", 0},
    {"knowledge/imperceptible/white-box:REF", 0},
    {"knowledge/imperceptible/black-box:REF", 0},
    {"knowledge/contextualized-replace/white-box:SUP", 46},
    {"knowledge/contextualized-replace/black-box:SUP", 46},
    {"knowledge/contextualized-replace/white-box:REF", 0},
    {"knowledge/contextualized-replace/black-box:REF", 0},
    {"knowledge/omitting-paraphrase/white-box:SUP", 2},
    {"knowledge/omitting-paraphrase/black-box:SUP", 1},
    {"knowledge/omitting-paraphrase/white-box:REF", 0},
    {"knowledge/omitting-paraphrase/black-box:REF", 0},
    {"verifier:train_accuracy", 1},
    {"paraphrase/imperceptible:survived", 124},
    {"paraphrase/imperceptible:gap_SUP", 1.2345679012345678},
    {"paraphrase/imperceptible:gap_REF", 0},
    {"paraphrase/contextualized-replace:survived", 124},
    {"paraphrase/contextualized-replace:gap_SUP", 0},
    {"paraphrase/contextualized-replace:gap_REF", 0},
    {"paraphrase/omitting-paraphrase:survived", 124},
    {"paraphrase/omitting-paraphrase:gap_SUP", 3.7037037037037037},
    {"paraphrase/omitting-paraphrase:gap_REF", 0},
    {"paraphrase/rewrite-stance:survived", 43},
    {"paraphrase/rewrite-stance:gap_REF", -13.95348837209302},
    {"paraphrase/supporting-generation-stance:survived", 141},
    {"paraphrase/supporting-generation-stance:gap_REF", -9.3023255813953512},
    {"paraphrase/supporting-generation-stance:gap_NEI", 15.306122448979592},
  };
  return pinned;
}

void CheckPinned(Verdict& v, const std::string& key, std::optional<double> actual) {
  const auto it = Pinned().find(key);
  if (it == Pinned().end()) {
    if (actual) std::printf("    unpinned {\"%s\", %.17g},\n", key.c_str(), *actual);
    v.Require(false, "no pinned value for " + key);
    return;
  }
  v.Require(actual.has_value() && std::abs(*actual - it->second) <= 1e-9,
            key + " = " + (actual ? Fmt(*actual) : "null") + ", pinned " + Fmt(it->second));
}

// ---------------------------------------------------------------------------
// 1. Metric oracle equivalence.

void MetricOracle() {
  const auto start = Clock::now();
  Verdict v;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const auto outcomes = testing::RandomOutcomes(1000 + seed);
    v.Require(testing::MatchesOracle(AttackedMetrics(outcomes), testing::ComputeOracle(outcomes), 0.0),
              "outcome set " + std::to_string(seed) + " differs from the oracle");
  }
  const double t = Seconds(start);
  v.Require(t < 5.0, "runtime " + Fmt(t) + " s");
  Report(1, "metric oracle equivalence", v, "100 outcome sets, " + Fmt(t) + " s");
}

// ---------------------------------------------------------------------------
// 2. Optimizer oracle optimality.

// Budgets used for the optimality check.
constexpr int kGaPopulation = 20;
constexpr int kGaIterations = 30;
constexpr int kDePopulation = 60;
constexpr int kDeIterations = 60;

struct ChainObjective {
  std::vector<int> counts;
  std::vector<std::vector<double>> unary;
  std::vector<std::vector<double>> pair;  // pair[i][a * counts[i+1] + b]

  double operator()(const Genome& g) const {
    double f = 0.0;
    for (size_t i = 0; i < g.size(); ++i) f += unary[i][static_cast<size_t>(g[i])];
    for (size_t i = 0; i + 1 < g.size(); ++i) {
      f += 0.3 * pair[i][static_cast<size_t>(g[i] * counts[i + 1] + g[i + 1])];
    }
    return f;
  }
};

ChainObjective MakeObjective(uint64_t seed) {
  std::mt19937_64 rng(seed);
  static const std::vector<std::vector<int>> shapes = {
      {16, 16, 16}, {8, 8, 8, 8}, {5, 5, 5, 5, 5}, {4, 4, 4, 4, 4, 4}, {12, 7, 9, 5}};
  ChainObjective o;
  o.counts = shapes[seed % shapes.size()];
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (size_t i = 0; i < o.counts.size(); ++i) {
    std::vector<double> row(static_cast<size_t>(o.counts[i]));
    for (double& x : row) x = u(rng);
    o.unary.push_back(row);
    if (i + 1 < o.counts.size()) {
      std::vector<double> p(static_cast<size_t>(o.counts[i] * o.counts[i + 1]));
      for (double& x : p) x = u(rng);
      o.pair.push_back(p);
    }
  }
  return o;
}

double ExhaustiveMinimum(const ChainObjective& o, uint64_t* states) {
  Genome g(o.counts.size(), 0);
  double best = o(g);
  *states = 0;
  while (true) {
    ++*states;
    best = std::min(best, o(g));
    size_t d = 0;
    while (d < g.size() && ++g[d] == o.counts[d]) g[d++] = 0;
    if (d == g.size()) break;
  }
  return best;
}

void OptimizerOracle() {
  const auto start = Clock::now();
  Verdict v;
  int ga_hits = 0, de_hits = 0;
  constexpr int kObjectives = 50;
  for (int s = 0; s < kObjectives; ++s) {
    const ChainObjective objective = MakeObjective(static_cast<uint64_t>(s));
    uint64_t states = 0;
    const double optimum = ExhaustiveMinimum(objective, &states);
    v.Require(states <= 4096, "objective " + std::to_string(s) + " has " + std::to_string(states) + " states");

    SearchBudget de = DefaultEvolutionBudget(static_cast<uint64_t>(s));
    de.population_size = kDePopulation;
    de.iterations = kDeIterations;
    const SearchResult d = DifferentialEvolution(DiscreteSpace{objective.counts}, objective, de);
    if (d.best_value == optimum) ++de_hits;

    GeneticProblem problem;
    problem.initial.assign(objective.counts.size(), 0);
    problem.neighbors = [&](const Genome& g) {
      std::vector<Genome> out;
      for (size_t i = 0; i < g.size(); ++i) {
        for (int c = 0; c < objective.counts[i]; ++c) {
          if (c == g[i]) continue;
          Genome n = g;
          n[i] = c;
          out.push_back(std::move(n));
        }
      }
      return out;
    };
    problem.fitness = [&](const Genome& g) { return -objective(g); };
    SearchBudget ga = DefaultGeneticBudget(static_cast<uint64_t>(s));
    ga.population_size = kGaPopulation;
    ga.iterations = kGaIterations;
    const SearchResult r = GeneticSearch(problem, ga);
    if (-r.best_value == optimum) ++ga_hits;
  }
  v.Require(ga_hits * 10 >= kObjectives * 9, "GA optimal in " + std::to_string(ga_hits) + "/50");
  v.Require(de_hits * 10 >= kObjectives * 9, "DE optimal in " + std::to_string(de_hits) + "/50");
  const double t = Seconds(start);
  v.Require(t < 30.0, "runtime " + Fmt(t) + " s");
  Report(2, "optimizer oracle optimality", v,
         "GA " + std::to_string(ga_hits) + "/50, DE " + std::to_string(de_hits) + "/50, " + Fmt(t) + " s");
}

// ---------------------------------------------------------------------------
// Shared frozen corpus and sweep.

const ExperimentData& Data() {
  static const ExperimentData data = PrepareExperimentData(ExperimentConfig{});
  return data;
}

struct SweepRun {
  std::vector<ExperimentReport> reports;
  std::string summary;
  std::vector<std::string> documents;
  double seconds = 0.0;
};

SweepRun RunFullSweep(size_t jobs) {
  const auto start = Clock::now();
  SweepRun run;
  run.reports = RunSweep(SweepGrid(), Data(), jobs);
  run.summary = SweepSummaryJson(run.reports);
  for (const ExperimentReport& r : run.reports) run.documents.push_back(ReportJson(r));
  run.seconds = Seconds(start);
  return run;
}

const ExperimentReport& Find(const SweepRun& run, const std::string& name) {
  for (const ExperimentReport& r : run.reports) {
    if (r.config.name == name) return r;
  }
  throw std::runtime_error("no sweep run named " + name);
}

// The attack of `config` rebuilt outside RunExperiment, with per-claim outcomes.
std::vector<AttackOutcome> RebuildOutcomes(const ExperimentConfig& config) {
  const SyntheticCorpus& corpus = Data().corpus;
  RetrieverOptions adversary_options;
  adversary_options.kind = config.adversary_retriever;
  const Index adversary_index = Index::Build(corpus.repo, adversary_options);
  const Verifier adversary = TrainAdversaryVerifier(config, corpus, adversary_index);
  AttackInputs inputs;
  inputs.claims = &corpus.eval;
  inputs.repo = &corpus.repo;
  inputs.adversary_index = &adversary_index;
  inputs.adversary_verifier = &adversary;
  inputs.lexicon = &corpus.lexicon;
  inputs.token_pool = &corpus.token_pool;
  inputs.counterclaims = &corpus.counterclaims;
  const AttackResult result = ExecuteAttack(config, inputs);
  PipelineConfig pc;
  pc.retriever.kind = config.defender_retriever;
  pc.rule.threshold = config.threshold;
  pc.k = config.top_k;
  const Pipeline pipeline(Data().defender, pc);
  return BuildOutcomes(pipeline, TargetClaims(config, corpus.eval), corpus.repo, result.repo,
                       result.records, config.scope);
}

double Accuracy(const MetricsRecord& m, std::initializer_list<Label> labels) {
  size_t n = 0, c = 0;
  for (Label l : labels) {
    n += m.counts[LabelIndex(l)];
    c += m.correct[LabelIndex(l)];
  }
  return n ? 100.0 * static_cast<double>(c) / static_cast<double>(n) : 0.0;
}

// ---------------------------------------------------------------------------
// 3. Imperceptibility invariants.

void Imperceptibility() {
  const auto start = Clock::now();
  Verdict v;
  const SyntheticCorpus& corpus = Data().corpus;
  const Index index = Index::Build(corpus.repo);
  std::vector<std::pair<std::string, std::string>> pairs;  // claim, sentence
  for (const Claim& c : corpus.eval) {
    if (pairs.size() == 200) break;
    if (c.label == Label::kNei || c.gold_evidence.empty()) continue;
    pairs.emplace_back(c.text, corpus.repo.SentenceText(c.gold_evidence.front()));
  }
  v.Require(pairs.size() == 200, "only " + std::to_string(pairs.size()) + " sentences");
  std::string detail;
  for (PerturbationTechnique t : {PerturbationTechnique::kHomoglyph, PerturbationTechnique::kReorder,
                                  PerturbationTechnique::kDelete, PerturbationTechnique::kInvisible}) {
    size_t recovered = 0, reduced = 0;
    for (size_t i = 0; i < pairs.size(); ++i) {
      ImperceptibleOptions options;
      options.technique = t;
      options.epsilon = 5;
      options.budget = DefaultEvolutionBudget(i);
      const PerturbedEvidence pe =
          ImperceptibleAttack(pairs[i].second, RetrievalScoreObjective(index, pairs[i].first), options);
      const std::string back = t == PerturbationTechnique::kHomoglyph
                                   ? HomoglyphTable::Default().Skeleton(pe.attacked)
                                   : StripControlPerturbations(pe.attacked);
      if (back == pairs[i].second) ++recovered;
      if (index.Score(pairs[i].first, pe.attacked) < index.Score(pairs[i].first, pairs[i].second)) ++reduced;
    }
    const std::string name(PerturbationTechniqueName(t));
    v.Require(recovered == pairs.size(), name + ": recovered " + std::to_string(recovered));
    v.Require(reduced * 100 >= pairs.size() * 95, name + ": score reduced for " + std::to_string(reduced));
    detail += name + " " + std::to_string(recovered) + "/" + std::to_string(reduced) + ", ";
  }
  const double t = Seconds(start);
  v.Require(t < 120.0, "runtime " + Fmt(t) + " s");
  Report(3, "imperceptibility invariants", v, "recovered/reduced of 200: " + detail + Fmt(t) + " s");
}

// ---------------------------------------------------------------------------
// 4. Replace/add asymmetry.

const char* kCamouflageBases[] = {"imperceptible", "contextualized-replace", "omitting-paraphrase"};

void OracleAgrees(Verdict& v, const ExperimentReport& report) {
  const auto outcomes = RebuildOutcomes(report.config);
  v.Require(testing::MatchesOracle(report.attacked, testing::ComputeOracle(outcomes), 0.0),
            report.config.name + ": report metrics differ from the oracle recomputation");
}

void ReplaceAddAsymmetry(const SweepRun& sweep) {
  const auto start = Clock::now();
  Verdict v;
  v.Require(Data().corpus.eval.size() >= 200, "frozen corpus has fewer than 200 evaluation claims");
  std::string detail;
  for (const char* base : kCamouflageBases) {
    const std::string prefix = std::string("modification/") + base;
    const ExperimentReport& add = Find(sweep, prefix + "/add");
    const ExperimentReport& replace = Find(sweep, prefix + "/replace");
    OracleAgrees(v, add);
    OracleAgrees(v, replace);
    const double changed = 100.0 * static_cast<double>(add.attacked.changed) /
                           static_cast<double>(add.target_claims);
    const double drop = Accuracy(replace.clean, {Label::kSup, Label::kRef}) -
                        Accuracy(replace.attacked, {Label::kSup, Label::kRef});
    v.Require(changed <= 2.0, prefix + ": add changed " + Fmt(changed) + "% of verdicts");
    v.Require(drop >= 20.0, prefix + ": replace dropped SUP+REF accuracy by " + Fmt(drop) + " pp");
    for (const ExperimentReport* r : {&add, &replace}) {
      CheckPinned(v, r->config.name + ":SUP", r->attacked.accuracy[0]);
      CheckPinned(v, r->config.name + ":REF", r->attacked.accuracy[1]);
      CheckPinned(v, r->config.name + ":changed", static_cast<double>(r->attacked.changed));
    }
    detail += std::string(base) + " add " + Fmt(changed) + "% / replace -" + Fmt(drop) + "pp, ";
  }
  const double t = Seconds(start);
  v.Require(t < 300.0, "runtime " + Fmt(t) + " s");
  Report(4, "replace/add asymmetry", v, detail + Fmt(t) + " s");
}

// ---------------------------------------------------------------------------
// 5. Direction of change.

void DirectionOfChange(const SweepRun& sweep) {
  const auto start = Clock::now();
  Verdict v;
  std::string detail;
  for (const char* name : {"lexical-variation", "contextualized-replace", "imperceptible-homoglyph",
                           "imperceptible-reorder", "imperceptible-delete", "imperceptible-invisible",
                           "imperceptible-ret-homoglyph-5", "imperceptible-ret-homoglyph-12",
                           "omitting-paraphrase", "omitting-generate"}) {
    const ExperimentReport& r = Find(sweep, name);
    const auto ratio = r.attacked.to_nei_ratio;
    v.Require(ratio && *ratio > 50.0, std::string(name) + ": to-NEI " + (ratio ? Fmt(*ratio) : "null"));
    CheckPinned(v, std::string(name) + ":to_nei", ratio);
  }
  for (const char* name : {"rewrite", "rewrite-stance", "rewrite-ret", "rewrite-ret-filter",
                           "supporting-generation", "supporting-generation-stance"}) {
    const ExperimentReport& r = Find(sweep, name);
    OracleAgrees(v, r);
    size_t changed = 0, to_nei = 0, to_sup = 0;
    for (const AttackOutcome& o : RebuildOutcomes(r.config)) {
      if (o.gold != Label::kRef || o.clean_label == o.attacked_label) continue;
      ++changed;
      if (o.attacked_label == Label::kNei) ++to_nei;
      if (o.attacked_label == Label::kSup) ++to_sup;
    }
    const double nei_share = changed ? 100.0 * static_cast<double>(to_nei) / static_cast<double>(changed) : 0.0;
    const double sup_share = changed ? 100.0 * static_cast<double>(to_sup) / static_cast<double>(changed) : 0.0;
    v.Require(changed > 0, std::string(name) + ": no REF verdict changed");
    v.Require(nei_share < 50.0, std::string(name) + ": REF to-NEI " + Fmt(nei_share));
    v.Require(sup_share > 50.0, std::string(name) + ": REF changes to SUP " + Fmt(sup_share));
    CheckPinned(v, std::string(name) + ":ref_to_nei", nei_share);
    CheckPinned(v, std::string(name) + ":ref_to_sup", sup_share);
    detail += std::string(name) + " NEI " + Fmt(nei_share) + "/SUP " + Fmt(sup_share) + ", ";
  }
  Report(5, "direction of change", v, detail + Fmt(Seconds(start)) + " s");
}

// ---------------------------------------------------------------------------
// 6. Budget monotonicity.

void BudgetMonotonicity(const SweepRun& sweep) {
  Verdict v;
  std::string detail;
  auto check = [&](const std::vector<std::string>& names, std::initializer_list<Label> labels) {
    for (Label l : labels) {
      std::optional<double> previous;
      std::string series;
      for (const std::string& n : names) {
        const auto acc = Find(sweep, n).attacked.accuracy[LabelIndex(l)];
        v.Require(acc.has_value(), n + ": no accuracy");
        if (!acc) continue;
        if (previous) v.Require(*acc <= *previous, n + " " + std::string(LabelName(l)) + " rose to " + Fmt(*acc));
        previous = acc;
        series += (series.empty() ? "" : ">") + Fmt(*acc);
      }
      detail += names.front().substr(0, names.front().rfind('/')) + " " + std::string(LabelName(l)) + " " + series + ", ";
    }
  };
  for (const char* base : kCamouflageBases) {
    const std::string p = std::string("budget/") + base + "/";
    check({p + "1", p + "2", p + "5"}, {Label::kSup, Label::kRef});
  }
  check({"planted/rewrite-stance/1", "planted/rewrite-stance/2"}, {Label::kRef});
  check({"planted/supporting-generation-stance/1", "planted/supporting-generation-stance/2"},
        {Label::kRef, Label::kNei});
  Report(6, "budget monotonicity", v, detail.substr(0, detail.size() - 2));
}

// ---------------------------------------------------------------------------
// 7. Knowledge robustness.

void KnowledgeRobustness(const SweepRun& sweep) {
  Verdict v;
  std::string detail;
  for (const char* base : kCamouflageBases) {
    const std::string p = std::string("knowledge/") + base + "/";
    const ExperimentReport& wb = Find(sweep, p + "white-box");
    const ExperimentReport& bb = Find(sweep, p + "black-box");
    for (Label l : {Label::kSup, Label::kRef}) {
      const auto a = wb.attacked.accuracy[LabelIndex(l)];
      const auto b = bb.attacked.accuracy[LabelIndex(l)];
      v.Require(a && b && std::abs(*a - *b) <= 10.0,
                p + std::string(LabelName(l)) + " white " + (a ? Fmt(*a) : "null") + " black " +
                    (b ? Fmt(*b) : "null"));
      CheckPinned(v, wb.config.name + ":" + std::string(LabelName(l)), a);
      CheckPinned(v, bb.config.name + ":" + std::string(LabelName(l)), b);
      if (a && b) detail += std::string(base) + " " + std::string(LabelName(l)) + " " + Fmt(*a) + "/" + Fmt(*b) + ", ";
    }
  }
  Report(7, "knowledge robustness", v, "white/black " + detail.substr(0, detail.size() - 2));
}

// ---------------------------------------------------------------------------
// 8. Verifier numerics.

void VerifierNumerics() {
  const auto start = Clock::now();
  Verdict v;
  const SyntheticCorpus& corpus = Data().corpus;
  const Index index = Index::Build(corpus.repo);
  const TrainingConfig config;
  const std::vector<TrainingPair> pairs =
      BuildTrainingPairs(corpus.train, corpus.repo, index, config.nei_negatives, config.hard_negatives);

  std::mt19937_64 rng(2026);
  std::normal_distribution<double> normal(0.0, 0.05);
  std::uniform_int_distribution<size_t> pick(0, pairs.size() - 1);
  const PairFeaturizer featurizer = Verifier(config).featurizer();
  const uint32_t dim = featurizer.dimension();
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const TrainingPair& p = pairs[pick(rng)];
    const SparseVector x = featurizer(p.claim, p.evidence);
    std::vector<double> w(3 * static_cast<size_t>(dim), 0.0);
    for (const SparseFeature& f : x) {
      for (size_t k = 0; k < 3; ++k) w[k * dim + f.index] = normal(rng);
    }
    const Label label = kAllLabels[static_cast<size_t>(draw) % 3];
    std::vector<double> grad;
    LogLoss(w, dim, x, label, &grad);
    for (const SparseFeature& f : x) {
      for (size_t k = 0; k < 3; ++k) {
        const size_t i = k * dim + f.index;
        const double h = 1e-5, saved = w[i];
        w[i] = saved + h;
        const double up = LogLoss(w, dim, x, label, nullptr);
        w[i] = saved - h;
        const double down = LogLoss(w, dim, x, label, nullptr);
        w[i] = saved;
        const double numeric = (up - down) / (2 * h);
        const double scale = std::max({std::abs(numeric), std::abs(grad[i]), 1e-8});
        worst = std::max(worst, std::abs(numeric - grad[i]) / scale);
      }
    }
  }
  v.Require(worst < 1e-5, "largest relative gradient error " + Fmt(worst));

  const Verifier a = TrainVerifier(pairs, config);
  const Verifier b = TrainVerifier(pairs, config);
  std::ostringstream sa, sb;
  a.Write(sa);
  b.Write(sb);
  v.Require(sa.str() == sb.str(), "two trainings with one seed differ");

  size_t correct = 0;
  for (const TrainingPair& p : pairs) correct += a.Predict(p.claim, p.evidence).Argmax() == p.label;
  const double accuracy = static_cast<double>(correct) / static_cast<double>(pairs.size());
  v.Require(accuracy >= 0.95, "training accuracy " + Fmt(accuracy));
  CheckPinned(v, "verifier:train_accuracy", accuracy);
  Report(8, "verifier numerics", v,
         "max rel. error " + Fmt(worst) + ", train accuracy " + Fmt(accuracy) + " on " +
             std::to_string(pairs.size()) + " pairs, " + Fmt(Seconds(start)) + " s");
}

// ---------------------------------------------------------------------------
// 9. Paraphrase robustness protocol.

std::vector<PoolCandidate> AdversarialPool(const Claim& claim) {
  std::vector<PoolCandidate> pool;
  const TokenizedText tokens(claim.text);
  std::string upper = claim.text;
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  pool.push_back({claim.text, 1.0});
  pool.push_back({upper, 1.0});
  pool.push_back({"  " + claim.text.substr(0, claim.text.size() - 1) + " ,", 1.0});
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!std::isupper(static_cast<unsigned char>(tokens.token(i)[0]))) continue;
    pool.push_back({tokens.WithoutToken(i), 1.0});
    pool.push_back({tokens.WithReplacement(i, "someone"), 1.0});
    pool.push_back({tokens.WithReplacement(i, std::string(tokens.token(i)) + "x") + " indeed", 1.0});
  }
  pool.push_back({claim.text + " as the archive notes", 1.0});
  return pool;
}

// True when `text` is admissible for `claim`: not the same token sequence and
// every capitalised claim word still present.
bool Admissible(const Claim& claim, const std::string& text) {
  const auto lower = [](std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  const auto words = [&](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80) {
        cur += c;
      } else if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  };
  const auto a = words(lower(claim.text));
  const auto b = words(lower(text));
  if (a == b) return false;
  const std::set<std::string> present(b.begin(), b.end());
  for (const std::string& w : words(claim.text)) {
    if (std::isupper(static_cast<unsigned char>(w[0])) && !IsStopword(lower(w)) && !present.count(lower(w))) {
      return false;
    }
  }
  return true;
}

void ParaphraseProtocol(const SweepRun& sweep) {
  const auto start = Clock::now();
  Verdict v;
  const SyntheticCorpus& corpus = Data().corpus;
  const Index index = Index::Build(corpus.repo);
  size_t pools = 0, chosen = 0;
  for (const ClaimSet* set : {&corpus.eval, &corpus.train}) {
    for (const Claim& claim : *set) {
      std::vector<PoolCandidate> pool = AdversarialPool(claim);
      if (const auto* given = corpus.claim_paraphrases.Find(claim.id)) {
        pool.insert(pool.end(), given->begin(), given->end());
      }
      for (size_t drop_valid = 0; drop_valid < 2; ++drop_valid) {
        std::vector<PoolCandidate> p = pool;
        if (drop_valid) {
          p.erase(std::remove_if(p.begin(), p.end(),
                                 [&](const PoolCandidate& c) { return Admissible(claim, c.text); }),
                  p.end());
        }
        ++pools;
        const auto pick = SelectParaphrase(claim, p, index);
        if (pick) {
          ++chosen;
          v.Require(Admissible(claim, *pick), claim.id + ": selected inadmissible '" + *pick + "'");
        }
        const bool any = std::any_of(p.begin(), p.end(),
                                     [&](const PoolCandidate& c) { return Admissible(claim, c.text); });
        v.Require(pick.has_value() == any, claim.id + ": selection presence mismatch");
      }
    }
  }
  std::string detail = std::to_string(pools) + " pools, " + std::to_string(chosen) + " selections; gap ";
  for (const char* base : {"imperceptible", "contextualized-replace", "omitting-paraphrase",
                           "rewrite-stance", "supporting-generation-stance"}) {
    const ExperimentReport& r = Find(sweep, std::string("paraphrase/") + base);
    v.Require(r.paraphrase.has_value(), r.config.name + ": no paraphrase report");
    if (!r.paraphrase) continue;
    const auto& p = *r.paraphrase;
    CheckPinned(v, r.config.name + ":survived", static_cast<double>(p.survived));
    for (Label l : kAllLabels) {
      const auto a = p.original_attacked.accuracy[LabelIndex(l)];
      const auto b = p.paraphrased_attacked.accuracy[LabelIndex(l)];
      if (!a || !b) continue;
      CheckPinned(v, r.config.name + ":gap_" + std::string(LabelName(l)), *b - *a);
      detail += std::string(base) + " " + std::string(LabelName(l)) + " " + Fmt(*b - *a) + ", ";
    }
  }
  Report(9, "paraphrase robustness protocol", v, detail + Fmt(Seconds(start)) + " s");
}

// ---------------------------------------------------------------------------
// 10. End-to-end reproducibility.

void Reproducibility(const SweepRun& first) {
  Verdict v;
  const SweepRun second = RunFullSweep(2);
  v.Require(first.reports.size() == SweepGrid().size(), "sweep is missing runs");
  v.Require(first.summary == second.summary, "sweep summaries differ");
  size_t differing = 0;
  for (size_t i = 0; i < first.documents.size() && i < second.documents.size(); ++i) {
    differing += first.documents[i] != second.documents[i];
  }
  v.Require(differing == 0 && first.documents.size() == second.documents.size(),
            std::to_string(differing) + " report documents differ");
  v.Require(first.seconds < 900.0 && second.seconds < 900.0,
            "sweep took " + Fmt(first.seconds) + " s and " + Fmt(second.seconds) + " s");
  Report(10, "end-to-end reproducibility", v,
         std::to_string(first.reports.size()) + " runs, " + Fmt(first.seconds) + " s (1 job) and " +
             Fmt(second.seconds) + " s (2 jobs)");
}

}  // namespace
}  // namespace fcattack

int main() {
  using namespace fcattack;
  try {
    MetricOracle();
    OptimizerOracle();
    Imperceptibility();
    const SweepRun sweep = RunFullSweep(1);
    ReplaceAddAsymmetry(sweep);
    DirectionOfChange(sweep);
    BudgetMonotonicity(sweep);
    KnowledgeRobustness(sweep);
    VerifierNumerics();
    ParaphraseProtocol(sweep);
    Reproducibility(sweep);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
