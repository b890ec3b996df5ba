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


// fcattack: one subcommand per pipeline stage. Every command writes a
// config.json echo next to its outputs.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fcattack/attack.h"
#include "fcattack/candidates.h"
#include "fcattack/corpus.h"
#include "fcattack/errors.h"
#include "fcattack/evaluation.h"
#include "fcattack/experiment.h"
#include "fcattack/planting.h"
#include "fcattack/report.h"
#include "fcattack/retrieval.h"
#include "fcattack/synthetic.h"
#include "fcattack/verification.h"
#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace fcattack {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;

// Corpus directory layout.
constexpr const char* kRepoFile = "repo.jsonl";
constexpr const char* kTrainClaimsFile = "claims.train.jsonl";
constexpr const char* kEvalClaimsFile = "claims.eval.jsonl";
constexpr const char* kLexiconFile = "lexicon.txt";
constexpr const char* kTokenPoolFile = "token_pool.txt";
constexpr const char* kParaphraseFile = "paraphrases.txt";
constexpr const char* kCounterclaimFile = "counterclaims.jsonl";
// Attack directory layout.
constexpr const char* kMarksFile = "attack_marks.txt";
constexpr const char* kRecordsFile = "records.jsonl";
constexpr const char* kIndexFile = "index.dat";
constexpr const char* kVerifierFile = "verifier.txt";
constexpr const char* kEchoFile = "config.json";

void Log(const std::string& command, const std::string& event,
         std::initializer_list<std::pair<const char*, std::string>> fields = {}) {
  std::ostringstream line;
  line << "fcattack cmd=" << command << " event=" << event;
  for (const auto& [k, v] : fields) line << ' ' << k << '=' << v;
  std::cerr << line.str() << '\n';
}

std::string OutputRoot() {
  const char* env = std::getenv("FCATTACK_OUT");
  return env != nullptr && *env != '\0' ? std::string(env) : std::string("fcattack-out");
}

void MakeDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string Join(const std::string& dir, const char* file) { return (fs::path(dir) / file).string(); }

// Every option of `cmd` with its resolved value, in declaration order.
Json EchoOptions(const CLI::App& cmd) {
  Json options = Json::object();
  for (const CLI::Option* opt : cmd.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->get_expected_max() == 0) {
      options[name] = opt->count() > 0;
      continue;
    }
    std::vector<std::string> values = opt->results();
    if (values.empty() && !opt->get_default_str().empty()) values.push_back(opt->get_default_str());
    if (opt->get_items_expected_max() > 1) {
      options[name] = values;
    } else if (values.empty()) {
      options[name] = nullptr;
    } else {
      options[name] = values.front();
    }
  }
  return options;
}

void WriteEcho(const std::string& dir, const CLI::App& cmd, std::optional<Json> extra = std::nullopt) {
  Json echo;
  echo["command"] = cmd.get_name();
  echo["options"] = EchoOptions(cmd);
  if (extra) echo["experiment"] = std::move(*extra);
  WriteText(Join(dir, kEchoFile), echo.dump(2) + "\n");
}

template <typename T>
std::optional<T> LoadIfPresent(const std::string& path, T (*load)(const std::string&)) {
  if (!fs::exists(path)) return std::nullopt;
  return load(path);
}

// ---------------------------------------------------------------------------
// gen-corpus

struct GenCorpusArgs {
  std::string out;
  uint64_t seed = 7;
  SynthConfig synth;
  std::string docs;
  std::string claims;
  std::string train_claims;
  std::string counterclaims;
  std::string lexicon;
  std::string token_pool;
  std::string paraphrases;
};

void RunGenCorpus(const GenCorpusArgs& a, const CLI::App& cmd) {
  if (!a.docs.empty() && a.claims.empty()) throw ConfigError("--docs needs --claims");
  if (a.docs.empty() && !a.claims.empty()) throw ConfigError("--claims needs --docs");
  MakeDir(a.out);
  if (a.docs.empty()) {
    const SyntheticCorpus corpus = GenerateSyntheticCorpus(a.synth, a.seed);
    SaveRepository(corpus.repo, Join(a.out, kRepoFile));
    SaveClaims(corpus.train, Join(a.out, kTrainClaimsFile));
    SaveClaims(corpus.eval, Join(a.out, kEvalClaimsFile));
    corpus.lexicon.Save(Join(a.out, kLexiconFile));
    corpus.token_pool.Save(Join(a.out, kTokenPoolFile));
    corpus.claim_paraphrases.Save(Join(a.out, kParaphraseFile));
    SaveCounterclaims(corpus.counterclaims, Join(a.out, kCounterclaimFile));
    Log(cmd.get_name(), "generated",
        {{"documents", std::to_string(corpus.repo.document_count())},
         {"sentences", std::to_string(corpus.repo.sentence_count())},
         {"train_claims", std::to_string(corpus.train.size())},
         {"eval_claims", std::to_string(corpus.eval.size())}});
  } else {
    const Repository repo = LoadRepository(a.docs);
    auto check = [&](const ClaimSet& claims, const std::string& source) {
      for (const Claim& c : claims) {
        for (const SentenceRef& ref : c.gold_evidence) {
          if (!repo.Contains(ref)) {
            throw ValidationError(source + ": claim " + c.id + " cites missing sentence " + ref.ToString());
          }
        }
      }
    };
    const ClaimSet eval = LoadClaims(a.claims);
    check(eval, a.claims);
    SaveRepository(repo, Join(a.out, kRepoFile));
    SaveClaims(eval, Join(a.out, kEvalClaimsFile));
    if (!a.train_claims.empty()) {
      const ClaimSet train = LoadClaims(a.train_claims);
      check(train, a.train_claims);
      SaveClaims(train, Join(a.out, kTrainClaimsFile));
    }
    if (!a.counterclaims.empty()) {
      SaveCounterclaims(LoadCounterclaims(a.counterclaims), Join(a.out, kCounterclaimFile));
    }
    if (!a.lexicon.empty()) EmbeddingLexicon::Load(a.lexicon).Save(Join(a.out, kLexiconFile));
    if (!a.token_pool.empty()) CandidatePool::Load(a.token_pool).Save(Join(a.out, kTokenPoolFile));
    if (!a.paraphrases.empty()) CandidatePool::Load(a.paraphrases).Save(Join(a.out, kParaphraseFile));
    Log(cmd.get_name(), "ingested",
        {{"documents", std::to_string(repo.document_count())}, {"eval_claims", std::to_string(eval.size())}});
  }
  WriteEcho(a.out, cmd);
}

// ---------------------------------------------------------------------------
// index

struct IndexArgs {
  std::string out;
  std::string corpus;
  std::string repo;
  std::string retriever = "tfidf";
};

void RunIndex(const IndexArgs& a, const CLI::App& cmd) {
  RetrieverOptions options;
  options.kind = ParseRetrieverKind(a.retriever);
  const std::string repo_path = a.repo.empty() ? Join(a.corpus, kRepoFile) : a.repo;
  const Repository repo = LoadRepository(repo_path);
  const Index index = Index::Build(repo, options);
  MakeDir(a.out);
  index.Save(Join(a.out, kIndexFile));
  WriteEcho(a.out, cmd);
  Log(cmd.get_name(), "built", {{"retriever", a.retriever}, {"sentences", std::to_string(repo.sentence_count())}});
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string out;
  std::string corpus;
  std::string repo;
  std::string claims;
  std::string index;
  std::string retriever = "tfidf";
  TrainingConfig training;
  double data_fraction = 1.0;
  uint64_t subsample_seed = 0;
};

void RunTrain(const TrainArgs& a, const CLI::App& cmd) {
  if (!(a.data_fraction > 0.0 && a.data_fraction <= 1.0)) throw ConfigError("--data-fraction must be in (0, 1]");
  if (a.training.epochs < 1) throw ConfigError("--epochs must be >= 1");
  if (a.training.hash_dim < 1) throw ConfigError("--hash-dim must be positive");
  if (!(a.training.learning_rate > 0.0)) throw ConfigError("--learning-rate must be positive");
  RetrieverOptions options;
  options.kind = ParseRetrieverKind(a.retriever);
  const Repository repo = LoadRepository(a.repo.empty() ? Join(a.corpus, kRepoFile) : a.repo);
  ClaimSet claims = LoadClaims(a.claims.empty() ? Join(a.corpus, kTrainClaimsFile) : a.claims);
  if (a.data_fraction < 1.0) claims = SubsampleClaims(claims, a.data_fraction, a.subsample_seed);
  const Index index = a.index.empty() ? Index::Build(repo, options) : Index::Load(a.index);
  const std::vector<TrainingPair> pairs =
      BuildTrainingPairs(claims, repo, index, a.training.nei_negatives, a.training.hard_negatives);
  const Verifier verifier = TrainVerifier(pairs, a.training);
  size_t correct = 0;
  for (const TrainingPair& p : pairs) correct += verifier.Predict(p.claim, p.evidence).Argmax() == p.label;
  MakeDir(a.out);
  verifier.Save(Join(a.out, kVerifierFile));
  WriteEcho(a.out, cmd);
  char acc[32];
  std::snprintf(acc, sizeof(acc), "%.4f", pairs.empty() ? 0.0 : static_cast<double>(correct) / pairs.size());
  Log(cmd.get_name(), "trained",
      {{"claims", std::to_string(claims.size())}, {"pairs", std::to_string(pairs.size())}, {"train_accuracy", acc}});
}

// ---------------------------------------------------------------------------
// attack

struct AttackArgs {
  std::string out;
  std::string corpus;
  std::string claims;
  std::string config;
  std::string adversary_index;
  std::string adversary_verifier;
  std::string rewrite_pool;
  // Overrides; applied only when given on the command line.
  std::string name, method, modify, technique, objective, masker, filter, adversary_retriever;
  int epsilon = 0;
  size_t max_edited = 0, n_evidence = 0, n_samples = 0, k_mask = 0, n_keep = 0, frequent_tokens = 0;
  double copy_rate = 0.0, data_fraction = 0.0;
  uint32_t adversary_hash_dim = 0;
  uint64_t adversary_seed = 0, attack_seed = 0;
};

ExperimentConfig AttackConfigFrom(const AttackArgs& a, const CLI::App& cmd) {
  ExperimentConfig c = a.config.empty() ? ExperimentConfig{} : LoadExperimentConfig(a.config);
  auto given = [&](const char* flag) { return cmd.get_option(flag)->count() > 0; };
  if (given("--name")) c.name = a.name;
  if (given("--method")) c.method = ParseAttackMethod(a.method);
  if (given("--modify")) {
    c.modification = ParseModificationKind(a.modify);
  } else if (a.config.empty() && TargetOf(c.method) == AttackTarget::kPlanting) {
    c.modification = Modification::Kind::kAdd;
  }
  if (given("--allow-add-for-comparison")) c.allow_add_for_comparison = true;
  if (given("--technique")) c.technique = ParsePerturbationTechnique(a.technique);
  if (given("--objective")) c.objective = ParseAttackObjective(a.objective);
  if (given("--epsilon")) c.epsilon = a.epsilon;
  if (given("--max-edited")) c.max_edited = a.max_edited;
  if (given("--masker")) c.masker = ParseMaskerKind(a.masker);
  if (given("--filter")) c.filter = ParseFilterDirection(a.filter);
  if (given("--n-evidence")) c.n_evidence = a.n_evidence;
  if (given("--n-samples")) c.n_samples = a.n_samples;
  if (given("--k-mask")) c.k_mask = a.k_mask;
  if (given("--n-keep")) c.n_keep = a.n_keep;
  if (given("--copy-rate")) c.generator_copy_rate = a.copy_rate;
  if (given("--frequent-tokens")) c.frequent_tokens = a.frequent_tokens;
  if (given("--adversary-retriever")) c.adversary_retriever = ParseRetrieverKind(a.adversary_retriever);
  if (given("--data-fraction")) c.adversary_data_fraction = a.data_fraction;
  if (given("--adversary-hash-dim")) c.adversary_hash_dim = a.adversary_hash_dim;
  if (given("--adversary-seed")) c.adversary_seed = a.adversary_seed;
  if (given("--attack-seed")) c.attack_seed = a.attack_seed;
  ValidateExperimentConfig(c);
  return c;
}

void RunAttack(const AttackArgs& a, const CLI::App& cmd) {
  const ExperimentConfig config = AttackConfigFrom(a, cmd);
  SyntheticCorpus corpus;
  corpus.repo = LoadRepository(Join(a.corpus, kRepoFile));
  const ClaimSet claims = LoadClaims(a.claims.empty() ? Join(a.corpus, kEvalClaimsFile) : a.claims);
  if (auto lexicon = LoadIfPresent(Join(a.corpus, kLexiconFile), &EmbeddingLexicon::Load)) corpus.lexicon = *lexicon;
  std::optional<CandidatePool> token_pool = LoadIfPresent(Join(a.corpus, kTokenPoolFile), &CandidatePool::Load);
  std::optional<std::vector<Counterclaim>> counterclaims =
      LoadIfPresent(Join(a.corpus, kCounterclaimFile), &LoadCounterclaims);
  std::optional<CandidatePool> rewrite_pool;
  if (!a.rewrite_pool.empty()) rewrite_pool = CandidatePool::Load(a.rewrite_pool);

  RetrieverOptions options;
  options.kind = config.adversary_retriever;
  const Index index = a.adversary_index.empty() ? Index::Build(corpus.repo, options) : Index::Load(a.adversary_index);
  std::optional<Verifier> adversary;
  if (!a.adversary_verifier.empty()) {
    adversary = Verifier::Load(a.adversary_verifier);
  } else if (config.method != AttackMethod::kNone) {
    corpus.train = LoadClaims(Join(a.corpus, kTrainClaimsFile));
    adversary = TrainAdversaryVerifier(config, corpus, index);
  }

  AttackInputs inputs;
  inputs.claims = &claims;
  inputs.repo = &corpus.repo;
  inputs.adversary_index = &index;
  inputs.adversary_verifier = adversary ? &*adversary : nullptr;
  inputs.lexicon = &corpus.lexicon;
  inputs.token_pool = token_pool ? &*token_pool : nullptr;
  inputs.rewrite_pool = rewrite_pool ? &*rewrite_pool : nullptr;
  inputs.counterclaims = counterclaims ? &*counterclaims : nullptr;
  const AttackResult result = ExecuteAttack(config, inputs);

  MakeDir(a.out);
  SaveRepository(result.repo, Join(a.out, kRepoFile));
  SaveAttackMarks(result.repo.attack_marks(), Join(a.out, kMarksFile));
  SaveAttackRecords(result.records, Join(a.out, kRecordsFile));
  WriteText(Join(a.out, "experiment.json"), ExperimentConfigJson(config));
  WriteEcho(a.out, cmd, Json::parse(ExperimentConfigJson(config)));
  size_t attacked = 0, attempted = 0, successful = 0;
  for (const AttackRecord& r : result.records) {
    attacked += r.attacked;
    for (const PerturbedEvidence& e : r.edits) {
      ++attempted;
      successful += !e.failed;
    }
  }
  Log(cmd.get_name(), "done",
      {{"method", std::string(AttackMethodName(config.method))},
       {"target_claims", std::to_string(result.records.size())},
       {"attacked_claims", std::to_string(attacked)},
       {"attempted_sentences", std::to_string(attempted)},
       {"successful_sentences", std::to_string(successful)}});
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string out;
  std::string corpus;
  std::string claims;
  std::string verifier;
  std::string attack;
  std::string retriever = "tfidf";
  double threshold = 0.5;
  size_t top_k = 5;
  std::string scope = "per-claim";
};

void RunEval(const EvalArgs& a, const CLI::App& cmd) {
  PipelineConfig pc;
  pc.retriever.kind = ParseRetrieverKind(a.retriever);
  if (!(a.threshold > 0.0 && a.threshold < 1.0)) throw ConfigError("--threshold must be in (0, 1)");
  if (a.top_k < 1) throw ConfigError("--top-k must be >= 1");
  pc.rule.threshold = a.threshold;
  pc.k = a.top_k;
  const EvaluationScope scope = ParseEvaluationScope(a.scope);

  const Repository clean = LoadRepository(Join(a.corpus, kRepoFile));
  ClaimSet claims = LoadClaims(a.claims.empty() ? Join(a.corpus, kEvalClaimsFile) : a.claims);
  const Verifier verifier = Verifier::Load(a.verifier);
  const Pipeline pipeline(verifier, pc);

  Repository attacked = clean;
  std::vector<AttackRecord> records;
  if (!a.attack.empty()) {
    attacked = LoadRepository(Join(a.attack, kRepoFile)).WithAttackMarks(LoadAttackMarks(Join(a.attack, kMarksFile)));
    records = LoadAttackRecords(Join(a.attack, kRecordsFile));
    std::set<std::string> ids;
    for (const AttackRecord& r : records) ids.insert(r.claim_id);
    claims = claims.Filter([&](const Claim& c) { return ids.count(c.id) > 0; });
  }
  const std::vector<AttackOutcome> outcomes = BuildOutcomes(pipeline, claims, clean, attacked, records, scope);
  std::optional<MetricsRecord> attacked_metrics;
  if (!a.attack.empty()) attacked_metrics = AttackedMetrics(outcomes);

  MakeDir(a.out);
  WriteText(Join(a.out, "eval.json"), EvaluationJson(CleanMetrics(outcomes), attacked_metrics));
  std::ostringstream predictions;
  for (const AttackOutcome& o : outcomes) {
    Json p;
    p["claim_id"] = o.claim_id;
    p["gold"] = LabelName(o.gold);
    p["clean"] = LabelName(o.clean_label);
    if (attacked_metrics) {
      p["attacked"] = LabelName(o.attacked_label);
      p["attack_in_top"] = std::count(o.attacked_top_marked.begin(), o.attacked_top_marked.end(), true) > 0;
    }
    predictions << p.dump() << '\n';
  }
  WriteText(Join(a.out, "predictions.jsonl"), predictions.str());
  WriteEcho(a.out, cmd);
  Log(cmd.get_name(), "done", {{"claims", std::to_string(claims.size())}, {"scope", a.scope}});
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string out;
  std::vector<std::string> groups;
  size_t jobs = 1;
  uint64_t corpus_seed = 7;
  bool list = false;
};

std::string FileStem(const std::string& name) {
  std::string s = name;
  for (char& ch : s) {
    if (ch == '/' || ch == ' ') ch = '-';
  }
  return s;
}

void RunSweepCommand(const SweepArgs& a, const CLI::App& cmd) {
  if (a.jobs < 1) throw ConfigError("--jobs must be >= 1");
  const std::vector<std::string> known = SweepGroups();
  for (const std::string& g : a.groups) {
    if (std::find(known.begin(), known.end(), g) == known.end()) {
      std::string msg = "unknown sweep group '" + g + "' (expected one of:";
      for (const std::string& k : known) msg += " " + k;
      throw ConfigError(msg + ")");
    }
  }
  std::vector<ExperimentConfig> grid = SweepGrid(a.groups);
  for (ExperimentConfig& c : grid) {
    c.corpus_seed = a.corpus_seed;
    ValidateExperimentConfig(c);
  }
  if (a.list) {
    for (const ExperimentConfig& c : grid) std::cout << c.name << '\n';
    return;
  }
  MakeDir(a.out);
  MakeDir(Join(a.out, "runs"));
  const auto start = std::chrono::steady_clock::now();
  const ExperimentData data = PrepareExperimentData(grid.empty() ? ExperimentConfig{} : grid.front());
  const std::vector<ExperimentReport> reports = RunSweep(grid, data, a.jobs);
  for (size_t i = 0; i < reports.size(); ++i) {
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "%03zu-", i);
    WriteText((fs::path(a.out) / "runs" / (prefix + FileStem(reports[i].config.name) + ".json")).string(),
              ReportJson(reports[i]));
  }
  const std::string summary = SweepSummaryJson(reports);
  WriteText(Join(a.out, "summary.json"), summary);
  WriteText(Join(a.out, "table.txt"), RenderTable(summary, "summary.json"));
  WriteEcho(a.out, cmd);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char elapsed[32];
  std::snprintf(elapsed, sizeof(elapsed), "%.1f", seconds);
  Log(cmd.get_name(), "done", {{"runs", std::to_string(reports.size())}, {"jobs", std::to_string(a.jobs)}, {"seconds", elapsed}});
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::string in;
  std::string out;
};

void RunReport(const ReportArgs& a, const CLI::App& cmd) {
  const std::string table = RenderTable(ReadText(a.in), a.in);
  std::cout << table;
  if (!a.out.empty()) {
    MakeDir(a.out);
    WriteText(Join(a.out, "table.txt"), table);
    WriteEcho(a.out, cmd);
  }
}

// ---------------------------------------------------------------------------
// export-distant-supervision

struct ExportArgs {
  std::string out;
  std::string corpus;
  std::string claims;
  std::string masker = "retrieval";
  std::string verifier;
  std::string index;
  size_t k = 16;
};

void RunExport(const ExportArgs& a, const CLI::App& cmd) {
  const MaskerKind masker = ParseMaskerKind(a.masker);
  if (masker == MaskerKind::kVerifierImportance && a.verifier.empty()) {
    throw ConfigError("--masker verifier needs --verifier");
  }
  if (a.k < 1) throw ConfigError("--k must be >= 1");
  const Repository repo = LoadRepository(Join(a.corpus, kRepoFile));
  const ClaimSet claims = LoadClaims(a.claims.empty() ? Join(a.corpus, kTrainClaimsFile) : a.claims);
  std::optional<Verifier> verifier;
  if (!a.verifier.empty()) verifier = Verifier::Load(a.verifier);
  const Index index = a.index.empty() ? Index::Build(repo) : Index::Load(a.index);
  const std::vector<DistantSupervisionRecord> records =
      ExportDistantSupervision(claims, repo, masker, verifier ? &*verifier : nullptr, &index, a.k);
  MakeDir(a.out);
  std::ostringstream s;
  WriteDistantSupervision(records, s);
  WriteText(Join(a.out, "distant_supervision.jsonl"), s.str());
  WriteEcho(a.out, cmd);
  Log(cmd.get_name(), "done", {{"records", std::to_string(records.size())}});
}

int Main(int argc, char** argv) {
  const std::string root = OutputRoot();
  const std::string default_corpus = (fs::path(root) / "corpus").string();
  auto out_default = [&](const char* name) { return (fs::path(root) / name).string(); };

  CLI::App app{"fcattack: adversarial attacks on retrieval-based fact checking"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  GenCorpusArgs gen;
  gen.out = default_corpus;
  CLI::App* gen_cmd = app.add_subcommand("gen-corpus", "Generate the synthetic corpus or ingest existing files");
  gen_cmd->add_option("--out", gen.out, "Corpus directory");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--sup", gen.synth.sup_claims, "SUP claims");
  gen_cmd->add_option("--ref", gen.synth.ref_claims, "REF claims");
  gen_cmd->add_option("--nei", gen.synth.nei_claims, "NEI claims");
  gen_cmd->add_option("--entities", gen.synth.entities, "People (0 derives it from the claim counts)");
  gen_cmd->add_option("--facts-per-entity", gen.synth.facts_per_entity, "Relations stated per person");
  gen_cmd->add_option("--eval-fraction", gen.synth.eval_fraction, "Share of claims held out for evaluation");
  gen_cmd->add_option("--docs", gen.docs, "Ingest: document JSON lines");
  gen_cmd->add_option("--claims", gen.claims, "Ingest: evaluation claims");
  gen_cmd->add_option("--train-claims", gen.train_claims, "Ingest: training claims");
  gen_cmd->add_option("--counterclaims", gen.counterclaims, "Ingest: counterclaims");
  gen_cmd->add_option("--lexicon", gen.lexicon, "Ingest: embedding lexicon");
  gen_cmd->add_option("--token-pool", gen.token_pool, "Ingest: token candidate pool");
  gen_cmd->add_option("--paraphrases", gen.paraphrases, "Ingest: claim paraphrase pool");

  IndexArgs idx;
  idx.out = out_default("index");
  idx.corpus = default_corpus;
  CLI::App* index_cmd = app.add_subcommand("index", "Build a retrieval index");
  index_cmd->add_option("--out", idx.out, "Output directory");
  index_cmd->add_option("--corpus", idx.corpus, "Corpus directory");
  index_cmd->add_option("--repo", idx.repo, "Repository file (overrides --corpus)");
  index_cmd->add_option("--retriever", idx.retriever, "tfidf|bm25");

  TrainArgs train;
  train.out = out_default("train");
  train.corpus = default_corpus;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a verifier");
  train_cmd->add_option("--out", train.out, "Output directory");
  train_cmd->add_option("--corpus", train.corpus, "Corpus directory");
  train_cmd->add_option("--repo", train.repo, "Repository file (overrides --corpus)");
  train_cmd->add_option("--claims", train.claims, "Training claims (overrides --corpus)");
  train_cmd->add_option("--index", train.index, "Prebuilt index for NEI negatives");
  train_cmd->add_option("--retriever", train.retriever, "tfidf|bm25 when no --index is given");
  train_cmd->add_option("--epochs", train.training.epochs, "SGD epochs");
  train_cmd->add_option("--learning-rate", train.training.learning_rate, "Initial learning rate");
  train_cmd->add_option("--seed", train.training.seed, "Shuffle seed");
  train_cmd->add_option("--hash-dim", train.training.hash_dim, "Hashed feature dimension");
  train_cmd->add_option("--nei-negatives", train.training.nei_negatives, "Retrieved sentences per NEI claim");
  train_cmd->add_option("--hard-negatives", train.training.hard_negatives, "Non-gold NEI pairs per SUP/REF claim");
  train_cmd->add_option("--data-fraction", train.data_fraction, "Share of training claims used");
  train_cmd->add_option("--subsample-seed", train.subsample_seed, "Seed for --data-fraction");

  AttackArgs atk;
  atk.out = out_default("attack");
  atk.corpus = default_corpus;
  CLI::App* attack_cmd = app.add_subcommand("attack", "Run one attack against the repository");
  attack_cmd->add_option("--out", atk.out, "Output directory");
  attack_cmd->add_option("--corpus", atk.corpus, "Corpus directory");
  attack_cmd->add_option("--claims", atk.claims, "Claims to attack (default: the corpus evaluation claims)");
  attack_cmd->add_option("--config", atk.config, "Experiment config JSON; flags override it");
  attack_cmd->add_option("--adversary-index", atk.adversary_index, "Prebuilt adversary index");
  attack_cmd->add_option("--adversary-verifier", atk.adversary_verifier, "Pretrained adversary verifier");
  attack_cmd->add_option("--rewrite-pool", atk.rewrite_pool, "Candidate pool for the rewrite and generation stages");
  attack_cmd->option_defaults()->always_capture_default(false);
  attack_cmd->add_option("--name", atk.name, "Run name");
  attack_cmd->add_option("--method", atk.method,
                         "none|lexical-variation|contextualized-replace|imperceptible|omitting-paraphrase|"
                         "omitting-generate|claim-aligned-rewrite|supporting-generation|correct-claims");
  attack_cmd->add_option("--modify", atk.modify, "add|replace");
  attack_cmd->add_flag("--allow-add-for-comparison", "Permit camouflage under add for comparison runs");
  attack_cmd->add_option("--technique", atk.technique, "homoglyph|reorder|delete|invisible");
  attack_cmd->add_option("--objective", atk.objective, "verifier|retrieval");
  attack_cmd->add_option("--epsilon", atk.epsilon, "Perturbation budget per sentence");
  attack_cmd->add_option("--max-edited", atk.max_edited, "Sentences edited per claim");
  attack_cmd->add_option("--masker", atk.masker, "verifier|retrieval");
  attack_cmd->add_option("--filter", atk.filter, "none|stance|retrieval");
  attack_cmd->add_option("--n-evidence", atk.n_evidence, "Planted sentences per claim");
  attack_cmd->add_option("--n-samples", atk.n_samples, "Generator samples per claim");
  attack_cmd->add_option("--k-mask", atk.k_mask, "Tokens masked per sentence");
  attack_cmd->add_option("--n-keep", atk.n_keep, "Generated sentences kept per claim");
  attack_cmd->add_option("--copy-rate", atk.copy_rate, "Reference generator copy rate");
  attack_cmd->add_option("--frequent-tokens", atk.frequent_tokens, "Corrector vocabulary size");
  attack_cmd->add_option("--adversary-retriever", atk.adversary_retriever, "tfidf|bm25");
  attack_cmd->add_option("--data-fraction", atk.data_fraction, "Share of training claims the adversary sees");
  attack_cmd->add_option("--adversary-hash-dim", atk.adversary_hash_dim, "Adversary verifier dimension");
  attack_cmd->add_option("--adversary-seed", atk.adversary_seed, "Adversary training seed");
  attack_cmd->add_option("--attack-seed", atk.attack_seed, "Attack seed");

  EvalArgs ev;
  ev.out = out_default("eval");
  ev.corpus = default_corpus;
  ev.verifier = (fs::path(root) / "train" / kVerifierFile).string();
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate the defender, optionally against an attack");
  eval_cmd->add_option("--out", ev.out, "Output directory");
  eval_cmd->add_option("--corpus", ev.corpus, "Corpus directory");
  eval_cmd->add_option("--claims", ev.claims, "Claims to verify (default: the corpus evaluation claims)");
  eval_cmd->add_option("--verifier", ev.verifier, "Defender verifier");
  eval_cmd->add_option("--attack", ev.attack, "Attack output directory");
  eval_cmd->add_option("--retriever", ev.retriever, "tfidf|bm25");
  eval_cmd->add_option("--threshold", ev.threshold, "Aggregation threshold");
  eval_cmd->add_option("--top-k", ev.top_k, "Retrieved sentences per claim");
  eval_cmd->add_option("--scope", ev.scope, "per-claim|joint");

  SweepArgs sw;
  sw.out = out_default("sweep");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run the experiment grid on the synthetic corpus");
  sweep_cmd->add_option("--out", sw.out, "Output directory");
  sweep_cmd->add_option("--groups", sw.groups, "Grid groups (default: all)")->delimiter(',');
  sweep_cmd->add_option("--jobs", sw.jobs, "Concurrent runs");
  sweep_cmd->add_option("--corpus-seed", sw.corpus_seed, "Synthetic corpus seed");
  sweep_cmd->add_flag("--list", sw.list, "Print the grid and exit");

  ReportArgs rep;
  CLI::App* report_cmd = app.add_subcommand("report", "Render a report, sweep summary or evaluation as a table");
  report_cmd->add_option("--in", rep.in, "JSON document")->required();
  report_cmd->add_option("--out", rep.out, "Also write table.txt here");

  ExportArgs ex;
  ex.out = out_default("distant-supervision");
  ex.corpus = default_corpus;
  CLI::App* export_cmd =
      app.add_subcommand("export-distant-supervision", "Write masked-evidence reconstruction records");
  export_cmd->add_option("--out", ex.out, "Output directory");
  export_cmd->add_option("--corpus", ex.corpus, "Corpus directory");
  export_cmd->add_option("--claims", ex.claims, "Claims (default: the corpus training claims)");
  export_cmd->add_option("--masker", ex.masker, "verifier|retrieval");
  export_cmd->add_option("--verifier", ex.verifier, "Verifier for the verifier masker");
  export_cmd->add_option("--index", ex.index, "Prebuilt index");
  export_cmd->add_option("--k", ex.k, "Tokens masked per sentence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (gen_cmd->parsed()) RunGenCorpus(gen, *gen_cmd);
    if (index_cmd->parsed()) RunIndex(idx, *index_cmd);
    if (train_cmd->parsed()) RunTrain(train, *train_cmd);
    if (attack_cmd->parsed()) RunAttack(atk, *attack_cmd);
    if (eval_cmd->parsed()) RunEval(ev, *eval_cmd);
    if (sweep_cmd->parsed()) RunSweepCommand(sw, *sweep_cmd);
    if (report_cmd->parsed()) RunReport(rep, *report_cmd);
    if (export_cmd->parsed()) RunExport(ex, *export_cmd);
  } catch (const ConfigError& e) {
    std::cerr << "fcattack: error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "fcattack: error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const StaleIndexError& e) {
    std::cerr << "fcattack: error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "fcattack: error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace
}  // namespace fcattack

int main(int argc, char** argv) { return fcattack::Main(argc, argv); }
