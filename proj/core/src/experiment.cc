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

#include "fcattack/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "fcattack/errors.h"
#include "fcattack/text.h"
#include "json.hpp"

namespace fcattack {

namespace {

using Json = nlohmann::ordered_json;

constexpr AttackMethod kAllMethods[] = {
    AttackMethod::kNone,           AttackMethod::kLexicalVariation,
    AttackMethod::kContextualizedReplace, AttackMethod::kImperceptible,
    AttackMethod::kOmitParaphrase, AttackMethod::kOmitGenerate,
    AttackMethod::kClaimAlignedRewrite, AttackMethod::kSupportingGeneration,
    AttackMethod::kCorrectClaims,
};

CamouflageMethod ToCamouflage(AttackMethod method) {
  switch (method) {
    case AttackMethod::kLexicalVariation:
      return CamouflageMethod::kLexicalVariation;
    case AttackMethod::kContextualizedReplace:
      return CamouflageMethod::kContextualizedReplace;
    case AttackMethod::kImperceptible:
      return CamouflageMethod::kImperceptible;
    case AttackMethod::kOmitParaphrase:
      return CamouflageMethod::kOmitParaphrase;
    case AttackMethod::kOmitGenerate:
      return CamouflageMethod::kOmitGenerate;
    default:
      throw ConfigError(std::string(AttackMethodName(method)) + " is not a camouflage attack");
  }
}

}  // namespace

std::string_view AttackMethodName(AttackMethod method) {
  switch (method) {
    case AttackMethod::kNone:
      return "none";
    case AttackMethod::kLexicalVariation:
      return "lexical-variation";
    case AttackMethod::kContextualizedReplace:
      return "contextualized-replace";
    case AttackMethod::kImperceptible:
      return "imperceptible";
    case AttackMethod::kOmitParaphrase:
      return "omitting-paraphrase";
    case AttackMethod::kOmitGenerate:
      return "omitting-generate";
    case AttackMethod::kClaimAlignedRewrite:
      return "claim-aligned-rewrite";
    case AttackMethod::kSupportingGeneration:
      return "supporting-generation";
    case AttackMethod::kCorrectClaims:
      return "correct-claims";
  }
  return "none";
}

AttackMethod ParseAttackMethod(std::string_view name) {
  for (AttackMethod m : kAllMethods) {
    if (AttackMethodName(m) == name) return m;
  }
  throw ConfigError("unknown attack method '" + std::string(name) + "'");
}

std::string_view AttackTargetName(AttackTarget target) {
  switch (target) {
    case AttackTarget::kNone:
      return "none";
    case AttackTarget::kCamouflage:
      return "camouflage";
    case AttackTarget::kPlanting:
      return "planting";
  }
  return "none";
}

std::string_view ContextClassName(ContextClass context) {
  switch (context) {
    case ContextClass::kFull:
      return "full";
    case ContextClass::kPartial:
      return "partial";
    case ContextClass::kNone:
      return "none";
  }
  return "none";
}

std::string_view ModelCapabilityName(ModelCapability capability) {
  switch (capability) {
    case ModelCapability::kNone:
      return "none";
    case ModelCapability::kRetrieval:
      return "retrieval";
    case ModelCapability::kVerification:
      return "verification";
    case ModelCapability::kRetrievalAndVerification:
      return "retrieval+verification";
  }
  return "none";
}

std::string_view KnowledgeName(Knowledge knowledge) {
  return knowledge == Knowledge::kWhiteBox ? "white-box" : "black-box";
}

AttackTarget TargetOf(AttackMethod method) {
  switch (method) {
    case AttackMethod::kNone:
      return AttackTarget::kNone;
    case AttackMethod::kClaimAlignedRewrite:
    case AttackMethod::kSupportingGeneration:
    case AttackMethod::kCorrectClaims:
      return AttackTarget::kPlanting;
    default:
      return AttackTarget::kCamouflage;
  }
}

std::vector<Label> TargetLabels(AttackMethod method) {
  switch (method) {
    case AttackMethod::kNone:
      return {Label::kSup, Label::kRef, Label::kNei};
    case AttackMethod::kClaimAlignedRewrite:
      return {Label::kRef};
    case AttackMethod::kSupportingGeneration:
      return {Label::kRef, Label::kNei};
    case AttackMethod::kCorrectClaims:
      return {Label::kSup};
    default:
      return {Label::kSup, Label::kRef};
  }
}

TaxonomyCoordinates CoordinatesOf(const ExperimentConfig& config) {
  TaxonomyCoordinates c;
  c.target = TargetOf(config.method);
  c.modification = config.modification;
  c.knowledge = config.adversary_retriever == config.defender_retriever ? Knowledge::kWhiteBox
                                                                         : Knowledge::kBlackBox;
  c.data_fraction = config.adversary_data_fraction;
  switch (config.method) {
    case AttackMethod::kNone:
      c.context = ContextClass::kFull;
      c.capability = ModelCapability::kNone;
      break;
    case AttackMethod::kLexicalVariation:
    case AttackMethod::kContextualizedReplace:
      c.context = ContextClass::kPartial;
      c.capability = ModelCapability::kRetrievalAndVerification;
      break;
    case AttackMethod::kImperceptible:
      c.context = ContextClass::kFull;
      c.capability = config.objective == AttackObjective::kVerifierLoss
                         ? ModelCapability::kRetrievalAndVerification
                         : ModelCapability::kRetrieval;
      break;
    case AttackMethod::kOmitParaphrase:
      c.context = ContextClass::kFull;
      c.capability = ModelCapability::kRetrieval;
      break;
    case AttackMethod::kOmitGenerate:
      c.context = ContextClass::kNone;
      c.capability = ModelCapability::kRetrieval;
      break;
    case AttackMethod::kClaimAlignedRewrite:
      c.context = ContextClass::kPartial;
      c.capability = config.masker == MaskerKind::kVerifierImportance ||
                             config.filter == FilterDirection::kStanceMax
                         ? ModelCapability::kRetrievalAndVerification
                         : ModelCapability::kRetrieval;
      break;
    case AttackMethod::kSupportingGeneration:
    case AttackMethod::kCorrectClaims:
      c.context = ContextClass::kNone;
      c.capability = config.filter == FilterDirection::kRetrievalMax
                         ? ModelCapability::kRetrieval
                         : ModelCapability::kVerification;
      break;
  }
  return c;
}

void ValidateExperimentConfig(const ExperimentConfig& config) {
  if (config.name.empty()) throw ConfigError("experiment name must not be empty");
  if (TargetOf(config.method) == AttackTarget::kCamouflage &&
      config.modification == Modification::Kind::kAdd && !config.allow_add_for_comparison) {
    throw ConfigError(std::string(AttackMethodName(config.method)) +
                      ": camouflage attacks hide existing evidence and work only under the "
                      "replace modification; add leaves the original evidence in place");
  }
  if (config.epsilon < 1) throw ConfigError("epsilon must be >= 1");
  if (config.max_edited < 1) throw ConfigError("max_edited must be >= 1");
  if (config.n_evidence < 1) throw ConfigError("n_evidence must be >= 1");
  if (config.n_samples < 1) throw ConfigError("n_samples must be >= 1");
  if (config.k_mask < 1) throw ConfigError("k_mask must be >= 1");
  if (config.n_keep < 1) throw ConfigError("n_keep must be >= 1");
  if (config.n_keep > config.n_samples) throw ConfigError("n_keep must not exceed n_samples");
  if (!(config.generator_copy_rate >= 0.0 && config.generator_copy_rate <= 1.0)) {
    throw ConfigError("generator_copy_rate must be in [0, 1]");
  }
  if (!(config.adversary_data_fraction > 0.0 && config.adversary_data_fraction <= 1.0)) {
    throw ConfigError("adversary_data_fraction must be in (0, 1]");
  }
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
    throw ConfigError("threshold must be in (0, 1)");
  }
  if (config.top_k < 1) throw ConfigError("top_k must be >= 1");
  if (config.defender_hash_dim < 1 || config.adversary_hash_dim < 1) {
    throw ConfigError("hash dimensions must be positive");
  }
}

std::string ExperimentConfigJson(const ExperimentConfig& c) {
  Json j;
  j["name"] = c.name;
  j["method"] = AttackMethodName(c.method);
  j["modification"] = ModificationKindName(c.modification);
  j["allow_add_for_comparison"] = c.allow_add_for_comparison;
  j["technique"] = PerturbationTechniqueName(c.technique);
  j["objective"] = AttackObjectiveName(c.objective);
  j["epsilon"] = c.epsilon;
  j["max_edited"] = c.max_edited;
  j["masker"] = MaskerKindName(c.masker);
  j["filter"] = FilterDirectionName(c.filter);
  j["n_evidence"] = c.n_evidence;
  j["n_samples"] = c.n_samples;
  j["k_mask"] = c.k_mask;
  j["n_keep"] = c.n_keep;
  j["generator_copy_rate"] = c.generator_copy_rate;
  j["frequent_tokens"] = c.frequent_tokens;
  j["defender_retriever"] = RetrieverKindName(c.defender_retriever);
  j["defender_hash_dim"] = c.defender_hash_dim;
  j["defender_seed"] = c.defender_seed;
  j["threshold"] = c.threshold;
  j["top_k"] = c.top_k;
  j["adversary_retriever"] = RetrieverKindName(c.adversary_retriever);
  j["adversary_data_fraction"] = c.adversary_data_fraction;
  j["adversary_hash_dim"] = c.adversary_hash_dim;
  j["adversary_seed"] = c.adversary_seed;
  j["corpus_seed"] = c.corpus_seed;
  j["attack_seed"] = c.attack_seed;
  j["evaluation_scope"] = EvaluationScopeName(c.scope);
  j["paraphrase_robustness"] = c.paraphrase_robustness;
  return j.dump(2) + "\n";
}

namespace {

template <typename T>
T Field(const Json& value, const std::string& key, const std::string& source) {
  try {
    return value.get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(source + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

ExperimentConfig ParseExperimentConfig(std::string_view text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(source + ": expected a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    auto str = [&] { return Field<std::string>(value, key, source); };
    auto count = [&] {
      const long long v = Field<long long>(value, key, source);
      if (v < 0) throw ConfigError(source + ": field '" + key + "' must be non-negative");
      return static_cast<size_t>(v);
    };
    auto seed = [&] { return Field<uint64_t>(value, key, source); };
    auto real = [&] { return Field<double>(value, key, source); };
    auto flag = [&] { return Field<bool>(value, key, source); };
    if (key == "name") {
      c.name = str();
    } else if (key == "method") {
      c.method = ParseAttackMethod(str());
    } else if (key == "modification") {
      c.modification = ParseModificationKind(str());
    } else if (key == "allow_add_for_comparison") {
      c.allow_add_for_comparison = flag();
    } else if (key == "technique") {
      c.technique = ParsePerturbationTechnique(str());
    } else if (key == "objective") {
      c.objective = ParseAttackObjective(str());
    } else if (key == "epsilon") {
      c.epsilon = Field<int>(value, key, source);
    } else if (key == "max_edited") {
      c.max_edited = count();
    } else if (key == "masker") {
      c.masker = ParseMaskerKind(str());
    } else if (key == "filter") {
      c.filter = ParseFilterDirection(str());
    } else if (key == "n_evidence") {
      c.n_evidence = count();
    } else if (key == "n_samples") {
      c.n_samples = count();
    } else if (key == "k_mask") {
      c.k_mask = count();
    } else if (key == "n_keep") {
      c.n_keep = count();
    } else if (key == "generator_copy_rate") {
      c.generator_copy_rate = real();
    } else if (key == "frequent_tokens") {
      c.frequent_tokens = count();
    } else if (key == "defender_retriever") {
      c.defender_retriever = ParseRetrieverKind(str());
    } else if (key == "defender_hash_dim") {
      c.defender_hash_dim = static_cast<uint32_t>(count());
    } else if (key == "defender_seed") {
      c.defender_seed = seed();
    } else if (key == "threshold") {
      c.threshold = real();
    } else if (key == "top_k") {
      c.top_k = count();
    } else if (key == "adversary_retriever") {
      c.adversary_retriever = ParseRetrieverKind(str());
    } else if (key == "adversary_data_fraction") {
      c.adversary_data_fraction = real();
    } else if (key == "adversary_hash_dim") {
      c.adversary_hash_dim = static_cast<uint32_t>(count());
    } else if (key == "adversary_seed") {
      c.adversary_seed = seed();
    } else if (key == "corpus_seed") {
      c.corpus_seed = seed();
    } else if (key == "attack_seed") {
      c.attack_seed = seed();
    } else if (key == "evaluation_scope") {
      c.scope = ParseEvaluationScope(str());
    } else if (key == "paraphrase_robustness") {
      c.paraphrase_robustness = flag();
    } else {
      throw ConfigError(source + ": unknown field '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(buffer.str(), path);
}

ClaimSet TargetClaims(const ExperimentConfig& config, const ClaimSet& claims) {
  const std::vector<Label> labels = TargetLabels(config.method);
  return claims.Filter([&](const Claim& c) {
    return std::find(labels.begin(), labels.end(), c.label) != labels.end();
  });
}

AttackResult ExecuteAttack(const ExperimentConfig& config, const AttackInputs& inputs) {
  ValidateExperimentConfig(config);
  if (inputs.claims == nullptr || inputs.repo == nullptr) {
    throw ConfigError("an attack needs claims and a repository");
  }
  const ClaimSet targets = TargetClaims(config, *inputs.claims);
  if (config.method == AttackMethod::kNone) return {*inputs.repo, {}};
  if (inputs.adversary_index == nullptr) throw ConfigError("an attack needs the adversary's index");
  const AttackTarget target = TargetOf(config.method);

  if (target == AttackTarget::kCamouflage) {
    CamouflageConfig cc;
    cc.method = ToCamouflage(config.method);
    cc.technique = config.technique;
    cc.objective = config.objective;
    cc.epsilon = config.epsilon;
    cc.max_edited = config.max_edited;
    cc.modification = config.modification;
    cc.allow_add_for_comparison = config.allow_add_for_comparison;
    cc.seed = config.attack_seed;
    std::optional<PoolCandidateGenerator> generator;
    if (inputs.token_pool != nullptr) generator.emplace(*inputs.token_pool);
    CamouflageResources resources;
    resources.verifier = inputs.adversary_verifier;
    resources.lexicon = inputs.lexicon;
    resources.generator = generator ? &*generator : nullptr;
    resources.rewrite_pool = inputs.rewrite_pool;
    return RunCamouflage(targets, *inputs.repo, *inputs.adversary_index, cc, resources);
  }

  if (inputs.adversary_verifier == nullptr) {
    throw ConfigError(std::string(AttackMethodName(config.method)) +
                      " needs the adversary's verifier");
  }
  if (config.method == AttackMethod::kClaimAlignedRewrite) {
    RewriteConfig rc;
    rc.masker = config.masker;
    rc.filter = config.filter;
    rc.n_evidence = config.n_evidence;
    rc.n_samples = config.n_samples;
    rc.k_mask = config.k_mask;
    rc.modification = config.modification;
    rc.seed = config.attack_seed;
    if (inputs.rewrite_pool != nullptr) {
      return ClaimAlignedRewrite(targets, *inputs.repo, *inputs.adversary_index,
                                 *inputs.adversary_verifier, PoolCorrector(*inputs.rewrite_pool),
                                 rc);
    }
    const ReferenceCorrector corrector(FrequentTokens(*inputs.adversary_index, config.frequent_tokens));
    return ClaimAlignedRewrite(targets, *inputs.repo, *inputs.adversary_index,
                               *inputs.adversary_verifier, corrector, rc);
  }

  GenerationConfig gc;
  gc.n_samples = config.n_samples;
  gc.n_keep = config.n_keep;
  gc.filter = config.filter;
  gc.seed = config.attack_seed;
  const ReferenceGenerator reference(config.generator_copy_rate);
  std::optional<PoolGenerator> pooled;
  if (inputs.rewrite_pool != nullptr) pooled.emplace(*inputs.rewrite_pool);
  const Generator& generator = pooled ? static_cast<const Generator&>(*pooled) : reference;
  if (config.method == AttackMethod::kSupportingGeneration) {
    return SupportingGeneration(targets, *inputs.repo, generator, *inputs.adversary_verifier,
                                inputs.adversary_index, gc);
  }
  if (inputs.counterclaims == nullptr) throw ConfigError("correct-claims needs counterclaims");
  return AttackCorrectClaims(targets, *inputs.counterclaims, *inputs.repo, generator,
                             *inputs.adversary_verifier, inputs.adversary_index, gc);
}

ExperimentData PrepareExperimentData(const ExperimentConfig& config, const SynthConfig& synth) {
  ExperimentData data;
  data.synth = synth;
  data.corpus_seed = config.corpus_seed;
  data.defender_retriever = config.defender_retriever;
  data.defender_hash_dim = config.defender_hash_dim;
  data.defender_seed = config.defender_seed;
  data.corpus = GenerateSyntheticCorpus(synth, config.corpus_seed);
  RetrieverOptions options;
  options.kind = config.defender_retriever;
  const Index index = Index::Build(data.corpus.repo, options);
  TrainingConfig training;
  training.seed = config.defender_seed;
  training.hash_dim = config.defender_hash_dim;
  data.defender = TrainVerifier(data.corpus.train, data.corpus.repo, index, training);
  return data;
}

Verifier TrainAdversaryVerifier(const ExperimentConfig& config, const SyntheticCorpus& corpus,
                                const Index& adversary_index) {
  const ClaimSet claims =
      config.adversary_data_fraction < 1.0
          ? SubsampleClaims(corpus.train, config.adversary_data_fraction,
                            HashCombine(config.adversary_seed, 0xda7a))
          : corpus.train;
  TrainingConfig training;
  training.seed = config.adversary_seed;
  training.hash_dim = config.adversary_hash_dim;
  return TrainVerifier(claims, corpus.repo, adversary_index, training);
}

namespace {

void AddRow(std::vector<ReferenceValue>& out, const std::string& source,
            std::initializer_list<std::pair<const char*, double>> values) {
  for (const auto& [field, value] : values) out.push_back({source, field, value});
}

}  // namespace

std::vector<ReferenceValue> ReferenceValues(const ExperimentConfig& c) {
  std::vector<ReferenceValue> out;
  const bool replace = c.modification == Modification::Kind::kReplace;
  const bool white_box = c.adversary_retriever == c.defender_retriever;
  const std::string main = "main-results";
  switch (c.method) {
    case AttackMethod::kNone:
      AddRow(out, main, {{"SUP", 89.0}, {"REF", 71.2}, {"NEI", 72.4}});
      break;
    case AttackMethod::kLexicalVariation:
      AddRow(out, main, {{"SUP", 68.9}, {"REF", 65.4}, {"attack_recall", 42.1}, {"to_nei", 73.6}});
      break;
    case AttackMethod::kContextualizedReplace:
      AddRow(out, main, {{"SUP", 50.7}, {"REF", 59.7}, {"attack_recall", 30.3}, {"to_nei", 69.3}});
      AddRow(out, "modification-" + std::string(ModificationKindName(c.modification)),
             replace ? std::initializer_list<std::pair<const char*, double>>{{"SUP", 50.7},
                                                                             {"REF", 59.8}}
                     : std::initializer_list<std::pair<const char*, double>>{{"SUP", 88.8},
                                                                             {"REF", 70.3}});
      AddRow(out, white_box ? "retriever-white-box" : "retriever-other-architecture",
             white_box ? std::initializer_list<std::pair<const char*, double>>{{"SUP", 50.7},
                                                                               {"REF", 60.1}}
                       : std::initializer_list<std::pair<const char*, double>>{{"SUP", 53.1},
                                                                               {"REF", 60.9}});
      break;
    case AttackMethod::kImperceptible:
      if (c.objective == AttackObjective::kRetrievalScore) {
        if (c.technique == PerturbationTechnique::kHomoglyph && c.epsilon == 5) {
          AddRow(out, main,
                 {{"SUP", 62.3}, {"REF", 60.5}, {"attack_recall", 31.5}, {"to_nei", 88.9}});
        } else if (c.technique == PerturbationTechnique::kHomoglyph && c.epsilon == 12) {
          AddRow(out, main,
                 {{"SUP", 25.9}, {"REF", 42.6}, {"attack_recall", 16.5}, {"to_nei", 90.1}});
        }
        break;
      }
      if (c.technique == PerturbationTechnique::kHomoglyph) {
        AddRow(out, main, {{"SUP", 39.6}, {"REF", 50.3}, {"attack_recall", 55.2}, {"to_nei", 83.6}});
        AddRow(out, "modification-" + std::string(ModificationKindName(c.modification)),
               replace ? std::initializer_list<std::pair<const char*, double>>{{"SUP", 39.7},
                                                                               {"REF", 50.3}}
                       : std::initializer_list<std::pair<const char*, double>>{{"SUP", 88.3},
                                                                               {"REF", 70.6}});
        AddRow(out, white_box ? "retriever-white-box" : "retriever-other-architecture",
               white_box ? std::initializer_list<std::pair<const char*, double>>{{"SUP", 39.6},
                                                                                 {"REF", 50.3}}
                         : std::initializer_list<std::pair<const char*, double>>{{"SUP", 43.1},
                                                                                 {"REF", 50.9}});
      } else if (c.technique == PerturbationTechnique::kReorder) {
        AddRow(out, main, {{"SUP", 37.8}, {"REF", 49.5}, {"attack_recall", 55.1}, {"to_nei", 81.8}});
      } else if (c.technique == PerturbationTechnique::kDelete) {
        AddRow(out, main, {{"SUP", 38.9}, {"REF", 49.7}, {"attack_recall", 60.5}, {"to_nei", 79.4}});
      }
      break;
    case AttackMethod::kOmitParaphrase:
      AddRow(out, main, {{"SUP", 51.0}, {"REF", 54.3}, {"attack_recall", 54.4}, {"to_nei", 83.8}});
      AddRow(out, "modification-" + std::string(ModificationKindName(c.modification)),
             replace ? std::initializer_list<std::pair<const char*, double>>{{"SUP", 51.0},
                                                                             {"REF", 54.3}}
                     : std::initializer_list<std::pair<const char*, double>>{{"SUP", 88.8},
                                                                             {"REF", 71.0}});
      if (white_box) AddRow(out, "retriever-white-box", {{"SUP", 55.5}, {"REF", 56.1}});
      break;
    case AttackMethod::kOmitGenerate:
      AddRow(out, main, {{"SUP", 29.9}, {"REF", 46.8}, {"attack_recall", 30.9}, {"to_nei", 87.9}});
      break;
    case AttackMethod::kClaimAlignedRewrite:
      if (c.masker == MaskerKind::kVerifierImportance) {
        if (c.filter == FilterDirection::kStanceMax) {
          AddRow(out, main, {{"REF", 38.4}, {"attack_recall", 94.4}, {"to_nei", 1.8}});
        } else if (c.filter == FilterDirection::kNone) {
          AddRow(out, main, {{"REF", 51.2}, {"attack_recall", 95.2}, {"to_nei", 4.4}});
          AddRow(out, "modification-" + std::string(ModificationKindName(c.modification)),
                 {{"REF", replace ? 49.2 : 51.2}});
        }
      } else if (c.filter == FilterDirection::kRetrievalMax) {
        AddRow(out, main, {{"REF", 43.7}, {"attack_recall", 99.1}, {"to_nei", 1.8}});
      } else if (c.filter == FilterDirection::kNone) {
        AddRow(out, main, {{"REF", 53.8}, {"attack_recall", 86.4}, {"to_nei", 4.9}});
      }
      break;
    case AttackMethod::kSupportingGeneration:
      if (c.filter == FilterDirection::kStanceMax) {
        AddRow(out, main, {{"REF", 42.0}, {"NEI", 32.2}, {"attack_recall", 85.7}, {"to_nei", 3.8}});
      } else if (c.filter == FilterDirection::kNone) {
        AddRow(out, main, {{"REF", 61.2}, {"NEI", 60.5}, {"attack_recall", 70.1}, {"to_nei", 11.4}});
      }
      break;
    case AttackMethod::kCorrectClaims:
      break;
  }
  if (c.paraphrase_robustness) AddRow(out, "paraphrase-survival", {{"survival", 70.0}});
  return out;
}

namespace {

void CheckData(const ExperimentConfig& config, const ExperimentData& data) {
  if (config.corpus_seed != data.corpus_seed || config.defender_retriever != data.defender_retriever ||
      config.defender_hash_dim != data.defender_hash_dim ||
      config.defender_seed != data.defender_seed) {
    throw ConfigError(config.name + ": corpus or defender settings differ from the prepared data");
  }
}

// Text of an attack sentence as the outcome's claim saw it.
std::string AttackText(const AttackOutcome& o, const AttackRecord& record, const SentenceRef& ref,
                       const Repository& joint) {
  for (size_t k = 0; k < o.attack_refs.size() && k < record.modifications.size(); ++k) {
    if (o.attack_refs[k] == ref) return record.modifications[k].new_text;
  }
  return joint.SentenceText(ref);
}

bool PlantingSucceeded(AttackMethod method, const AttackOutcome& o) {
  if (method == AttackMethod::kCorrectClaims) return o.attacked_label == Label::kRef;
  return o.attacked_label == Label::kSup;
}

}  // namespace

ExperimentReport RunExperiment(const ExperimentConfig& config, const ExperimentData& data) {
  ValidateExperimentConfig(config);
  CheckData(config, data);
  const SyntheticCorpus& corpus = data.corpus;

  RetrieverOptions adversary_options;
  adversary_options.kind = config.adversary_retriever;
  const Index adversary_index = Index::Build(corpus.repo, adversary_options);
  std::optional<Verifier> adversary;
  if (config.method != AttackMethod::kNone) {
    adversary.emplace(TrainAdversaryVerifier(config, corpus, adversary_index));
  }

  AttackInputs inputs;
  inputs.claims = &corpus.eval;
  inputs.repo = &corpus.repo;
  inputs.adversary_index = &adversary_index;
  inputs.adversary_verifier = adversary ? &*adversary : nullptr;
  inputs.lexicon = &corpus.lexicon;
  inputs.token_pool = &corpus.token_pool;
  inputs.counterclaims = &corpus.counterclaims;
  const AttackResult result = ExecuteAttack(config, inputs);

  PipelineConfig pipeline_config;
  pipeline_config.retriever.kind = config.defender_retriever;
  pipeline_config.rule.threshold = config.threshold;
  pipeline_config.k = config.top_k;
  const Pipeline pipeline(data.defender, pipeline_config);

  ExperimentReport report;
  report.config = config;
  report.coordinates = CoordinatesOf(config);
  const ClaimSet targets = TargetClaims(config, corpus.eval);
  report.target_claims = targets.size();
  for (const AttackRecord& record : result.records) {
    for (const PerturbedEvidence& e : record.edits) {
      ++report.attempted_sentences;
      if (!e.failed) ++report.successful_sentences;
    }
  }
  const std::vector<AttackOutcome> outcomes =
      BuildOutcomes(pipeline, targets, corpus.repo, result.repo, result.records, config.scope);
  report.clean = CleanMetrics(outcomes);
  report.attacked = AttackedMetrics(outcomes);

  if (TargetOf(config.method) == AttackTarget::kPlanting) {
    const Index attacked_index = Index::Build(result.repo, pipeline_config.retriever);
    std::map<std::string, const AttackRecord*> by_claim;
    for (const AttackRecord& r : result.records) by_claim[r.claim_id] = &r;
    std::vector<TextPair> attack_pairs;
    for (size_t i = 0; i < outcomes.size(); ++i) {
      const AttackOutcome& o = outcomes[i];
      if (!PlantingSucceeded(config.method, o)) continue;
      for (size_t r = 0; r < o.attacked_top.size(); ++r) {
        if (!o.attacked_top_marked[r]) continue;
        attack_pairs.push_back({targets[i].text, AttackText(o, *by_claim.at(o.claim_id),
                                                            o.attacked_top[r], result.repo)});
        break;
      }
    }
    std::vector<TextPair> gold_pairs;
    for (const Claim& claim : corpus.eval) {
      if (claim.label != Label::kSup || claim.gold_evidence.empty()) continue;
      gold_pairs.push_back({claim.text, corpus.repo.SentenceText(claim.gold_evidence.front())});
    }
    report.attack_distance = DistanceHistogram(attacked_index, attack_pairs);
    report.gold_distance = DistanceHistogram(attacked_index, gold_pairs);
    report.traversal = ConfidenceTraversal(outcomes);
  }
  if (config.paraphrase_robustness) {
    report.paraphrase = ParaphraseRobustness(targets, corpus.claim_paraphrases, pipeline,
                                             corpus.repo, result.repo, result.records, config.scope);
  }
  report.reference = ReferenceValues(config);
  return report;
}

std::vector<std::string> SweepGroups() {
  return {"main", "budget", "planted", "modification", "knowledge", "fraction", "paraphrase"};
}

namespace {

ExperimentConfig Named(std::string name, AttackMethod method) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.method = method;
  if (TargetOf(method) == AttackTarget::kPlanting) c.modification = Modification::Kind::kAdd;
  if (method == AttackMethod::kSupportingGeneration || method == AttackMethod::kCorrectClaims) {
    c.n_samples = 160;
  }
  return c;
}

ExperimentConfig Imperceptible(std::string name, PerturbationTechnique technique,
                               AttackObjective objective, int epsilon) {
  ExperimentConfig c = Named(std::move(name), AttackMethod::kImperceptible);
  c.technique = technique;
  c.objective = objective;
  c.epsilon = epsilon;
  return c;
}

ExperimentConfig Rewrite(std::string name, MaskerKind masker, FilterDirection filter) {
  ExperimentConfig c = Named(std::move(name), AttackMethod::kClaimAlignedRewrite);
  c.masker = masker;
  c.filter = filter;
  return c;
}

ExperimentConfig Generation(std::string name, FilterDirection filter) {
  ExperimentConfig c = Named(std::move(name), AttackMethod::kSupportingGeneration);
  c.filter = filter;
  return c;
}

// Attacks compared across constraints and knowledge settings.
std::vector<ExperimentConfig> Representatives() {
  return {
      Imperceptible("imperceptible", PerturbationTechnique::kHomoglyph,
                    AttackObjective::kVerifierLoss, 5),
      Named("contextualized-replace", AttackMethod::kContextualizedReplace),
      Named("omitting-paraphrase", AttackMethod::kOmitParaphrase),
  };
}

std::vector<ExperimentConfig> GroupConfigs(const std::string& group) {
  using PT = PerturbationTechnique;
  using AO = AttackObjective;
  std::vector<ExperimentConfig> out;
  if (group == "main") {
    out.push_back(Named("baseline", AttackMethod::kNone));
    out.push_back(Named("lexical-variation", AttackMethod::kLexicalVariation));
    out.push_back(Named("contextualized-replace", AttackMethod::kContextualizedReplace));
    for (PT t : {PT::kHomoglyph, PT::kReorder, PT::kDelete, PT::kInvisible}) {
      out.push_back(Imperceptible("imperceptible-" + std::string(PerturbationTechniqueName(t)), t,
                                  AO::kVerifierLoss, 5));
    }
    out.push_back(Imperceptible("imperceptible-ret-homoglyph-5", PT::kHomoglyph, AO::kRetrievalScore, 5));
    out.push_back(Imperceptible("imperceptible-ret-homoglyph-12", PT::kHomoglyph, AO::kRetrievalScore, 12));
    out.push_back(Named("omitting-paraphrase", AttackMethod::kOmitParaphrase));
    out.push_back(Named("omitting-generate", AttackMethod::kOmitGenerate));
    out.push_back(Rewrite("rewrite", MaskerKind::kVerifierImportance, FilterDirection::kNone));
    out.push_back(Rewrite("rewrite-stance", MaskerKind::kVerifierImportance, FilterDirection::kStanceMax));
    out.push_back(Rewrite("rewrite-ret", MaskerKind::kRetrievalImportance, FilterDirection::kNone));
    out.push_back(Rewrite("rewrite-ret-filter", MaskerKind::kRetrievalImportance,
                          FilterDirection::kRetrievalMax));
    out.push_back(Generation("supporting-generation", FilterDirection::kNone));
    out.push_back(Generation("supporting-generation-stance", FilterDirection::kStanceMax));
    out.push_back(Named("correct-claims", AttackMethod::kCorrectClaims));
  } else if (group == "budget") {
    for (ExperimentConfig base : Representatives()) {
      for (size_t budget : {1, 2, 5}) {
        ExperimentConfig c = base;
        c.name = "budget/" + base.name + "/" + std::to_string(budget);
        c.max_edited = budget;
        out.push_back(c);
      }
    }
  } else if (group == "planted") {
    for (size_t n : {1, 2}) {
      ExperimentConfig c = Rewrite("planted/rewrite-stance/" + std::to_string(n),
                                   MaskerKind::kVerifierImportance, FilterDirection::kStanceMax);
      c.n_evidence = n;
      out.push_back(c);
    }
    for (size_t n : {1, 2}) {
      ExperimentConfig c = Generation("planted/supporting-generation-stance/" + std::to_string(n),
                                      FilterDirection::kStanceMax);
      c.n_keep = n;
      out.push_back(c);
    }
  } else if (group == "modification") {
    std::vector<ExperimentConfig> bases = Representatives();
    bases.push_back(Rewrite("rewrite", MaskerKind::kVerifierImportance, FilterDirection::kNone));
    for (const ExperimentConfig& base : bases) {
      for (auto kind : {Modification::Kind::kReplace, Modification::Kind::kAdd}) {
        ExperimentConfig c = base;
        c.name = "modification/" + base.name + "/" + std::string(ModificationKindName(kind));
        c.modification = kind;
        c.allow_add_for_comparison = TargetOf(c.method) == AttackTarget::kCamouflage;
        out.push_back(c);
      }
    }
  } else if (group == "knowledge") {
    for (const ExperimentConfig& base : Representatives()) {
      for (auto kind : {RetrieverKind::kTfIdfCosine, RetrieverKind::kBm25}) {
        ExperimentConfig c = base;
        c.adversary_retriever = kind;
        c.name = "knowledge/" + base.name + "/" + std::string(KnowledgeName(CoordinatesOf(c).knowledge));
        out.push_back(c);
      }
    }
  } else if (group == "fraction") {
    std::vector<ExperimentConfig> bases = Representatives();
    bases.push_back(Rewrite("rewrite-stance", MaskerKind::kVerifierImportance, FilterDirection::kStanceMax));
    bases.push_back(Generation("supporting-generation-stance", FilterDirection::kStanceMax));
    for (const ExperimentConfig& base : bases) {
      for (double fraction : {0.1, 0.25, 0.5, 1.0}) {
        ExperimentConfig c = base;
        c.adversary_data_fraction = fraction;
        std::ostringstream name;
        name << "fraction/" << base.name << "/" << fraction;
        c.name = name.str();
        out.push_back(c);
      }
    }
  } else if (group == "paraphrase") {
    std::vector<ExperimentConfig> bases = Representatives();
    bases.push_back(Rewrite("rewrite-stance", MaskerKind::kVerifierImportance, FilterDirection::kStanceMax));
    bases.push_back(Generation("supporting-generation-stance", FilterDirection::kStanceMax));
    for (ExperimentConfig c : bases) {
      c.name = "paraphrase/" + c.name;
      c.paraphrase_robustness = true;
      out.push_back(c);
    }
  } else {
    throw ConfigError("unknown sweep group '" + group + "'");
  }
  return out;
}

}  // namespace

std::vector<ExperimentConfig> SweepGrid(const std::vector<std::string>& groups) {
  std::vector<ExperimentConfig> grid;
  for (const std::string& group : groups.empty() ? SweepGroups() : groups) {
    for (ExperimentConfig& c : GroupConfigs(group)) grid.push_back(std::move(c));
  }
  return grid;
}

std::vector<ExperimentReport> RunSweep(const std::vector<ExperimentConfig>& grid,
                                       const ExperimentData& data, size_t jobs) {
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  for (const ExperimentConfig& c : grid) {
    ValidateExperimentConfig(c);
    CheckData(c, data);
  }
  std::vector<std::optional<ExperimentReport>> slots(grid.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (size_t i = next++; i < grid.size(); i = next++) {
      try {
        slots[i] = RunExperiment(grid[i], data);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const size_t threads = std::min(jobs, std::max<size_t>(grid.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<ExperimentReport> reports;
  reports.reserve(slots.size());
  for (auto& slot : slots) reports.push_back(std::move(*slot));
  return reports;
}

}  // namespace fcattack
