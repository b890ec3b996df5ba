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

#include "fcattack/camouflage.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "fcattack/errors.h"

namespace fcattack {

std::string_view AttackObjectiveName(AttackObjective objective) {
  return objective == AttackObjective::kVerifierLoss ? "verifier" : "retrieval";
}

AttackObjective ParseAttackObjective(std::string_view name) {
  if (name == "verifier") return AttackObjective::kVerifierLoss;
  if (name == "retrieval") return AttackObjective::kRetrievalScore;
  throw ConfigError("unknown attack objective '" + std::string(name) +
                    "' (expected verifier or retrieval)");
}

std::vector<TokenImportance> RankTokenImportance(const Verifier& verifier, std::string_view claim,
                                                 const TokenizedText& evidence, Label label) {
  const double base = verifier.Predict(claim, evidence.text())[label];
  std::vector<TokenImportance> out;
  out.reserve(evidence.size());
  for (size_t i = 0; i < evidence.size(); ++i) {
    out.push_back({i, base - verifier.Predict(claim, evidence.WithoutToken(i))[label]});
  }
  std::stable_sort(out.begin(), out.end(), [](const TokenImportance& a, const TokenImportance& b) {
    return a.importance > b.importance;
  });
  return out;
}

PerturbedEvidence LexicalVariation(std::string_view claim, std::string_view evidence,
                                   const Verifier& verifier, const EmbeddingLexicon& lexicon,
                                   Label target, const LexicalVariationOptions& options) {
  const TokenizedText tokens{std::string(evidence)};
  std::vector<size_t> positions;
  std::vector<std::vector<std::string>> choices;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const auto neighbors =
        lexicon.Neighbors(tokens.token(i), options.max_distance, options.max_neighbors);
    if (neighbors.empty()) continue;
    positions.push_back(i);
    std::vector<std::string> words;
    for (const auto& n : neighbors) words.push_back(MatchCapitalization(tokens.token(i), n.word));
    choices.push_back(std::move(words));
  }
  if (positions.empty()) throw AttackInapplicable("no evidence token has a lexicon neighbour");

  auto decode = [&](const Genome& g) {
    std::vector<std::pair<size_t, std::string>> replacements;
    for (size_t s = 0; s < g.size(); ++s) {
      if (g[s] > 0) replacements.emplace_back(positions[s], choices[s][static_cast<size_t>(g[s] - 1)]);
    }
    return tokens.WithReplacements(replacements);
  };
  GeneticProblem problem;
  problem.initial.assign(positions.size(), 0);
  problem.neighbors = [&](const Genome& state) {
    std::vector<Genome> out;
    for (size_t s = 0; s < state.size(); ++s) {
      for (int o = 0; o <= static_cast<int>(choices[s].size()); ++o) {
        if (o == state[s]) continue;
        Genome next = state;
        next[s] = o;
        out.push_back(std::move(next));
      }
    }
    return out;
  };
  problem.fitness = [&](const Genome& g) { return verifier.Predict(claim, decode(g))[target]; };
  problem.target_fitness = options.target_probability;
  const SearchResult result = GeneticSearch(problem, options.budget);

  PerturbedEvidence out;
  out.original = std::string(evidence);
  out.method = "lexical-variation";
  out.objective_before = result.trace.front();
  out.objective_after = result.best_value;
  out.failed = !result.improved;
  out.attacked = out.failed ? out.original : decode(result.best);
  if (!out.failed) {
    out.budget_used = static_cast<int>(std::count_if(result.best.begin(), result.best.end(),
                                                     [](int g) { return g != 0; }));
  }
  return out;
}

PerturbedEvidence ContextualizedReplace(std::string_view claim, std::string_view evidence,
                                        std::string_view sentence_key, const Verifier& verifier,
                                        const CandidateGenerator& generator, Label correct,
                                        const ContextualizedReplaceOptions& options) {
  const TokenizedText tokens{std::string(evidence)};
  std::vector<std::vector<ScoredCandidate>> candidates(tokens.size());
  bool any = false;
  for (size_t i = 0; i < tokens.size(); ++i) {
    for (ScoredCandidate& c : generator.Candidates(tokens, i, sentence_key)) {
      if (c.score >= options.candidate_threshold) candidates[i].push_back(std::move(c));
    }
    any = any || !candidates[i].empty();
  }
  if (!any) throw AttackInapplicable("no replacement candidate above the score threshold");

  PerturbedEvidence out;
  out.original = std::string(evidence);
  out.method = "contextualized-replace";
  const double before = verifier.Predict(claim, evidence)[correct];
  out.objective_before = before;
  const size_t budget = static_cast<size_t>(
      std::floor(options.max_token_fraction * static_cast<double>(tokens.size())));

  std::vector<std::pair<size_t, std::string>> replacements;
  double current = before;
  std::string current_text = out.original;
  if (budget > 0) {
    for (const TokenImportance& ti : RankTokenImportance(verifier, claim, tokens, correct)) {
      if (replacements.size() >= budget) break;
      if (verifier.Predict(claim, current_text).Argmax() != correct) break;
      double best = current;
      std::string best_text;
      const std::string* best_word = nullptr;
      for (const ScoredCandidate& c : candidates[ti.position]) {
        auto trial = replacements;
        trial.emplace_back(ti.position, c.text);
        std::string text = tokens.WithReplacements(trial);
        const double p = verifier.Predict(claim, text)[correct];
        if (p < best) {
          best = p;
          best_text = std::move(text);
          best_word = &c.text;
        }
      }
      if (best_word == nullptr) continue;
      replacements.emplace_back(ti.position, *best_word);
      current = best;
      current_text = std::move(best_text);
    }
  }
  out.budget_used = static_cast<int>(replacements.size());
  out.objective_after = current;
  out.failed = !(current < before);
  out.attacked = out.failed ? out.original : current_text;
  return out;
}

PerturbedEvidence ImperceptibleAttack(std::string_view evidence,
                                      const std::function<double(std::string_view)>& objective,
                                      const ImperceptibleOptions& options) {
  if (options.epsilon < 1) throw ConfigError("perturbation budget epsilon must be >= 1");
  const HomoglyphTable& table = options.table ? *options.table : HomoglyphTable::Default();
  const PerturbationSites sites(options.technique, evidence, table);
  if (sites.position_count() == 0) {
    throw AttackInapplicable("no eligible position for " +
                             std::string(PerturbationTechniqueName(options.technique)));
  }
  const int epsilon = std::min(options.epsilon, static_cast<int>(sites.position_count()));
  const DiscreteSpace space = PerturbationSpace(
      epsilon, static_cast<int>(sites.position_count()), sites.choice_count());
  const SearchResult result = DifferentialEvolution(
      space, [&](const Genome& g) { return objective(sites.Apply(UnflattenGenome(g))); },
      options.budget);

  PerturbedEvidence out;
  out.original = std::string(evidence);
  out.method = "imperceptible-" + std::string(PerturbationTechniqueName(options.technique));
  out.objective_before = objective(evidence);
  out.objective_after = result.best_value;
  out.failed = !(result.improved && result.best_value < out.objective_before);
  if (out.failed) {
    out.attacked = out.original;
    out.objective_after = out.objective_before;
  } else {
    out.attacked = sites.Apply(UnflattenGenome(result.best));
    std::set<int> distinct;
    for (const PerturbationGene& g : UnflattenGenome(result.best)) distinct.insert(g.position);
    out.budget_used = static_cast<int>(distinct.size());
  }
  return out;
}

std::function<double(std::string_view)> VerifierLossObjective(const Verifier& verifier,
                                                              std::string_view claim, Label correct) {
  return [&verifier, claim = std::string(claim), correct](std::string_view text) {
    return verifier.Predict(claim, text)[correct];
  };
}

std::function<double(std::string_view)> RetrievalScoreObjective(const Index& index,
                                                                std::string_view claim) {
  return [&index, claim = std::string(claim)](std::string_view text) {
    return index.Score(claim, text);
  };
}

size_t SelectOmittingCandidate(const std::vector<std::string>& candidates, std::string_view claim,
                               const Index& index) {
  if (candidates.empty()) throw AttackInapplicable("no omitting candidates");
  size_t best = 0;
  double best_score = index.Score(claim, candidates[0]);
  for (size_t i = 1; i < candidates.size(); ++i) {
    const double s = index.Score(claim, candidates[i]);
    if (s < best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

std::string_view CamouflageMethodName(CamouflageMethod method) {
  switch (method) {
    case CamouflageMethod::kLexicalVariation: return "lexical-variation";
    case CamouflageMethod::kContextualizedReplace: return "contextualized-replace";
    case CamouflageMethod::kImperceptible: return "imperceptible";
    case CamouflageMethod::kOmitParaphrase: return "omitting-paraphrase";
    case CamouflageMethod::kOmitGenerate: return "omitting-generate";
  }
  return "?";
}

CamouflageMethod ParseCamouflageMethod(std::string_view name) {
  for (auto m : {CamouflageMethod::kLexicalVariation, CamouflageMethod::kContextualizedReplace,
                 CamouflageMethod::kImperceptible, CamouflageMethod::kOmitParaphrase,
                 CamouflageMethod::kOmitGenerate}) {
    if (CamouflageMethodName(m) == name) return m;
  }
  throw ConfigError("unknown camouflage method '" + std::string(name) + "'");
}

void ValidateCamouflageConfig(const CamouflageConfig& config) {
  if (config.modification == Modification::Kind::kAdd && !config.allow_add_for_comparison) {
    throw ConfigError(
        "camouflage attacks hide existing evidence and work only under the replace "
        "modification; add leaves the original evidence in place");
  }
  if (config.epsilon < 1) throw ConfigError("epsilon must be >= 1");
  if (config.max_edited < 1) throw ConfigError("max_edited must be >= 1");
  if (!(config.max_token_fraction > 0.0) || config.max_token_fraction > 1.0) {
    throw ConfigError("max_token_fraction must be in (0, 1]");
  }
  if (config.lexical_distance <= 0.0) throw ConfigError("lexical distance must be positive");
  if (config.rewrite_candidates < 1) throw ConfigError("rewrite_candidates must be >= 1");
}

namespace {

bool UsesVerifier(const CamouflageConfig& config) {
  return config.method == CamouflageMethod::kLexicalVariation ||
         config.method == CamouflageMethod::kContextualizedReplace ||
         (config.method == CamouflageMethod::kImperceptible &&
          config.objective == AttackObjective::kVerifierLoss);
}

std::vector<std::string> OmittingCandidates(const CamouflageConfig& config,
                                            const CamouflageResources& resources,
                                            const SentenceRef& ref, const std::string& text,
                                            uint64_t seed) {
  const bool paraphrase = config.method == CamouflageMethod::kOmitParaphrase;
  if (resources.rewrite_pool != nullptr) {
    const auto* found =
        resources.rewrite_pool->Find(paraphrase ? ref.ToString() : PromptKey(text));
    if (found != nullptr && !found->empty()) {
      std::vector<std::string> out;
      for (const PoolCandidate& c : *found) out.push_back(c.text);
      return out;
    }
  }
  return paraphrase ? resources.rewriter.Paraphrases(text, config.rewrite_candidates, seed)
                    : resources.rewriter.Generate(text, config.rewrite_candidates, seed);
}

}  // namespace

AttackResult RunCamouflage(const ClaimSet& claims, const Repository& repo,
                           const Index& adversary_index, const CamouflageConfig& config,
                           const CamouflageResources& resources) {
  ValidateCamouflageConfig(config);
  if (UsesVerifier(config) && resources.verifier == nullptr) {
    throw ConfigError(std::string(CamouflageMethodName(config.method)) +
                      " needs the adversary's verifier");
  }
  if (config.method == CamouflageMethod::kLexicalVariation && resources.lexicon == nullptr) {
    throw ConfigError("lexical-variation needs an embedding lexicon");
  }
  if (config.method == CamouflageMethod::kContextualizedReplace && resources.generator == nullptr) {
    throw ConfigError("contextualized-replace needs a candidate generator");
  }

  AttackResult result;
  std::vector<Modification> mods;
  std::vector<size_t> owners;
  for (const Claim& claim : claims) {
    AttackRecord record;
    record.claim_id = claim.id;
    if (claim.label == Label::kNei) {
      record.note = "NEI claims are not camouflaged";
      result.records.push_back(std::move(record));
      continue;
    }
    const RankedEvidence ranked = adversary_index.Retrieve(repo, claim.text, config.max_edited);
    if (ranked.items.empty()) record.note = "no evidence retrieved";
    const uint64_t claim_seed = HashCombine(config.seed, Fnv1a64(claim.id));
    for (const ScoredSentence& item : ranked.items) {
      const std::string& text = repo.SentenceText(item.ref);
      const uint64_t seed = HashCombine(claim_seed, Fnv1a64(item.ref.ToString()));
      if (UsesVerifier(config) &&
          resources.verifier->Predict(claim.text, text).Argmax() != claim.label) {
        continue;
      }
      PerturbedEvidence pe;
      try {
        switch (config.method) {
          case CamouflageMethod::kLexicalVariation: {
            LexicalVariationOptions opts;
            opts.max_distance = config.lexical_distance;
            opts.budget = config.genetic_budget;
            opts.budget.seed = seed;
            const Label target = claim.label == Label::kSup ? Label::kRef : Label::kSup;
            pe = LexicalVariation(claim.text, text, *resources.verifier, *resources.lexicon, target,
                                  opts);
            break;
          }
          case CamouflageMethod::kContextualizedReplace: {
            ContextualizedReplaceOptions opts;
            opts.max_token_fraction = config.max_token_fraction;
            opts.candidate_threshold = config.candidate_threshold;
            pe = ContextualizedReplace(claim.text, text, item.ref.ToString(), *resources.verifier,
                                       *resources.generator, claim.label, opts);
            break;
          }
          case CamouflageMethod::kImperceptible: {
            ImperceptibleOptions opts;
            opts.technique = config.technique;
            opts.epsilon = config.epsilon;
            opts.budget = config.evolution_budget;
            opts.budget.seed = seed;
            opts.table = resources.homoglyphs;
            const auto objective =
                config.objective == AttackObjective::kVerifierLoss
                    ? VerifierLossObjective(*resources.verifier, claim.text, claim.label)
                    : RetrievalScoreObjective(adversary_index, claim.text);
            pe = ImperceptibleAttack(text, objective, opts);
            break;
          }
          case CamouflageMethod::kOmitParaphrase:
          case CamouflageMethod::kOmitGenerate: {
            const std::vector<std::string> candidates =
                OmittingCandidates(config, resources, item.ref, text, seed);
            const size_t pick = SelectOmittingCandidate(candidates, claim.text, adversary_index);
            pe.original = text;
            pe.method = std::string(CamouflageMethodName(config.method));
            pe.budget_used = static_cast<int>(candidates.size());
            pe.objective_before = adversary_index.Score(claim.text, text);
            pe.objective_after = adversary_index.Score(claim.text, candidates[pick]);
            pe.failed = !(pe.objective_after < pe.objective_before);
            pe.attacked = pe.failed ? text : candidates[pick];
            break;
          }
        }
      } catch (const AttackInapplicable& e) {
        pe = PerturbedEvidence{};
        pe.original = text;
        pe.attacked = text;
        pe.method = std::string(CamouflageMethodName(config.method));
        pe.failed = true;
        record.note = e.what();
      }
      pe.ref = item.ref;
      if (!pe.failed) {
        mods.push_back(config.modification == Modification::Kind::kReplace
                           ? Modification::Replace(item.ref, pe.attacked)
                           : Modification::Add(item.ref.doc_id, pe.attacked));
        owners.push_back(result.records.size());
      }
      record.edits.push_back(std::move(pe));
    }
    result.records.push_back(std::move(record));
  }
  std::vector<SentenceRef> touched;
  result.repo = ApplyModifications(repo, mods, /*mark_as_attack=*/true, &touched);
  for (size_t i = 0; i < touched.size(); ++i) {
    AttackRecord& record = result.records[owners[i]];
    record.modifications.push_back(mods[i]);
    record.applied.push_back(touched[i]);
    record.attacked = true;
  }
  for (AttackRecord& record : result.records) {
    if (!record.attacked && record.note.empty()) record.note = "no sentence was successfully attacked";
  }
  return result;
}

}  // namespace fcattack
