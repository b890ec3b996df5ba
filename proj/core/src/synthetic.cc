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

#include "fcattack/synthetic.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "fcattack/errors.h"
#include "fcattack/text.h"

namespace fcattack {
namespace {

struct Relation {
  const char* fact;
  const char* negated;
  std::vector<const char*> rewrites;
  const char* dropped;
  std::vector<std::string> values;
};

const std::vector<Relation>& Relations() {
  static const std::vector<Relation> kRelations = {
      {"{E} was born in {V}",
       "{E} was not born in {W}, but was born in {V}",
       {"{E} was born in the city of {V}", "The birthplace of {E} is {V}"},
       "This person was born in {V}",
       {"Lisbon", "Oslo", "Dublin", "Prague", "Vienna", "Madrid", "Warsaw", "Athens", "Cairo",
        "Lima", "Quito", "Nairobi"}},
      {"{E} works as a {V}",
       "{E} does not work as a {W}, but works as a {V}",
       {"{E} is employed as a {V}", "By profession, {E} is a {V}"},
       "This person works as a {V}",
       {"painter", "surgeon", "lawyer", "pilot", "chemist", "architect", "journalist", "teacher",
        "farmer", "engineer", "baker", "sculptor"}},
      {"{E} plays the {V}",
       "{E} never plays the {W}, but plays the {V}",
       {"{E} is a player of the {V}", "The {V} is played by {E}"},
       "This person plays the {V}",
       {"violin", "cello", "piano", "flute", "trumpet", "harp", "drums", "guitar", "clarinet",
        "oboe", "banjo", "saxophone"}},
      {"{E} founded the company {V}",
       "{E} did not found the company {W}, but founded the company {V}",
       {"{E} is the founder of the company {V}", "The company {V} was founded by {E}"},
       "This person founded the company {V}",
       {"Zentrix", "Corvana", "Halvex", "Lumora", "Quillon", "Vortana", "Nexaro", "Sylvor",
        "Trindle", "Oskaro", "Pembrel", "Ravenor"}},
      {"{E} lives in {V}",
       "{E} does not live in {W}, but lives in {V}",
       {"{E} is a resident of {V}", "{E} currently resides in {V}"},
       "This person lives in {V}",
       {"Norway", "Chile", "Kenya", "Japan", "Canada", "Peru", "Egypt", "Brazil", "Iceland",
        "Portugal", "Mexico", "Vietnam"}},
      {"{E} released an album in {V}",
       "{E} did not release an album in {W}, but released an album in {V}",
       {"In {V}, {E} released an album", "{E} put out an album in {V}"},
       "This person released an album in {V}",
       {"1961", "1964", "1968", "1972", "1975", "1979", "1983", "1986", "1990", "1994", "1997",
        "1999"}},
      {"{E} wrote the novel {V}",
       "{E} did not write the novel {W}, but wrote the novel {V}",
       {"{E} is the author of the novel {V}", "The novel {V} was written by {E}"},
       "This person wrote the novel {V}",
       {"Moonfall", "Ashgrove", "Saltmarsh", "Ironwood", "Duskwater", "Emberly", "Frostvale",
        "Greywind", "Hollowmere", "Starling", "Thornbury", "Wildermoor"}},
      {"{E} studied {V} at university",
       "{E} did not study {W} at university, but studied {V} at university",
       {"{E} majored in {V} at university", "At university, {E} studied {V}"},
       "This person studied {V} at university",
       {"physics", "history", "biology", "economics", "philosophy", "geology", "music",
        "medicine", "law", "linguistics", "astronomy", "chemistry"}},
  };
  return kRelations;
}

const std::vector<std::string>& FirstNames() {
  static const std::vector<std::string> kNames = {
      "Anna",   "Boris",  "Clara",  "Dmitri", "Elena",  "Felix",  "Greta",  "Hugo",
      "Ingrid", "Jonas",  "Katya",  "Lorenz", "Mira",   "Nils",   "Olga",   "Pavel",
      "Quinn",  "Rosa",   "Stefan", "Tilda",  "Ulrich", "Vera",   "Walter", "Xenia",
      "Yusuf",  "Zora",   "Amos",   "Bianca", "Cyril",  "Dagny",  "Emil",   "Freya",
      "Gideon", "Hedda",  "Ivo",    "Juno",   "Kasper", "Liesel", "Magnus", "Nadia"};
  return kNames;
}

const std::vector<std::string>& LastNames() {
  static const std::vector<std::string> kNames = {
      "Abend",   "Brandt",  "Castell", "Dorn",    "Eckel",   "Falk",    "Gruber",  "Hauser",
      "Ibsen",   "Jaeger",  "Kessler", "Lind",    "Moser",   "Nagel",   "Ostrow",  "Pohl",
      "Quast",   "Rainer",  "Seidel",  "Thorn",   "Ulmer",   "Vogt",    "Wendt",   "Yarrow",
      "Zeller",  "Albers",  "Berger",  "Crane",   "Duval",   "Engel",   "Fischer", "Glass",
      "Holm",    "Imhof",   "Janssen", "Krug",    "Lehmann", "Marek",   "Novak",   "Orlov"};
  return kNames;
}

const std::vector<std::string>& Suffixes() {
  static const std::vector<std::string> kSuffixes = {
      ", according to records kept by the local historical society",
      ", as noted in a profile published some years ago",
      ", a detail confirmed by several family members",
      ", which surprised many of those who knew them well",
      ", as listed in the regional biographical register",
      ", based on an interview given to a weekly magazine",
  };
  return kSuffixes;
}

const std::vector<std::string>& Hobbies() {
  static const std::vector<std::string> kHobbies = {
      "gardening", "chess",   "sailing", "hiking",  "pottery", "birdwatching",
      "cycling",   "fishing", "baking",  "knitting", "rowing", "photography"};
  return kHobbies;
}

const std::vector<std::vector<std::string>>& SynonymGroups() {
  static const std::vector<std::vector<std::string>> kGroups = {
      {"born", "raised", "birthed"},
      {"works", "labors", "serves"},
      {"plays", "performs", "practices"},
      {"founded", "established", "launched", "started"},
      {"lives", "resides", "dwells"},
      {"released", "issued", "published"},
      {"album", "record"},
      {"wrote", "authored", "penned"},
      {"novel", "book"},
      {"company", "firm", "business"},
      {"studied", "learned"},
      {"university", "college"},
      {"painter", "artist"},
      {"surgeon", "doctor"},
      {"lawyer", "attorney"},
      {"pilot", "aviator"},
      {"teacher", "tutor"},
      {"journalist", "reporter"},
      {"farmer", "grower"},
      {"engineer", "mechanic"},
      {"city", "town"},
      {"author", "writer"},
  };
  return kGroups;
}

std::string Fill(std::string_view tmpl, const std::string& entity, const std::string& value,
                 const std::string& wrong = "") {
  std::string out;
  for (size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl.compare(i, 3, "{E}") == 0) {
      out += entity;
      i += 2;
    } else if (tmpl.compare(i, 3, "{V}") == 0) {
      out += value;
      i += 2;
    } else if (tmpl.compare(i, 3, "{W}") == 0) {
      out += wrong;
      i += 2;
    } else {
      out.push_back(tmpl[i]);
    }
  }
  return out;
}

std::string Sentence(std::string body) {
  if (!body.empty()) body[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(body[0])));
  for (size_t i = body.find(" a "); i != std::string::npos; i = body.find(" a ", i + 1)) {
    if (i + 3 < body.size() && std::string_view("aeiou").find(body[i + 3]) != std::string_view::npos) {
      body.insert(i + 2, "n");
    }
  }
  return body + ".";
}

struct Fact {
  size_t relation = 0;
  size_t value = 0;
  std::string sentence;
  size_t sentence_index = 0;
};

struct Person {
  std::string first;
  std::string last;
  std::string name() const { return first + " " + last; }
  std::string doc_id() const { return first + "_" + last; }
  std::vector<Fact> facts;
};

struct PendingClaim {
  std::string text;
  Label label = Label::kNei;
  std::vector<SentenceRef> gold;
  std::string entity;
  size_t relation = 0;
  std::string value;
  std::string true_value;
};

template <typename T>
size_t Pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return std::uniform_int_distribution<size_t>(0, v.size() - 1)(rng);
}

size_t PickOther(std::mt19937_64& rng, size_t count, size_t avoid) {
  size_t v = std::uniform_int_distribution<size_t>(0, count - 2)(rng);
  return v >= avoid ? v + 1 : v;
}

}  // namespace

SyntheticCorpus GenerateSyntheticCorpus(const SynthConfig& config, uint64_t seed) {
  const auto& relations = Relations();
  if (config.sup_claims < 1 || config.ref_claims < 1 || config.nei_claims < 1) {
    throw ConfigError("synthetic corpus needs at least one claim per label");
  }
  if (config.facts_per_entity < 1 || config.facts_per_entity > relations.size()) {
    throw ConfigError("facts_per_entity must be in [1, 8]");
  }
  if (config.values_per_relation < 2 || config.values_per_relation > 12) {
    throw ConfigError("values_per_relation must be in [2, 12]");
  }
  if (config.unknown_entity_share < 0.0 || config.unknown_entity_share > 1.0) {
    throw ConfigError("unknown_entity_share must be in [0, 1]");
  }
  const size_t unknown = static_cast<size_t>(
      std::llround(config.unknown_entity_share * static_cast<double>(config.nei_claims)));
  const size_t known_nei = config.nei_claims - unknown;
  const size_t facts = config.facts_per_entity;
  const size_t missing = relations.size() - facts;
  if (known_nei > 0 && missing == 0) {
    throw ConfigError("NEI claims about known people need facts_per_entity < 8");
  }
  size_t people = config.entities;
  if (people == 0) {
    const size_t labelled = config.sup_claims + config.ref_claims;
    people = std::max<size_t>((labelled * 5 + facts * 4 - 1) / (facts * 4), 4);
    if (missing > 0) people = std::max(people, (known_nei + missing - 1) / missing);
  }
  if (people * facts < config.sup_claims + config.ref_claims) {
    throw ConfigError("not enough facts for the requested SUP and REF claims");
  }
  if (people * missing < known_nei) throw ConfigError("not enough gaps for the NEI claims");
  const size_t name_space = FirstNames().size() * LastNames().size();
  if (people + unknown > name_space) throw ConfigError("too many people for the name space");

  std::mt19937_64 rng(seed);
  std::vector<std::pair<size_t, size_t>> names;
  for (size_t f = 0; f < FirstNames().size(); ++f) {
    for (size_t l = 0; l < LastNames().size(); ++l) names.emplace_back(f, l);
  }
  std::shuffle(names.begin(), names.end(), rng);

  std::vector<Person> persons(people);
  for (size_t p = 0; p < people; ++p) {
    persons[p].first = FirstNames()[names[p].first];
    persons[p].last = LastNames()[names[p].second];
    std::vector<size_t> rel(relations.size());
    for (size_t r = 0; r < rel.size(); ++r) rel[r] = r;
    std::shuffle(rel.begin(), rel.end(), rng);
    for (size_t i = 0; i < facts; ++i) {
      Fact fact;
      fact.relation = rel[i];
      fact.value = std::uniform_int_distribution<size_t>(0, config.values_per_relation - 1)(rng);
      persons[p].facts.push_back(fact);
    }
  }

  // Assign SUP and REF claims to distinct stated facts.
  std::vector<std::pair<size_t, size_t>> slots;  // (person, fact)
  for (size_t p = 0; p < people; ++p) {
    for (size_t i = 0; i < facts; ++i) slots.emplace_back(p, i);
  }
  std::shuffle(slots.begin(), slots.end(), rng);
  std::bernoulli_distribution use_suffix(0.6);
  std::vector<PendingClaim> pending;
  std::map<std::pair<size_t, size_t>, size_t> claim_of_slot;
  for (size_t i = 0; i < config.sup_claims + config.ref_claims; ++i) {
    const auto [p, f] = slots[i];
    Fact& fact = persons[p].facts[f];
    const Relation& rel = relations[fact.relation];
    PendingClaim c;
    c.entity = persons[p].name();
    c.relation = fact.relation;
    c.true_value = rel.values[fact.value];
    if (i < config.sup_claims) {
      c.label = Label::kSup;
      c.value = c.true_value;
    } else {
      c.label = Label::kRef;
      c.value = rel.values[PickOther(rng, config.values_per_relation, fact.value)];
      fact.sentence = Sentence(Fill(rel.negated, c.entity, c.true_value, c.value));
    }
    c.text = Sentence(Fill(rel.fact, c.entity, c.value));
    claim_of_slot[{p, f}] = pending.size();
    pending.push_back(std::move(c));
  }

  // Documents: stated facts in shuffled order with filler sentences mixed in.
  std::vector<Document> documents;
  for (size_t p = 0; p < people; ++p) {
    Person& person = persons[p];
    std::vector<std::string> lines;
    std::vector<int> fact_at;  // fact index or -1 for filler
    for (size_t i = 0; i < facts; ++i) {
      Fact& fact = person.facts[i];
      if (fact.sentence.empty()) {
        std::string body = Fill(relations[fact.relation].fact, person.name(),
                                relations[fact.relation].values[fact.value]);
        if (use_suffix(rng)) body += Suffixes()[Pick(rng, Suffixes())];
        fact.sentence = Sentence(body);
      }
      lines.push_back(fact.sentence);
      fact_at.push_back(static_cast<int>(i));
    }
    for (size_t k = 0; k < config.filler_sentences; ++k) {
      std::string filler;
      switch (k % 3) {
        case 0:
          filler = person.name() + " enjoys " + Hobbies()[Pick(rng, Hobbies())] +
                   " on quiet weekends.";
          break;
        case 1:
          filler = "Little else is publicly known about the early years of " + person.name() + ".";
          break;
        default:
          filler = "Friends of " + person.first + " often mention a fondness for " +
                   Hobbies()[Pick(rng, Hobbies())] + ".";
          break;
      }
      const size_t at = std::uniform_int_distribution<size_t>(0, lines.size())(rng);
      lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(at), filler);
      fact_at.insert(fact_at.begin() + static_cast<std::ptrdiff_t>(at), -1);
    }
    for (size_t s = 0; s < fact_at.size(); ++s) {
      if (fact_at[s] < 0) continue;
      const size_t f = static_cast<size_t>(fact_at[s]);
      person.facts[f].sentence_index = s;
      auto it = claim_of_slot.find({p, f});
      if (it != claim_of_slot.end()) pending[it->second].gold = {{person.doc_id(), s}};
    }
    documents.push_back({person.doc_id(), person.name(), std::move(lines)});
  }

  // NEI claims: unstated relations of known people, then unknown people.
  std::vector<std::pair<size_t, size_t>> gaps;  // (person, relation)
  for (size_t p = 0; p < people; ++p) {
    std::set<size_t> stated;
    for (const Fact& f : persons[p].facts) stated.insert(f.relation);
    for (size_t r = 0; r < relations.size(); ++r) {
      if (!stated.count(r)) gaps.emplace_back(p, r);
    }
  }
  std::shuffle(gaps.begin(), gaps.end(), rng);
  for (size_t i = 0; i < config.nei_claims; ++i) {
    PendingClaim c;
    c.label = Label::kNei;
    if (i < known_nei) {
      c.entity = persons[gaps[i].first].name();
      c.relation = gaps[i].second;
    } else {
      const auto& n = names[people + (i - known_nei)];
      c.entity = FirstNames()[n.first] + " " + LastNames()[n.second];
      c.relation = std::uniform_int_distribution<size_t>(0, relations.size() - 1)(rng);
    }
    const Relation& rel = relations[c.relation];
    c.value = rel.values[std::uniform_int_distribution<size_t>(0, config.values_per_relation - 1)(rng)];
    c.text = Sentence(Fill(rel.fact, c.entity, c.value));
    pending.push_back(std::move(c));
  }

  std::shuffle(pending.begin(), pending.end(), rng);
  SyntheticCorpus out;
  out.repo = Repository::FromDocuments(std::move(documents));
  std::bernoulli_distribution coin(0.5);
  for (size_t i = 0; i < pending.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "c%04zu", i + 1);
    const PendingClaim& pc = pending[i];
    out.claims.Add({id, pc.text, pc.label, pc.gold, {}});

    const Relation& rel = relations[pc.relation];
    const std::string first = pc.entity.substr(0, pc.entity.find(' '));
    std::vector<std::string> rewrites = {pc.text};
    for (const char* t : rel.rewrites) rewrites.push_back(Sentence(Fill(t, pc.entity, pc.value)));
    rewrites.push_back(Sentence(Fill(rel.dropped, pc.entity, pc.value)));
    rewrites.push_back(Sentence(Fill(rel.fact, first, pc.value)));
    std::shuffle(rewrites.begin(), rewrites.end(), rng);
    out.claim_paraphrases.Add(id, rewrites);

    if (pc.label == Label::kSup) {
      size_t value_index = 0;
      while (rel.values[value_index] != pc.value) ++value_index;
      const std::string other = rel.values[PickOther(rng, config.values_per_relation, value_index)];
      out.counterclaims.push_back({id, Sentence(Fill(rel.fact, pc.entity, other))});
    }
  }
  ClaimSplit split = SplitClaims(out.claims, config.eval_fraction, HashCombine(seed, 0xe7a1));
  out.train = std::move(split.first);
  out.eval = std::move(split.second);

  // Lexicon over every corpus and rewrite token plus the synonym groups.
  std::set<std::string> vocabulary;
  for (const SentenceRef& ref : out.repo.AllSentenceRefs()) {
    for (std::string& t : NormalizedTokens(out.repo.SentenceText(ref))) vocabulary.insert(t);
  }
  for (const auto& [key, candidates] : out.claim_paraphrases.entries()) {
    for (const PoolCandidate& c : candidates) {
      for (std::string& t : NormalizedTokens(c.text)) vocabulary.insert(t);
    }
  }
  std::map<std::string, size_t> group_of;
  for (size_t g = 0; g < SynonymGroups().size(); ++g) {
    for (const std::string& w : SynonymGroups()[g]) {
      group_of[w] = g;
      vocabulary.insert(w);
    }
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  constexpr size_t kDim = 8;
  std::vector<std::vector<double>> centers(SynonymGroups().size(), std::vector<double>(kDim));
  for (auto& c : centers) {
    for (double& x : c) x = gauss(rng);
  }
  for (const std::string& word : vocabulary) {
    std::vector<double> v(kDim);
    auto g = group_of.find(word);
    for (size_t d = 0; d < kDim; ++d) {
      v[d] = g == group_of.end() ? gauss(rng) : centers[g->second][d] + jitter(rng);
    }
    out.lexicon.Add(word, std::move(v));
  }

  // Token pool: same-class alternatives with geometrically decaying scores.
  auto add_class = [&](const std::vector<std::string>& members) {
    for (const std::string& m : members) {
      std::vector<std::string> others;
      for (const std::string& o : members) {
        if (o != m) others.push_back(o);
      }
      std::shuffle(others.begin(), others.end(), rng);
      std::vector<PoolCandidate> candidates;
      double score = 0.4;
      for (const std::string& o : others) {
        candidates.push_back({o, score});
        score *= 0.5;
      }
      out.token_pool.Add(TokenKey(AsciiLower(m)), std::move(candidates));
    }
  };
  for (const Relation& rel : relations) {
    add_class(std::vector<std::string>(rel.values.begin(),
                                       rel.values.begin() +
                                           static_cast<std::ptrdiff_t>(config.values_per_relation)));
  }
  add_class(FirstNames());
  add_class(LastNames());
  for (const auto& group : SynonymGroups()) add_class(group);
  return out;
}

}  // namespace fcattack
