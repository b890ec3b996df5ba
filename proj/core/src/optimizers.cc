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

#include "fcattack/optimizers.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "fcattack/errors.h"

namespace fcattack {

SearchBudget DefaultGeneticBudget(uint64_t seed) {
  return SearchBudget{.population_size = 20, .iterations = 10, .seed = seed,
                      .max_objective_calls = 100000};
}

SearchBudget DefaultEvolutionBudget(uint64_t seed) {
  return SearchBudget{.population_size = 32, .iterations = 3, .seed = seed,
                      .max_objective_calls = 100000};
}

namespace {

void CheckBudget(const SearchBudget& budget) {
  if (budget.population_size < 1 || budget.iterations < 0 || budget.max_objective_calls < 1) {
    throw ConfigError("search budget requires population >= 1, iterations >= 0, calls >= 1");
  }
}

// Memoised objective with a hard cap on distinct evaluations.
class CachedObjective {
 public:
  CachedObjective(const std::function<double(const Genome&)>& fn, int64_t cap)
      : fn_(fn), cap_(cap) {}

  std::optional<double> operator()(const Genome& g) {
    auto it = cache_.find(g);
    if (it != cache_.end()) return it->second;
    if (calls_ >= cap_) return std::nullopt;
    ++calls_;
    double v = fn_(g);
    cache_.emplace(g, v);
    return v;
  }

  int64_t calls() const { return calls_; }

 private:
  const std::function<double(const Genome&)>& fn_;
  int64_t cap_;
  int64_t calls_ = 0;
  std::map<Genome, double> cache_;
};

}  // namespace

SearchResult GeneticSearch(const GeneticProblem& problem, const SearchBudget& budget) {
  CheckBudget(budget);
  std::mt19937_64 rng(budget.seed);
  CachedObjective objective(problem.fitness, budget.max_objective_calls);
  SearchResult result;
  result.best = problem.initial;
  result.best_value = *objective(problem.initial);
  result.trace.push_back(result.best_value);

  bool exhausted = false;
  auto eval = [&](const Genome& g) -> std::optional<double> {
    std::optional<double> v = objective(g);
    if (!v) {
      exhausted = true;
      return v;
    }
    if (*v > result.best_value) {
      result.best_value = *v;
      result.best = g;
      result.improved = true;
    }
    return v;
  };
  auto reached_target = [&]() {
    return problem.target_fitness && result.best_value >= *problem.target_fitness;
  };

  std::vector<Genome> seeds = problem.neighbors(problem.initial);
  if (seeds.empty() || budget.iterations == 0 || reached_target()) {
    result.objective_calls = objective.calls();
    return result;
  }
  std::shuffle(seeds.begin(), seeds.end(), rng);
  const size_t pop_size = static_cast<size_t>(budget.population_size);
  std::vector<Genome> population;
  population.reserve(pop_size);
  for (size_t i = 0; i < pop_size; ++i) population.push_back(seeds[i % seeds.size()]);

  std::vector<double> fitness(pop_size, 0.0);
  for (int gen = 0; gen < budget.iterations && !exhausted; ++gen) {
    for (size_t i = 0; i < pop_size; ++i) {
      std::optional<double> v = eval(population[i]);
      if (!v) break;
      fitness[i] = *v;
    }
    result.trace.push_back(result.best_value);
    if (exhausted || reached_target() || gen + 1 == budget.iterations) break;

    const size_t elite = static_cast<size_t>(
        std::max_element(fitness.begin(), fitness.end()) - fitness.begin());
    const double top = fitness[elite];
    std::vector<double> weights(pop_size);
    for (size_t i = 0; i < pop_size; ++i) weights[i] = std::exp(fitness[i] - top);
    std::discrete_distribution<size_t> pick(weights.begin(), weights.end());
    std::bernoulli_distribution coin(0.5);

    std::vector<Genome> next;
    next.reserve(pop_size);
    next.push_back(population[elite]);
    while (next.size() < pop_size && !exhausted) {
      const Genome& a = population[pick(rng)];
      const Genome& b = population[pick(rng)];
      Genome child(a.size());
      for (size_t s = 0; s < a.size(); ++s) child[s] = coin(rng) ? a[s] : b[s];
      std::vector<Genome> moves = problem.neighbors(child);
      if (!moves.empty()) {
        const size_t samples =
            std::min(moves.size(), static_cast<size_t>(std::max(1, problem.mutation_samples)));
        std::uniform_int_distribution<size_t> any(0, moves.size() - 1);
        Genome chosen;
        double chosen_value = 0.0;
        for (size_t k = 0; k < samples; ++k) {
          const Genome& m = moves[any(rng)];
          std::optional<double> v = eval(m);
          if (!v) break;
          if (chosen.empty() || *v > chosen_value) {
            chosen = m;
            chosen_value = *v;
          }
        }
        if (!chosen.empty()) child = std::move(chosen);
      }
      next.push_back(std::move(child));
    }
    population = std::move(next);
    if (reached_target()) {
      result.trace.push_back(result.best_value);
      break;
    }
  }
  result.objective_calls = objective.calls();
  return result;
}

uint64_t DiscreteSpace::StateCount() const {
  uint64_t n = 1;
  for (int c : choice_counts) n *= static_cast<uint64_t>(std::max(c, 0));
  return n;
}

SearchResult DifferentialEvolution(const DiscreteSpace& space,
                                   const std::function<double(const Genome&)>& objective_fn,
                                   const SearchBudget& budget, const EvolutionParameters& params) {
  CheckBudget(budget);
  if (space.choice_counts.empty()) throw ConfigError("differential evolution needs at least one slot");
  for (int c : space.choice_counts) {
    if (c < 1) throw ConfigError("every slot needs at least one choice");
  }
  const size_t dims = space.choice_counts.size();
  const size_t pop_size = static_cast<size_t>(budget.population_size);
  std::mt19937_64 rng(budget.seed);
  CachedObjective objective(objective_fn, budget.max_objective_calls);

  auto lower = [](size_t) { return -0.5; };
  auto upper = [&](size_t d) { return static_cast<double>(space.choice_counts[d]) - 0.5; };
  auto decode = [&](const std::vector<double>& x) {
    Genome g(dims);
    for (size_t d = 0; d < dims; ++d) {
      const long v = static_cast<long>(std::floor(x[d] + 0.5));
      g[d] = static_cast<int>(std::clamp<long>(v, 0, space.choice_counts[d] - 1));
    }
    return g;
  };

  SearchResult result;
  bool exhausted = false;
  auto eval = [&](const std::vector<double>& x) -> std::optional<double> {
    Genome g = decode(x);
    std::optional<double> v = objective(g);
    if (!v) {
      exhausted = true;
      return v;
    }
    if (!result.improved || *v < result.best_value) {
      result.best_value = *v;
      result.best = std::move(g);
      result.improved = true;
    }
    return v;
  };

  std::vector<std::vector<double>> population(pop_size, std::vector<double>(dims));
  std::vector<double> values(pop_size, 0.0);
  size_t live = 0;
  for (size_t j = 0; j < pop_size; ++j) {
    for (size_t d = 0; d < dims; ++d) {
      std::uniform_real_distribution<double> u(lower(d), upper(d));
      population[j][d] = u(rng);
    }
    std::optional<double> v = eval(population[j]);
    if (!v) break;
    values[j] = *v;
    ++live;
  }
  population.resize(live);
  values.resize(live);
  result.trace.push_back(result.best_value);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<size_t> pick_dim(0, dims - 1);
  for (int it = 0; it < budget.iterations && !exhausted && live > 0; ++it) {
    std::uniform_int_distribution<size_t> pick(0, live - 1);
    auto next = population;
    auto next_values = values;
    for (size_t j = 0; j < live && !exhausted; ++j) {
      size_t a = pick(rng), b = pick(rng), c = pick(rng);
      if (live >= 4) {
        while (a == j) a = pick(rng);
        while (b == j || b == a) b = pick(rng);
        while (c == j || c == a || c == b) c = pick(rng);
      }
      const size_t forced = pick_dim(rng);
      std::vector<double> trial = population[j];
      for (size_t d = 0; d < dims; ++d) {
        if (d == forced || unit(rng) < params.crossover_rate) {
          double v = population[a][d] +
                     params.differential_weight * (population[b][d] - population[c][d]);
          trial[d] = std::clamp(v, lower(d), std::nextafter(upper(d), lower(d)));
        }
      }
      std::optional<double> v = eval(trial);
      if (!v) break;
      if (*v <= values[j]) {
        next[j] = std::move(trial);
        next_values[j] = *v;
      }
    }
    population = std::move(next);
    values = std::move(next_values);
    result.trace.push_back(result.best_value);
  }
  result.objective_calls = objective.calls();
  return result;
}

DiscreteSpace PerturbationSpace(int epsilon, int positions, int choices) {
  DiscreteSpace space;
  for (int i = 0; i < epsilon; ++i) {
    space.choice_counts.push_back(positions);
    space.choice_counts.push_back(choices);
  }
  return space;
}

PerturbationGenome UnflattenGenome(const Genome& flat) {
  PerturbationGenome genome;
  for (size_t i = 0; i + 1 < flat.size(); i += 2) genome.push_back({flat[i], flat[i + 1]});
  return genome;
}

Genome FlattenGenome(const PerturbationGenome& genome) {
  Genome flat;
  for (const PerturbationGene& g : genome) {
    flat.push_back(g.position);
    flat.push_back(g.choice);
  }
  return flat;
}

}  // namespace fcattack
