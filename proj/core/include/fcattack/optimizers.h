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

#ifndef FCATTACK_OPTIMIZERS_H_
#define FCATTACK_OPTIMIZERS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace fcattack {

struct SearchBudget {
  int population_size = 32;
  int iterations = 3;
  uint64_t seed = 0;
  int64_t max_objective_calls = 100000;
};

// Population 20, 10 generations.
SearchBudget DefaultGeneticBudget(uint64_t seed = 0);
// Population 32, 3 iterations.
SearchBudget DefaultEvolutionBudget(uint64_t seed = 0);

// Candidate state: one integer choice per slot.
using Genome = std::vector<int>;

struct SearchResult {
  Genome best;
  double best_value = 0.0;
  // True when some evaluated state strictly beat the starting point (GA) or
  // always true once anything was evaluated (DE).
  bool improved = false;
  int64_t objective_calls = 0;
  // Best-so-far after each generation / iteration (index 0 = initial).
  std::vector<double> trace;
};

struct GeneticProblem {
  Genome initial;
  // Candidate states reachable from `state` by one mutation.
  std::function<std::vector<Genome>(const Genome&)> neighbors;
  // Maximised. Must be pure; results are cached per distinct genome.
  std::function<double(const Genome&)> fitness;
  // Stop as soon as the best fitness reaches this value.
  std::optional<double> target_fitness;
  // Neighbors sampled per mutation; the fittest one is kept.
  int mutation_samples = 4;
};

// Population search: the first generation is drawn from the neighbors of
// `initial` (all of them when they fit); parents are chosen by a softmax over
// fitness, children take each slot from either parent and are then mutated.
// The best individual survives each generation. Returns the argmax over every
// evaluated state, keeping `initial` unless something strictly improves on it.
SearchResult GeneticSearch(const GeneticProblem& problem, const SearchBudget& budget);

struct DiscreteSpace {
  // Slot i takes values 0 .. choice_counts[i] - 1.
  std::vector<int> choice_counts;

  uint64_t StateCount() const;
};

struct EvolutionParameters {
  double differential_weight = 0.8;
  double crossover_rate = 0.9;
};

// rand/1/bin differential evolution on the continuous relaxation of `space`;
// vectors are rounded to the nearest valid choice before evaluation.
// Minimises `objective` and returns the best genome evaluated.
SearchResult DifferentialEvolution(const DiscreteSpace& space,
                                   const std::function<double(const Genome&)>& objective,
                                   const SearchBudget& budget,
                                   const EvolutionParameters& params = {});

// A perturbation genome of `epsilon` (position, choice) genes, flattened as
// [p0, c0, p1, c1, ...] for the optimizers.
struct PerturbationGene {
  int position = 0;
  int choice = 0;

  bool operator==(const PerturbationGene&) const = default;
};
using PerturbationGenome = std::vector<PerturbationGene>;

DiscreteSpace PerturbationSpace(int epsilon, int positions, int choices);
PerturbationGenome UnflattenGenome(const Genome& flat);
Genome FlattenGenome(const PerturbationGenome& genome);

}  // namespace fcattack

#endif  // FCATTACK_OPTIMIZERS_H_
