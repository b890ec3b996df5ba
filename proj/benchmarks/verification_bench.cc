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


#include <benchmark/benchmark.h>

#include "fcattack/retrieval.h"
#include "fcattack/synthetic.h"
#include "fcattack/verification.h"

namespace fcattack {
namespace {

const SyntheticCorpus& Corpus() {
  static const SyntheticCorpus corpus = GenerateSyntheticCorpus(SynthConfig{}, 7);
  return corpus;
}

void BM_Featurize(benchmark::State& state) {
  const PairFeaturizer featurizer(1u << 14, 1);
  const Claim& c = Corpus().eval[0];
  const std::string& evidence = Corpus().repo.SentenceText(Corpus().repo.AllSentenceRefs()[0]);
  for (auto _ : state) benchmark::DoNotOptimize(featurizer(c.text, evidence));
}
BENCHMARK(BM_Featurize);

void BM_Predict(benchmark::State& state) {
  const Index index = Index::Build(Corpus().repo);
  const Verifier verifier = TrainVerifier(Corpus().train, Corpus().repo, index, TrainingConfig{});
  const Claim& c = Corpus().eval[0];
  const std::string& evidence = Corpus().repo.SentenceText(Corpus().repo.AllSentenceRefs()[0]);
  for (auto _ : state) benchmark::DoNotOptimize(verifier.Predict(c.text, evidence));
}
BENCHMARK(BM_Predict);

void BM_Train(benchmark::State& state) {
  const Index index = Index::Build(Corpus().repo);
  for (auto _ : state) {
    benchmark::DoNotOptimize(TrainVerifier(Corpus().train, Corpus().repo, index, TrainingConfig{}));
  }
}
BENCHMARK(BM_Train)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace fcattack
