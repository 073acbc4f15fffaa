// Copyright 2026 The qem-mix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <benchmark/benchmark.h>

#include "qem/depfilter.h"
#include "qem/em.h"
#include "qem/mixture.h"
#include "qem/synth.h"

namespace qem {
namespace {

ShotDataset clean_dataset(size_t n, size_t k, size_t shots) {
    GroundTruth truth = sample_ground_truth(n, k, 4);
    NoiseSpec noise{.p = 0.0, .eps = sample_flip_probabilities(n, 0.02, 0.1, 5), .depth_label = ""};
    return generate_shots(truth, noise, shots, 6);
}

void BM_EStep(benchmark::State &state) {
    size_t n = static_cast<size_t>(state.range(0));
    size_t k = static_cast<size_t>(state.range(1));
    ShotDataset data = clean_dataset(n, k, 10000);
    EmConfig config;
    config.k_max = k;
    MixtureModel model = initial_model(data, config);
    for (auto _ : state) {
        benchmark::DoNotOptimize(e_step_with_likelihood(data, model));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(data.num_shots() * k));
}
BENCHMARK(BM_EStep)->Args({12, 8})->Args({12, 16})->Args({128, 16})->Unit(benchmark::kMillisecond);

void BM_RunEm(benchmark::State &state) {
    GroundTruth truth = sample_ground_truth(12, 4, 7);
    NoiseSpec noise{.p = 0.85, .eps = sample_flip_probabilities(12, 0.02, 0.1, 8), .depth_label = ""};
    ShotDataset kept = filter_shots(generate_shots(truth, noise, 10000, 9), FilterConfig{}).kept;
    EmConfig config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_em(kept, config));
    }
}
BENCHMARK(BM_RunEm)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace qem
