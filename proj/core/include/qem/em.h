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

#ifndef QEM_EM_H
#define QEM_EM_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qem/mixture.h"
#include "qem/shot_dataset.h"

namespace qem {

struct EmConfig {
    size_t k_min = 1;
    size_t k_max = 16;
    /// Relative convergence threshold on the traced objective.
    double delta = 1e-5;
    size_t max_iters = 500;
    uint64_t seed = 0;
    double eps_init = 0.25;
    double eps_clamp_lo = 1e-6;
    double eps_clamp_gap = 1e-6;
    /// When false, run plain maximum-likelihood EM: weights are m_k / S and
    /// the traced objective is the unpenalized log-likelihood.
    bool mml_enabled = true;
    /// Threads for the E and M steps. Results do not depend on this value.
    size_t workers = 1;

    void validate() const;
};

struct TracePoint {
    size_t k_nonzero = 0;
    size_t iteration = 0;
    double objective = 0;
};

struct FixedKResult {
    MixtureModel model;
    std::vector<TracePoint> trace;
    /// Objective of `model`: penalized if MML is enabled, else plain.
    double objective = 0;
    double log_likelihood = 0;
    size_t iterations = 0;
    bool converged = false;
};

/// One pass of the outer loop: EM run to convergence from `k_start` live
/// components, ending with `k_end` after in-loop annihilation.
struct LevelRecord {
    size_t k_start = 0;
    size_t k_end = 0;
    size_t iterations = 0;
    bool converged = false;
    double mml = 0;
    /// Set when the level ended in a degenerate model.
    std::string failure;
};

struct EmReport {
    /// Best model, annihilated components removed.
    MixtureModel best;
    size_t k_hat = 0;
    double best_mml = 0;
    double best_log_likelihood = 0;
    std::vector<TracePoint> objective_trace;
    std::vector<LevelRecord> levels;
    size_t iterations_total = 0;
};

/// Count-weighted k-means++ seeding over the distinct observed strings with
/// squared Hamming distance. When every observed string is already a center,
/// the rest are uniform random strings. Deterministic given `seed`.
std::vector<BitString> kmeanspp_init(const ShotDataset &dataset, size_t num_centers, uint64_t seed);

/// k_max centers from k-means++, weights 1/k_max, every eps = eps_init.
MixtureModel initial_model(const ShotDataset &dataset, const EmConfig &config);

/// Alternates E-step, weight, center and flip-probability updates until the
/// objective changes by less than delta * |previous| or max_iters is hit.
/// Propagates `DegenerateModelError` if every component is annihilated.
FixedKResult run_em_fixed_k(const ShotDataset &dataset, const MixtureModel &init, const EmConfig &config);

/// The full model-selection loop. Starting from k_max components, each level
/// runs EM to convergence, scores the result by the penalized objective and
/// then annihilates the lightest surviving component, down to k_min. Returns
/// the highest-scoring model seen.
EmReport run_em(const ShotDataset &dataset, const EmConfig &config);

/// Model file: JSON with the recovered solutions, weights, flip
/// probabilities, k_hat, objective and iteration record.
std::string format_model(const EmReport &report, const EmConfig &config);
/// Reads the solutions, weights and flip probabilities back from a model file.
MixtureModel parse_model(std::string_view text);

}  // namespace qem

#endif
