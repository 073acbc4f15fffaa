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

#ifndef QEM_HARNESS_H
#define QEM_HARNESS_H

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qem/depfilter.h"
#include "qem/em.h"
#include "qem/shot_dataset.h"

namespace qem {

struct PipelineOptions {
    FilterConfig filter;
    bool skip_filter = false;
    EmConfig em;
};

struct PipelineResult {
    std::optional<FilterReport> filter;
    EmReport em;
};

/// Depolarization filter (unless skipped) followed by model-selecting EM on
/// the surviving shots.
PipelineResult run_pipeline(const ShotDataset &dataset, const PipelineOptions &options);

/// One synthetic noise setting of a sweep grid: depolarizing probability and
/// the interval that per-bit flip probabilities are drawn from.
struct NoiseSetting {
    double p = 0.85;
    double eps_low = 0.02;
    double eps_high = 0.1;
    std::string depth_label;
};

/// A grid of synthetic experiments. Every (n, K, S, noise) cell is run
/// `repeats` times; with `subsample_points` each generated dataset is also
/// subsampled without replacement to each listed shot count.
///
/// JSON form (all keys optional except the grid lists):
///   {"seed": 1, "n": [10, 12], "k": [2, 4], "shots": [10000],
///    "noise": [{"p": 0.85, "eps_low": 0.02, "eps_high": 0.1}],
///    "repeats": 20, "subsample": [1000, 2500],
///    "filter": {"eta": 1, "z": 7, "t_floor": 2, "skip": false},
///    "em": {"k_min": 1, "k_max": 16, "delta": 1e-5, "max_iters": 500,
///           "eps_init": 0.25, "mml": true}}
struct SweepConfig {
    uint64_t seed = 1;
    std::vector<size_t> n_values;
    std::vector<size_t> k_values;
    std::vector<size_t> shot_values;
    std::vector<NoiseSetting> noise = {NoiseSetting{}};
    size_t repeats = 1;
    std::vector<size_t> subsample_points;
    FilterConfig filter;
    bool skip_filter = false;
    /// `seed` and `workers` are overridden per cell.
    EmConfig em;

    void validate() const;
};

SweepConfig parse_sweep_config(std::string_view text);

struct SweepRow {
    size_t n = 0;
    size_t k_true = 0;
    size_t s_total = 0;
    size_t s_used = 0;
    size_t noise_index = 0;
    size_t repeat = 0;
    uint64_t seed = 0;
    size_t k_hat = 0;
    std::optional<double> ber;
    bool k_error = true;
    std::optional<double> hellinger;
    double filter_kept_fraction = 0;
    size_t iterations = 0;
    double runtime_ms = 0;
    std::string error;
};

/// Seed of one repeat of one grid cell; independent of the rest of the grid.
uint64_t cell_seed(uint64_t master, size_t n, size_t k, size_t shots, size_t repeat);

/// Runs every cell; cells run on up to `jobs` threads. `on_row` sees rows in
/// grid order whatever the scheduling. Failures are recorded in the row.
std::vector<SweepRow> run_sweep(
    const SweepConfig &config, size_t jobs = 1, const std::function<void(const SweepRow &)> &on_row = {});

struct CellSummary {
    size_t n = 0;
    size_t k_true = 0;
    size_t s_used = 0;
    size_t noise_index = 0;
    size_t runs = 0;
    size_t k_errors = 0;
    size_t failures = 0;
    double p_k_error = 0;
    /// Mean over runs where K was estimated correctly; empty if there are none.
    std::optional<double> mean_ber;
    std::optional<double> mean_hellinger;
    double mean_kept_fraction = 0;
    double mean_runtime_ms = 0;
};

/// Per-cell means, sorted by (n, K, S used, noise index).
std::vector<CellSummary> aggregate(std::span<const SweepRow> rows);

/// Comma-separated rows with a header; excludes wall-clock timings so that
/// identical configurations give identical bytes.
std::string format_rows_csv(std::span<const SweepRow> rows);
std::string format_row_csv(const SweepRow &row);
std::string rows_csv_header();
/// Per-row wall-clock timings, keyed like the rows file.
std::string format_timings_csv(std::span<const SweepRow> rows);
/// JSON summary; runtime means are only included if `with_runtime`.
std::string format_summary(std::span<const CellSummary> cells, std::span<const SweepRow> rows, bool with_runtime);

}  // namespace qem

#endif
