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

#ifndef QEM_DEPFILTER_H
#define QEM_DEPFILTER_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "qem/shot_dataset.h"

namespace qem {

/// Depolarization filter settings.
///
/// With `m = lambda * (n + 1)` the expected support of a string under uniform
/// noise (`lambda = S / 2^n`), the support threshold is
///   max(t_floor, eta * m + z * sqrt(m)).
/// `z = 0` gives the plain multiplicative rule `eta * lambda * (n + 1)`; the
/// default `eta = 1, z = 7` sits seven Poisson standard deviations above the
/// uniform mean. `threshold`, when set, overrides the formula.
struct FilterConfig {
    double eta = 1.0;
    double z = 7.0;
    double t_floor = 2.0;
    std::optional<double> threshold;

    void validate() const;
};

using SupportTable = std::map<BitString, uint64_t>;

struct FilterReport {
    ShotDataset kept;
    uint64_t removed_count = 0;
    double threshold_used = 0;
    /// Expected per-string count under uniform noise, S / 2^n.
    double lambda = 0;
    SupportTable support;
};

/// For each distinct observed string x: its count plus the counts of every
/// observed string at Hamming distance 1. O(U * n) table lookups.
SupportTable support_counts(const ShotDataset &dataset, size_t workers = 1);

/// S / 2^n, computed without overflowing for large n.
double uniform_expected_count(size_t num_shots, size_t n);

double compute_threshold(size_t num_shots, size_t n, const FilterConfig &config);

/// Keeps every shot whose string has support >= the threshold, in original
/// order. Throws `AllFilteredError` if nothing survives.
FilterReport filter_shots(const ShotDataset &dataset, const FilterConfig &config, size_t workers = 1);

/// The report as a single-line JSON object (S_in, S_out, removed, threshold,
/// lambda, distinct counts).
std::string format_filter_report(const FilterReport &report, size_t input_shots);

}  // namespace qem

#endif
