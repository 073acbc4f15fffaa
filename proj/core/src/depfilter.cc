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

#include "qem/depfilter.h"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <unordered_map>
#include <vector>

#include "parallel.h"
#include "qem/error.h"

namespace qem {

void FilterConfig::validate() const {
    if (!(eta > 0)) {
        throw DataError("eta must be positive");
    }
    if (!(z >= 0) || !std::isfinite(z)) {
        throw DataError("z must be finite and non-negative");
    }
    if (!(t_floor >= 1)) {
        throw DataError("t_floor must be at least 1");
    }
    if (threshold && !(*threshold >= 0)) {
        throw DataError("threshold override must be non-negative");
    }
}

SupportTable support_counts(const ShotDataset &dataset, size_t workers) {
    const auto &counts = dataset.counts();
    std::vector<const CountTable::value_type *> distinct;
    distinct.reserve(counts.size());
    std::unordered_map<BitString, uint64_t, BitStringHash> lookup;
    lookup.reserve(counts.size());
    for (const auto &entry : counts) {
        distinct.push_back(&entry);
        lookup.emplace(entry.first, entry.second);
    }

    size_t n = dataset.num_bits();
    std::vector<uint64_t> support(distinct.size());
    internal::parallel_for(distinct.size(), workers, [&](size_t begin, size_t end) {
        for (size_t u = begin; u < end; u++) {
            BitString probe = distinct[u]->first;
            uint64_t total = distinct[u]->second;
            for (size_t j = 0; j < n; j++) {
                probe.flip(j);
                if (auto it = lookup.find(probe); it != lookup.end()) {
                    total += it->second;
                }
                probe.flip(j);
            }
            support[u] = total;
        }
    });

    SupportTable result;
    for (size_t u = 0; u < distinct.size(); u++) {
        result.emplace_hint(result.end(), distinct[u]->first, support[u]);
    }
    return result;
}

double uniform_expected_count(size_t num_shots, size_t n) {
    return std::ldexp(static_cast<double>(num_shots), -static_cast<int>(n));
}

double compute_threshold(size_t num_shots, size_t n, const FilterConfig &config) {
    double mean = uniform_expected_count(num_shots, n) * static_cast<double>(n + 1);
    return std::max(config.t_floor, config.eta * mean + config.z * std::sqrt(mean));
}

FilterReport filter_shots(const ShotDataset &dataset, const FilterConfig &config, size_t workers) {
    config.validate();
    size_t num_shots = dataset.num_shots();
    size_t n = dataset.num_bits();

    FilterReport report{.kept = dataset, .removed_count = 0, .threshold_used = 0, .lambda = 0, .support = {}};
    report.lambda = uniform_expected_count(num_shots, n);
    report.threshold_used = config.threshold ? *config.threshold : compute_threshold(num_shots, n, config);
    report.support = support_counts(dataset, workers);

    std::unordered_map<BitString, bool, BitStringHash> keep;
    keep.reserve(report.support.size());
    for (const auto &[s, f] : report.support) {
        keep.emplace(s, static_cast<double>(f) >= report.threshold_used);
    }
    std::vector<size_t> kept_indices;
    for (size_t i = 0; i < num_shots; i++) {
        if (keep.at(dataset.shot(i))) {
            kept_indices.push_back(i);
        }
    }
    if (kept_indices.empty()) {
        throw AllFilteredError(
            "all " + std::to_string(num_shots) + " shots fall below the support threshold " +
            std::to_string(report.threshold_used) + "; lower eta, z or the threshold");
    }
    report.removed_count = num_shots - kept_indices.size();
    report.kept = dataset.select(kept_indices);
    return report;
}

std::string format_filter_report(const FilterReport &report, size_t input_shots) {
    nlohmann::ordered_json doc;
    doc["shots_in"] = input_shots;
    doc["shots_out"] = report.kept.num_shots();
    doc["removed"] = report.removed_count;
    doc["threshold"] = report.threshold_used;
    doc["lambda"] = report.lambda;
    doc["distinct_in"] = report.support.size();
    doc["distinct_out"] = report.kept.counts().size();
    return doc.dump();
}

}  // namespace qem
