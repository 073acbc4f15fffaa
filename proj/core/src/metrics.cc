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

#include "qem/metrics.h"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <tuple>

#include "qem/error.h"

namespace qem {

EvalResult bit_error_rate(std::span<const BitString> truth, std::span<const BitString> estimate, size_t n) {
    if (truth.empty()) {
        throw DataError("bit error rate needs at least one true string");
    }
    for (const auto &s : truth) {
        if (s.size() != n) {
            throw DimensionError("true string width differs from n");
        }
    }
    for (const auto &s : estimate) {
        if (s.size() != n) {
            throw DimensionError("estimated string width differs from n");
        }
    }

    // Sorting every pair once by (distance, truth, estimate) and taking pairs
    // whose ends are both free picks the same sequence as repeatedly
    // searching for the global minimum.
    std::vector<MatchedPair> pairs;
    pairs.reserve(truth.size() * estimate.size());
    for (size_t t = 0; t < truth.size(); t++) {
        for (size_t e = 0; e < estimate.size(); e++) {
            pairs.push_back({t, e, hamming_distance(truth[t], estimate[e])});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [&](const MatchedPair &a, const MatchedPair &b) {
        return std::forward_as_tuple(a.distance, truth[a.truth_index], estimate[a.estimate_index], a.truth_index,
                                     a.estimate_index) <
               std::forward_as_tuple(b.distance, truth[b.truth_index], estimate[b.estimate_index], b.truth_index,
                                     b.estimate_index);
    });

    EvalResult result;
    result.n = n;
    result.k_true = truth.size();
    result.k_hat = estimate.size();
    result.k_correct = result.k_true == result.k_hat;
    std::vector<bool> truth_used(truth.size()), estimate_used(estimate.size());
    size_t limit = std::min(truth.size(), estimate.size());
    size_t total = 0;
    for (const auto &p : pairs) {
        if (result.matching.size() == limit) {
            break;
        }
        if (truth_used[p.truth_index] || estimate_used[p.estimate_index]) {
            continue;
        }
        truth_used[p.truth_index] = true;
        estimate_used[p.estimate_index] = true;
        result.matching.push_back(p);
        total += p.distance;
    }
    result.ber = static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(truth.size()));
    return result;
}

double k_error_rate(std::span<const std::pair<size_t, size_t>> runs) {
    if (runs.empty()) {
        throw DataError("k error rate needs at least one run");
    }
    size_t wrong = 0;
    for (const auto &[k_true, k_hat] : runs) {
        wrong += k_true != k_hat;
    }
    return static_cast<double>(wrong) / static_cast<double>(runs.size());
}

double hellinger_fidelity(const Distribution &p, const Distribution &q) {
    for (const Distribution *d : {&p, &q}) {
        double total = 0;
        for (const auto &[x, v] : *d) {
            if (!(v >= 0)) {
                throw NormalizationError("distribution has a negative or NaN probability");
            }
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw NormalizationError("distribution sums to " + std::to_string(total) + ", not 1");
        }
    }
    // Only the intersection contributes; walk it in key order from both sides.
    double overlap = 0;
    auto a = p.begin();
    auto b = q.begin();
    while (a != p.end() && b != q.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            overlap += std::sqrt(a->second * b->second);
            ++a;
            ++b;
        }
    }
    return std::clamp(overlap * overlap, 0.0, 1.0);
}

Distribution model_to_distribution(const MixtureModel &model) {
    Distribution d;
    for (size_t k = 0; k < model.centers.size(); k++) {
        if (model.alpha[k] > 0) {
            d[model.centers[k]] += model.alpha[k];
        }
    }
    return d;
}

Distribution empirical_distribution(const ShotDataset &dataset) {
    Distribution d;
    double s = static_cast<double>(dataset.num_shots());
    for (const auto &[x, c] : dataset.counts()) {
        d.emplace_hint(d.end(), x, static_cast<double>(c) / s);
    }
    return d;
}

std::string format_eval(const EvalResult &result) {
    nlohmann::ordered_json doc;
    doc["n"] = result.n;
    doc["ber"] = result.ber;
    doc["k_true"] = result.k_true;
    doc["k_hat"] = result.k_hat;
    doc["k_correct"] = result.k_correct;
    nlohmann::ordered_json matching = nlohmann::ordered_json::array();
    for (const auto &m : result.matching) {
        matching.push_back({m.truth_index, m.estimate_index, m.distance});
    }
    doc["matching"] = matching;
    if (result.hellinger) {
        doc["hellinger"] = *result.hellinger;
    } else {
        doc["hellinger"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

}  // namespace qem
