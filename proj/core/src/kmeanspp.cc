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

#include <algorithm>
#include <limits>
#include <set>

#include "qem/em.h"
#include "qem/error.h"
#include "qem/rng.h"

namespace qem {

std::vector<BitString> kmeanspp_init(const ShotDataset &dataset, size_t num_centers, uint64_t seed) {
    const auto &counts = dataset.counts();
    if (counts.empty()) {
        throw EmptyDatasetError("k-means++ needs at least one shot");
    }
    std::vector<BitString> distinct;
    std::vector<uint64_t> mult;
    for (const auto &[s, c] : counts) {
        distinct.push_back(s);
        mult.push_back(c);
    }
    size_t n = dataset.num_bits();
    Rng rng(seed);

    // Draws index u with probability weight[u] / total using exact integers.
    auto draw = [&](const std::vector<uint64_t> &weight, uint64_t total) {
        uint64_t r = rng.below(total);
        for (size_t u = 0; u < weight.size(); u++) {
            if (r < weight[u]) {
                return u;
            }
            r -= weight[u];
        }
        return weight.size() - 1;
    };

    std::vector<BitString> centers;
    std::set<BitString> chosen;
    std::vector<uint64_t> nearest(distinct.size(), std::numeric_limits<uint64_t>::max());
    auto add_center = [&](const BitString &c) {
        centers.push_back(c);
        chosen.insert(c);
        for (size_t u = 0; u < distinct.size(); u++) {
            nearest[u] = std::min<uint64_t>(nearest[u], hamming_distance_words(distinct[u].words(), c.words()));
        }
    };

    if (num_centers > 0) {
        add_center(distinct[draw(mult, dataset.num_shots())]);
    }
    while (centers.size() < num_centers) {
        std::vector<uint64_t> weight(distinct.size());
        uint64_t total = 0;
        for (size_t u = 0; u < distinct.size(); u++) {
            weight[u] = mult[u] * nearest[u] * nearest[u];
            total += weight[u];
        }
        if (total == 0) {
            break;
        }
        add_center(distinct[draw(weight, total)]);
    }

    // Observed strings exhausted: fill with random strings, avoiding repeats
    // when the space allows it.
    std::vector<uint64_t> words(words_for_bits(n));
    while (centers.size() < num_centers) {
        BitString candidate;
        for (int attempt = 0; attempt < 64; attempt++) {
            for (auto &w : words) {
                w = rng.next();
            }
            candidate = BitString::from_words(n, words);
            if (!chosen.contains(candidate)) {
                break;
            }
        }
        centers.push_back(candidate);
        chosen.insert(candidate);
    }
    return centers;
}

}  // namespace qem
