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

#include "qem/synth.h"

#include <cmath>
#include <json.hpp>
#include <set>
#include <unordered_set>

#include "parallel.h"
#include "qem/error.h"
#include "qem/rng.h"

namespace qem {

namespace {

BitString random_bitstring(size_t n, Rng &rng) {
    std::vector<uint64_t> words(words_for_bits(n));
    for (auto &w : words) {
        w = rng.next();
    }
    return BitString::from_words(n, words);
}

BitString bitstring_from_index(size_t n, uint64_t index) {
    BitString s(n);
    for (size_t j = 0; j < n; j++) {
        s.set(n - 1 - j, (index >> j) & 1);
    }
    return s;
}

}  // namespace

void NoiseSpec::validate(size_t n) const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DataError("depolarizing probability must lie in [0, 1], got " + std::to_string(p));
    }
    if (eps.size() != n) {
        throw DimensionError("expected " + std::to_string(n) + " flip probabilities, got " + std::to_string(eps.size()));
    }
    for (double e : eps) {
        if (!(e >= 0.0 && e < 0.5)) {
            throw DataError("flip probabilities must lie in [0, 0.5), got " + std::to_string(e));
        }
    }
}

void GroundTruth::validate() const {
    if (solutions.empty()) {
        throw DataError("ground truth has no solutions");
    }
    if (weights.size() != solutions.size()) {
        throw DimensionError("ground truth has mismatched solution and weight counts");
    }
    size_t n = solutions.front().size();
    std::set<BitString> seen;
    for (const auto &s : solutions) {
        if (s.size() != n || n == 0) {
            throw DimensionError("ground-truth solutions have unequal or zero width");
        }
        if (!seen.insert(s).second) {
            throw DataError("duplicate ground-truth solution " + s.to_text());
        }
    }
    double total = 0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw DataError("ground-truth weights must be non-negative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DataError("ground-truth weights sum to " + std::to_string(total) + ", not 1");
    }
}

GroundTruth sample_ground_truth(size_t n, size_t k, uint64_t seed) {
    if (n == 0) {
        throw DimensionError("bit-strings must have at least one bit");
    }
    if (k == 0 || (n < 64 && k > (uint64_t{1} << n))) {
        throw InfeasibleError(
            "cannot draw " + std::to_string(k) + " distinct strings of " + std::to_string(n) + " bits");
    }
    Rng rng(seed);
    GroundTruth truth;
    truth.weights.assign(k, 1.0 / static_cast<double>(k));
    if (n <= 20 && 2 * k > (uint64_t{1} << n)) {
        // Dense request: partial Fisher-Yates over every index.
        std::vector<uint64_t> pool(uint64_t{1} << n);
        for (uint64_t i = 0; i < pool.size(); i++) {
            pool[i] = i;
        }
        for (size_t i = 0; i < k; i++) {
            size_t j = i + rng.below(pool.size() - i);
            std::swap(pool[i], pool[j]);
            truth.solutions.push_back(bitstring_from_index(n, pool[i]));
        }
        return truth;
    }
    std::unordered_set<BitString, BitStringHash> seen;
    while (truth.solutions.size() < k) {
        BitString s = random_bitstring(n, rng);
        if (seen.insert(s).second) {
            truth.solutions.push_back(std::move(s));
        }
    }
    return truth;
}

std::vector<double> sample_flip_probabilities(size_t n, double lo, double hi, uint64_t seed) {
    if (!(lo >= 0.0 && lo <= hi && hi <= 0.5)) {
        throw DataError("flip probability interval must satisfy 0 <= lo <= hi <= 0.5");
    }
    Rng rng(seed);
    std::vector<double> eps(n);
    for (auto &e : eps) {
        e = rng.uniform(lo, hi);
    }
    return eps;
}

ShotDataset generate_shots(
    const GroundTruth &truth, const NoiseSpec &noise, size_t num_shots, uint64_t seed, size_t workers) {
    truth.validate();
    size_t n = truth.num_bits();
    noise.validate(n);
    if (num_shots == 0) {
        throw EmptyDatasetError("shot count must be positive");
    }
    std::vector<double> cumulative(truth.weights.size());
    double acc = 0;
    for (size_t k = 0; k < truth.weights.size(); k++) {
        acc += truth.weights[k];
        cumulative[k] = acc;
    }

    std::vector<BitString> shots(num_shots);
    internal::parallel_for(num_shots, workers, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; i++) {
            Rng rng(derive_seed(seed, {i}));
            if (rng.bernoulli(noise.p)) {
                shots[i] = random_bitstring(n, rng);
                continue;
            }
            double u = rng.uniform() * acc;
            size_t k = 0;
            while (k + 1 < cumulative.size() && (u >= cumulative[k] || truth.weights[k] == 0.0)) {
                k++;
            }
            BitString s = truth.solutions[k];
            for (size_t j = 0; j < n; j++) {
                if (rng.bernoulli(noise.eps[j])) {
                    s.flip(j);
                }
            }
            shots[i] = std::move(s);
        }
    });
    return ShotDataset::from_shots(shots);
}

std::string format_truth(const TruthRecord &record) {
    nlohmann::ordered_json doc;
    doc["n"] = record.truth.num_bits();
    nlohmann::ordered_json solutions = nlohmann::ordered_json::array();
    for (const auto &s : record.truth.solutions) {
        solutions.push_back(s.to_text());
    }
    doc["solutions"] = solutions;
    doc["alpha"] = record.truth.weights;
    doc["p"] = record.noise.p;
    doc["eps"] = record.noise.eps;
    if (!record.noise.depth_label.empty()) {
        doc["depth_label"] = record.noise.depth_label;
    }
    if (record.seed) {
        doc["seed"] = *record.seed;
    }
    return doc.dump(2) + "\n";
}

TruthRecord parse_truth(std::string_view text) {
    TruthRecord record;
    try {
        auto doc = nlohmann::json::parse(text);
        for (const auto &s : doc.at("solutions")) {
            record.truth.solutions.push_back(BitString::from_text(s.get<std::string>()));
        }
        record.truth.weights = doc.at("alpha").get<std::vector<double>>();
        record.noise.p = doc.value("p", 0.0);
        record.noise.eps = doc.value("eps", std::vector<double>{});
        record.noise.depth_label = doc.value("depth_label", std::string{});
        if (doc.contains("seed")) {
            record.seed = doc["seed"].get<uint64_t>();
        }
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("invalid ground-truth file: ") + e.what());
    }
    record.truth.validate();
    return record;
}

}  // namespace qem
