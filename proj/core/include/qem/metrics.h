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

#ifndef QEM_METRICS_H
#define QEM_METRICS_H

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qem/bitstring.h"
#include "qem/mixture.h"
#include "qem/shot_dataset.h"

namespace qem {

struct MatchedPair {
    size_t truth_index = 0;
    size_t estimate_index = 0;
    size_t distance = 0;
};

struct EvalResult {
    size_t n = 0;
    double ber = 0;
    size_t k_true = 0;
    size_t k_hat = 0;
    bool k_correct = false;
    std::vector<MatchedPair> matching;
    std::optional<double> hellinger;
};

/// Greedy Hamming matching: repeatedly pair the closest unmatched (truth,
/// estimate) strings, ties broken by the truth string then the estimate
/// string in lexicographic order, until either side runs out.
/// BER = total matched distance / (n * |truth|). A size mismatch shows up in
/// `k_correct`, not in the BER.
EvalResult bit_error_rate(std::span<const BitString> truth, std::span<const BitString> estimate, size_t n);

/// Fraction of (k_true, k_hat) pairs that disagree. Throws on an empty list.
double k_error_rate(std::span<const std::pair<size_t, size_t>> runs);

using Distribution = std::map<BitString, double>;

/// (sum_x sqrt(p(x) q(x)))^2 over the union of supports. Throws
/// `NormalizationError` unless both sum to 1 within 1e-9.
double hellinger_fidelity(const Distribution &p, const Distribution &q);

/// Point masses alpha_k at each center x_k.
Distribution model_to_distribution(const MixtureModel &model);
Distribution empirical_distribution(const ShotDataset &dataset);

std::string format_eval(const EvalResult &result);

}  // namespace qem

#endif
