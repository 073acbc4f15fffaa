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

#ifndef QEM_SYNTH_H
#define QEM_SYNTH_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qem/bitstring.h"
#include "qem/shot_dataset.h"

namespace qem {

/// Measurement-level noise: a shot is replaced by a uniform random string
/// with probability `p`; otherwise bit j of the true output flips
/// independently with probability `eps[j]`.
struct NoiseSpec {
    double p = 0.0;
    std::vector<double> eps;
    /// Free-form run metadata (e.g. circuit depth). Never affects sampling.
    std::string depth_label;

    /// Throws `DataError` unless 0 <= p <= 1, eps has n entries in [0, 0.5).
    void validate(size_t n) const;
};

struct GroundTruth {
    std::vector<BitString> solutions;
    std::vector<double> weights;

    size_t num_bits() const {
        return solutions.empty() ? 0 : solutions.front().size();
    }
    /// Throws unless solutions are non-empty, equal-width and distinct, and
    /// weights are a probability vector (sum 1 within 1e-12).
    void validate() const;
};

/// K distinct uniform random strings with equal weights 1/K.
/// Throws `InfeasibleError` if K > 2^n or K == 0.
GroundTruth sample_ground_truth(size_t n, size_t k, uint64_t seed);

/// n flip probabilities drawn independently and uniformly from [lo, hi).
std::vector<double> sample_flip_probabilities(size_t n, double lo, double hi, uint64_t seed);

/// Draws `num_shots` shots. Shot i uses its own stream derived from
/// (seed, i), so the output does not depend on `workers`.
ShotDataset generate_shots(
    const GroundTruth &truth, const NoiseSpec &noise, size_t num_shots, uint64_t seed, size_t workers = 1);

/// Ground truth plus the noise that produced a dataset; the sidecar written
/// next to generated data for later evaluation.
struct TruthRecord {
    GroundTruth truth;
    NoiseSpec noise;
    std::optional<uint64_t> seed;
};

std::string format_truth(const TruthRecord &record);
TruthRecord parse_truth(std::string_view text);

}  // namespace qem

#endif
