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

#ifndef QEM_MIXTURE_H
#define QEM_MIXTURE_H

#include <span>
#include <vector>

#include "qem/bitstring.h"
#include "qem/shot_dataset.h"

namespace qem {

/// A Bernoulli bit-flip mixture: each shot is one of the `centers`, chosen
/// with probability `alpha`, with bit j flipped independently with
/// probability `eps[j]`. Components with alpha == 0 are annihilated and
/// take no part in any computation.
struct MixtureModel {
    std::vector<BitString> centers;
    std::vector<double> alpha;
    std::vector<double> eps;

    size_t num_bits() const {
        return eps.size();
    }
    size_t num_components() const {
        return centers.size();
    }
    /// Components with alpha > 0.
    size_t num_nonzero() const;
    /// Throws `DimensionError` on inconsistent sizes, `InvalidModelError` if
    /// every alpha is zero or any eps lies outside (0, 0.5].
    void validate() const;
    /// The model with annihilated components dropped, order preserved.
    MixtureModel nonzero_part() const;
};

/// Dense row-major S x K matrix of posterior memberships.
class Responsibilities {
   public:
    Responsibilities() = default;
    Responsibilities(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    }

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    double operator()(size_t i, size_t k) const {
        return data_[i * cols_ + k];
    }
    double &operator()(size_t i, size_t k) {
        return data_[i * cols_ + k];
    }
    std::span<const double> row(size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(size_t i) {
        return {data_.data() + i * cols_, cols_};
    }
    /// Column masses, each summed over rows in index order.
    std::vector<double> column_sums() const;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<double> data_;
};

/// log P(y | x, eps) = sum_j [ (y_j xor x_j) log eps_j + (1 - y_j xor x_j) log(1 - eps_j) ].
double log_component_likelihood(const BitString &y, const BitString &x, std::span<const double> eps);

/// sum_i log sum_k alpha_k P(y_i | x_k, eps), each inner sum in max-shifted log space.
double log_likelihood(const ShotDataset &dataset, const MixtureModel &model, size_t workers = 1);

/// The message-length penalized objective (to be maximized):
///   L - (K_nz/2) log(S/12) - (K_nz n + K_nz)/2 - (n/2) sum_{alpha_k>0} log(S alpha_k / 12).
double mml_objective(const ShotDataset &dataset, const MixtureModel &model, size_t workers = 1);
double mml_penalized(double log_lik, size_t num_shots, size_t n, std::span<const double> alpha);

struct EStepResult {
    Responsibilities w;
    double log_likelihood = 0;
};

/// Posterior memberships, plus the data log-likelihood under `model` that
/// falls out of the same normalization. Rows are exactly zero in annihilated
/// columns and sum to one.
EStepResult e_step_with_likelihood(const ShotDataset &dataset, const MixtureModel &model, size_t workers = 1);
Responsibilities e_step(const ShotDataset &dataset, const MixtureModel &model, size_t workers = 1);

/// Weight update with component annihilation:
///   alpha_k = max(0, m_k - n/2) / sum_l max(0, m_l - n/2),  m_k = sum_i W_ik.
/// Throws `DegenerateModelError` if every column is annihilated.
std::vector<double> m_step_alpha(const Responsibilities &w, size_t n);
/// Unpenalized weight update alpha_k = m_k / S.
std::vector<double> m_step_alpha_plain(const Responsibilities &w);

/// x_kj = H(sum_i W_ik (2 y_ij - 1)) with H(u) = 1 for u >= 0.
std::vector<BitString> m_step_x(const ShotDataset &dataset, const Responsibilities &w, size_t workers = 1);

/// eps_j = (1/S) sum_i sum_k W_ik (y_ij xor x_kj), clamped to [clamp_lo, 0.5 - clamp_gap].
std::vector<double> m_step_eps(
    const ShotDataset &dataset,
    const Responsibilities &w,
    std::span<const BitString> centers,
    double clamp_lo,
    double clamp_gap,
    size_t workers = 1);

}  // namespace qem

#endif
