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

#include "qem/mixture.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "parallel.h"
#include "qem/error.h"

namespace qem {

namespace {

void check_dataset_matches(const ShotDataset &dataset, const MixtureModel &model) {
    model.validate();
    if (dataset.num_bits() != model.num_bits()) {
        throw DimensionError(
            "model has " + std::to_string(model.num_bits()) + " bits but dataset has " +
            std::to_string(dataset.num_bits()));
    }
}

/// Per-bit terms of the component log-likelihood in the form
///   log P(y | x) = base + sum_{j : y_j != x_j} mismatch[j].
struct FlipLogTerms {
    explicit FlipLogTerms(std::span<const double> eps) : mismatch(eps.size()) {
        for (size_t j = 0; j < eps.size(); j++) {
            double log_keep = std::log1p(-eps[j]);
            base += log_keep;
            mismatch[j] = std::log(eps[j]) - log_keep;
        }
    }

    double evaluate(std::span<const uint64_t> y, std::span<const uint64_t> x) const {
        double total = base;
        for (size_t w = 0; w < y.size(); w++) {
            uint64_t diff = y[w] ^ x[w];
            while (diff) {
                int p = std::countr_zero(diff);
                total += mismatch[w * BITS_PER_WORD + (BITS_PER_WORD - 1 - p)];
                diff &= diff - 1;
            }
        }
        return total;
    }

    double base = 0;
    std::vector<double> mismatch;
};

}  // namespace

size_t MixtureModel::num_nonzero() const {
    return static_cast<size_t>(std::count_if(alpha.begin(), alpha.end(), [](double a) { return a > 0; }));
}

void MixtureModel::validate() const {
    size_t n = eps.size();
    if (n == 0) {
        throw DimensionError("model must have at least one bit");
    }
    if (centers.size() != alpha.size()) {
        throw DimensionError("model has " + std::to_string(centers.size()) + " centers but " +
                             std::to_string(alpha.size()) + " weights");
    }
    for (const auto &c : centers) {
        if (c.size() != n) {
            throw DimensionError("model center width differs from eps length");
        }
    }
    bool any = false;
    for (double a : alpha) {
        if (!(a >= 0) || !std::isfinite(a)) {
            throw InvalidModelError("mixing weights must be finite and non-negative");
        }
        any |= a > 0;
    }
    if (!any) {
        throw InvalidModelError("every mixing weight is zero");
    }
    for (double e : eps) {
        if (!(e > 0 && e <= 0.5)) {
            throw InvalidModelError("flip probability " + std::to_string(e) + " outside (0, 0.5]");
        }
    }
}

MixtureModel MixtureModel::nonzero_part() const {
    MixtureModel out;
    out.eps = eps;
    for (size_t k = 0; k < centers.size(); k++) {
        if (alpha[k] > 0) {
            out.centers.push_back(centers[k]);
            out.alpha.push_back(alpha[k]);
        }
    }
    return out;
}

std::vector<double> Responsibilities::column_sums() const {
    std::vector<double> sums(cols_, 0.0);
    for (size_t i = 0; i < rows_; i++) {
        for (size_t k = 0; k < cols_; k++) {
            sums[k] += data_[i * cols_ + k];
        }
    }
    return sums;
}

double log_component_likelihood(const BitString &y, const BitString &x, std::span<const double> eps) {
    if (y.size() != x.size() || y.size() != eps.size()) {
        throw DimensionError("log_component_likelihood: length mismatch");
    }
    double total = 0;
    for (size_t j = 0; j < y.size(); j++) {
        total += y.get(j) != x.get(j) ? std::log(eps[j]) : std::log1p(-eps[j]);
    }
    return total;
}

EStepResult e_step_with_likelihood(const ShotDataset &dataset, const MixtureModel &model, size_t workers) {
    check_dataset_matches(dataset, model);
    size_t num_shots = dataset.num_shots();
    size_t num_comp = model.num_components();

    FlipLogTerms terms(model.eps);
    std::vector<size_t> active;
    std::vector<double> log_alpha(num_comp, 0.0);
    for (size_t k = 0; k < num_comp; k++) {
        if (model.alpha[k] > 0) {
            active.push_back(k);
            log_alpha[k] = std::log(model.alpha[k]);
        }
    }

    EStepResult result{Responsibilities(num_shots, num_comp), 0.0};
    std::vector<double> row_loglik(num_shots);
    internal::parallel_for(num_shots, workers, [&](size_t begin, size_t end) {
        std::vector<double> scores(active.size());
        for (size_t i = begin; i < end; i++) {
            auto y = dataset.shot_words(i);
            double peak = -std::numeric_limits<double>::infinity();
            for (size_t a = 0; a < active.size(); a++) {
                size_t k = active[a];
                scores[a] = log_alpha[k] + terms.evaluate(y, model.centers[k].words());
                peak = std::max(peak, scores[a]);
            }
            double total = 0;
            for (auto &s : scores) {
                s = std::exp(s - peak);
                total += s;
            }
            auto row = result.w.row(i);
            for (size_t a = 0; a < active.size(); a++) {
                row[active[a]] = scores[a] / total;
            }
            row_loglik[i] = peak + std::log(total);
        }
    });
    // Reduced in shot order so the value does not depend on `workers`.
    for (double v : row_loglik) {
        result.log_likelihood += v;
    }
    return result;
}

Responsibilities e_step(const ShotDataset &dataset, const MixtureModel &model, size_t workers) {
    return e_step_with_likelihood(dataset, model, workers).w;
}

double log_likelihood(const ShotDataset &dataset, const MixtureModel &model, size_t workers) {
    return e_step_with_likelihood(dataset, model, workers).log_likelihood;
}

double mml_penalized(double log_lik, size_t num_shots, size_t n, std::span<const double> alpha) {
    double s = static_cast<double>(num_shots);
    double dim = static_cast<double>(n);
    double k_nz = 0;
    double weight_cost = 0;
    for (double a : alpha) {
        if (a > 0) {
            k_nz += 1;
            weight_cost += std::log(s * a / 12.0);
        }
    }
    return -(k_nz / 2.0) * std::log(s / 12.0) - (k_nz * dim + k_nz) / 2.0 + log_lik - (dim / 2.0) * weight_cost;
}

double mml_objective(const ShotDataset &dataset, const MixtureModel &model, size_t workers) {
    double ll = log_likelihood(dataset, model, workers);
    return mml_penalized(ll, dataset.num_shots(), dataset.num_bits(), model.alpha);
}

std::vector<double> m_step_alpha(const Responsibilities &w, size_t n) {
    std::vector<double> alpha = w.column_sums();
    double half = static_cast<double>(n) / 2.0;
    double total = 0;
    for (auto &a : alpha) {
        a = std::max(0.0, a - half);
        total += a;
    }
    if (total <= 0) {
        throw DegenerateModelError(
            "every component has responsibility mass <= n/2 = " + std::to_string(half) + "; all annihilated");
    }
    for (auto &a : alpha) {
        a /= total;
    }
    return alpha;
}

std::vector<double> m_step_alpha_plain(const Responsibilities &w) {
    std::vector<double> alpha = w.column_sums();
    double s = static_cast<double>(w.rows());
    for (auto &a : alpha) {
        a /= s;
    }
    return alpha;
}

std::vector<BitString> m_step_x(const ShotDataset &dataset, const Responsibilities &w, size_t workers) {
    if (w.rows() != dataset.num_shots()) {
        throw DimensionError("responsibility rows do not match shot count");
    }
    size_t n = dataset.num_bits();
    std::vector<BitString> centers(w.cols(), BitString(n));
    // Every vote is accumulated over shots in index order; multiplying by
    // +-1 is exact, so this matches the textbook sum bit for bit.
    internal::parallel_for(w.cols(), workers, [&](size_t begin, size_t end) {
        size_t span_k = end - begin;
        std::vector<double> vote(span_k * n, 0.0);
        std::vector<double> sign(n);
        for (size_t i = 0; i < dataset.num_shots(); i++) {
            for (size_t j = 0; j < n; j++) {
                sign[j] = dataset.bit(i, j) ? 1.0 : -1.0;
            }
            for (size_t k = begin; k < end; k++) {
                double wik = w(i, k);
                if (wik == 0) {
                    continue;
                }
                double *v = vote.data() + (k - begin) * n;
                for (size_t j = 0; j < n; j++) {
                    v[j] += wik * sign[j];
                }
            }
        }
        for (size_t k = begin; k < end; k++) {
            for (size_t j = 0; j < n; j++) {
                centers[k].set(j, vote[(k - begin) * n + j] >= 0.0);
            }
        }
    });
    return centers;
}

std::vector<double> m_step_eps(
    const ShotDataset &dataset,
    const Responsibilities &w,
    std::span<const BitString> centers,
    double clamp_lo,
    double clamp_gap,
    size_t workers) {
    if (w.rows() != dataset.num_shots() || w.cols() != centers.size()) {
        throw DimensionError("responsibilities do not match dataset and centers");
    }
    size_t n = dataset.num_bits();
    size_t num_words = dataset.words_per_shot();
    std::vector<double> mismatch(n, 0.0);
    // Workers own disjoint word ranges, and within a bit the terms are added
    // in (shot, component) order regardless of the split.
    internal::parallel_for(num_words, workers, [&](size_t word_begin, size_t word_end) {
        for (size_t i = 0; i < dataset.num_shots(); i++) {
            auto y = dataset.shot_words(i);
            for (size_t k = 0; k < centers.size(); k++) {
                double wik = w(i, k);
                if (wik == 0) {
                    continue;
                }
                auto x = centers[k].words();
                for (size_t wd = word_begin; wd < word_end; wd++) {
                    uint64_t diff = y[wd] ^ x[wd];
                    while (diff) {
                        int p = std::countl_zero(diff);
                        mismatch[wd * BITS_PER_WORD + p] += wik;
                        diff &= ~(uint64_t{1} << (BITS_PER_WORD - 1 - p));
                    }
                }
            }
        }
    });
    double s = static_cast<double>(dataset.num_shots());
    double hi = 0.5 - clamp_gap;
    for (auto &e : mismatch) {
        e = std::clamp(e / s, clamp_lo, hi);
    }
    return mismatch;
}

}  // namespace qem
