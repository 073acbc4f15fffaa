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

#include "qem/shot_dataset.h"

#include <string>

#include "qem/error.h"

namespace qem {

ShotDataset::ShotDataset(size_t num_bits, std::vector<uint64_t> words)
    : num_bits_(num_bits), words_per_shot_(words_for_bits(num_bits)), words_(std::move(words)) {
    for (size_t i = 0; i < num_shots(); i++) {
        counts_[shot(i)]++;
    }
}

ShotDataset ShotDataset::from_shots(std::span<const BitString> shots) {
    if (shots.empty()) {
        throw EmptyDatasetError("dataset has no shots");
    }
    size_t n = shots.front().size();
    if (n == 0) {
        throw DimensionError("bit-strings must have at least one bit");
    }
    std::vector<uint64_t> words;
    words.reserve(shots.size() * words_for_bits(n));
    for (size_t i = 0; i < shots.size(); i++) {
        if (shots[i].size() != n) {
            throw DimensionError(
                "shot " + std::to_string(i) + " has " + std::to_string(shots[i].size()) + " bits, expected " +
                std::to_string(n));
        }
        auto w = shots[i].words();
        words.insert(words.end(), w.begin(), w.end());
    }
    return ShotDataset(n, std::move(words));
}

ShotDataset ShotDataset::from_counts(const CountTable &counts) {
    if (counts.empty()) {
        throw EmptyDatasetError("count table is empty");
    }
    size_t n = counts.begin()->first.size();
    if (n == 0) {
        throw DimensionError("bit-strings must have at least one bit");
    }
    std::vector<uint64_t> words;
    for (const auto &[key, count] : counts) {
        if (key.size() != n) {
            throw DimensionError("count table mixes widths " + std::to_string(n) + " and " + std::to_string(key.size()));
        }
        if (count == 0) {
            throw ParseError("count for " + key.to_text() + " must be positive");
        }
        for (uint64_t c = 0; c < count; c++) {
            words.insert(words.end(), key.words().begin(), key.words().end());
        }
    }
    return ShotDataset(n, std::move(words));
}

BitString ShotDataset::shot(size_t i) const {
    return BitString::from_words(num_bits_, shot_words(i));
}

ShotDataset ShotDataset::select(std::span<const size_t> indices) const {
    if (indices.empty()) {
        throw EmptyDatasetError("selection has no shots");
    }
    std::vector<uint64_t> words;
    words.reserve(indices.size() * words_per_shot_);
    for (size_t i : indices) {
        auto w = shot_words(i);
        words.insert(words.end(), w.begin(), w.end());
    }
    return ShotDataset(num_bits_, std::move(words));
}

}  // namespace qem
