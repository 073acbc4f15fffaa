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

#ifndef QEM_SHOT_DATASET_H
#define QEM_SHOT_DATASET_H

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qem/bitstring.h"

namespace qem {

using CountTable = std::map<BitString, uint64_t>;

/// An immutable, ordered collection of S >= 1 measured bit-strings of equal
/// width n >= 1, together with its table of distinct strings and counts.
///
/// Shots are stored contiguously, `words_per_shot()` words each, so kernels
/// can walk them without touching per-shot allocations.
class ShotDataset {
   public:
    /// Throws `EmptyDatasetError` on no shots, `DimensionError` on unequal or
    /// zero widths.
    static ShotDataset from_shots(std::span<const BitString> shots);
    /// Expands each key `count` times, keys in lexicographic order.
    static ShotDataset from_counts(const CountTable &counts);

    size_t num_bits() const {
        return num_bits_;
    }
    size_t num_shots() const {
        return words_.size() / words_per_shot_;
    }
    size_t words_per_shot() const {
        return words_per_shot_;
    }
    std::span<const uint64_t> shot_words(size_t i) const {
        return {words_.data() + i * words_per_shot_, words_per_shot_};
    }
    bool bit(size_t i, size_t j) const {
        return (words_[i * words_per_shot_ + j / BITS_PER_WORD] >> (BITS_PER_WORD - 1 - j % BITS_PER_WORD)) & 1;
    }
    BitString shot(size_t i) const;
    const CountTable &counts() const {
        return counts_;
    }

    /// The shots at `indices`, in the given order. Indices may repeat.
    ShotDataset select(std::span<const size_t> indices) const;

    bool operator==(const ShotDataset &other) const {
        return num_bits_ == other.num_bits_ && words_ == other.words_;
    }

   private:
    ShotDataset(size_t num_bits, std::vector<uint64_t> words);

    size_t num_bits_ = 0;
    size_t words_per_shot_ = 0;
    std::vector<uint64_t> words_;
    CountTable counts_;
};

}  // namespace qem

#endif
