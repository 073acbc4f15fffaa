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

#include "qem/bitstring.h"

#include <algorithm>

#include "qem/error.h"

namespace qem {

BitString::BitString(size_t num_bits) : num_bits_(num_bits), words_(words_for_bits(num_bits), 0) {
}

BitString BitString::from_text(std::string_view text) {
    BitString result(text.size());
    for (size_t j = 0; j < text.size(); j++) {
        char c = text[j];
        if (c == '1') {
            result.set(j, true);
        } else if (c != '0') {
            throw ParseError("non-binary character '" + std::string(1, c) + "' in bit-string");
        }
    }
    return result;
}

BitString BitString::from_words(size_t num_bits, std::span<const uint64_t> words) {
    if (words.size() != words_for_bits(num_bits)) {
        throw DimensionError("word count does not match bit count");
    }
    BitString result;
    result.num_bits_ = num_bits;
    result.words_.assign(words.begin(), words.end());
    size_t tail = num_bits % BITS_PER_WORD;
    if (tail != 0) {
        result.words_.back() &= ~uint64_t{0} << (BITS_PER_WORD - tail);
    }
    return result;
}

void BitString::set(size_t j, bool value) {
    uint64_t mask = uint64_t{1} << (BITS_PER_WORD - 1 - j % BITS_PER_WORD);
    if (value) {
        words_[j / BITS_PER_WORD] |= mask;
    } else {
        words_[j / BITS_PER_WORD] &= ~mask;
    }
}

size_t BitString::popcount() const {
    size_t total = 0;
    for (uint64_t w : words_) {
        total += std::popcount(w);
    }
    return total;
}

std::string BitString::to_text() const {
    std::string out(num_bits_, '0');
    for (size_t j = 0; j < num_bits_; j++) {
        if (get(j)) {
            out[j] = '1';
        }
    }
    return out;
}

std::strong_ordering BitString::operator<=>(const BitString &other) const {
    // Shorter strings sort first; equal lengths compare word-wise (== text order).
    if (auto c = num_bits_ <=> other.num_bits_; c != 0) {
        return c;
    }
    return std::lexicographical_compare_three_way(
        words_.begin(), words_.end(), other.words_.begin(), other.words_.end());
}

size_t hamming_distance(const BitString &a, const BitString &b) {
    if (a.size() != b.size()) {
        throw DimensionError(
            "hamming distance between lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    return hamming_distance_words(a.words(), b.words());
}

size_t BitStringHash::operator()(const BitString &s) const {
    // splitmix64 finalizer folded over the words.
    uint64_t h = 0x9E3779B97F4A7C15ULL ^ s.size();
    for (uint64_t w : s.words()) {
        h ^= w + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h ^= h >> 30;
        h *= 0xBF58476D1CE4E5B9ULL;
        h ^= h >> 27;
        h *= 0x94D049BB133111EBULL;
        h ^= h >> 31;
    }
    return static_cast<size_t>(h);
}

}  // namespace qem
