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

#ifndef QEM_BITSTRING_H
#define QEM_BITSTRING_H

#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qem {

constexpr size_t BITS_PER_WORD = 64;

constexpr size_t words_for_bits(size_t n) {
    return (n + BITS_PER_WORD - 1) / BITS_PER_WORD;
}

/// A fixed-width vector of bits, packed into 64-bit words.
///
/// Bit `j` (0-based, leftmost in the text form) lives in word `j / 64` at
/// position `63 - j % 64`. With this layout, comparing the word vectors
/// orders bit-strings exactly like comparing their text forms, so sorted
/// containers of `BitString` are in lexicographic order. Padding bits past
/// `size()` are always zero.
class BitString {
   public:
    BitString() = default;
    explicit BitString(size_t num_bits);

    /// Parses a string over {'0', '1'}. Throws `ParseError` on anything else.
    static BitString from_text(std::string_view text);
    static BitString from_words(size_t num_bits, std::span<const uint64_t> words);

    size_t size() const {
        return num_bits_;
    }
    std::span<const uint64_t> words() const {
        return words_;
    }

    bool get(size_t j) const {
        return (words_[j / BITS_PER_WORD] >> (BITS_PER_WORD - 1 - j % BITS_PER_WORD)) & 1;
    }
    void set(size_t j, bool value);
    void flip(size_t j) {
        words_[j / BITS_PER_WORD] ^= uint64_t{1} << (BITS_PER_WORD - 1 - j % BITS_PER_WORD);
    }

    size_t popcount() const;
    std::string to_text() const;

    bool operator==(const BitString &other) const = default;
    std::strong_ordering operator<=>(const BitString &other) const;

   private:
    size_t num_bits_ = 0;
    std::vector<uint64_t> words_;
};

/// Number of differing positions. Throws `DimensionError` on a length mismatch.
size_t hamming_distance(const BitString &a, const BitString &b);

/// Unchecked kernel over packed words of equal length.
inline size_t hamming_distance_words(std::span<const uint64_t> a, std::span<const uint64_t> b) {
    size_t total = 0;
    for (size_t w = 0; w < a.size(); w++) {
        total += std::popcount(a[w] ^ b[w]);
    }
    return total;
}

struct BitStringHash {
    size_t operator()(const BitString &s) const;
};

}  // namespace qem

#endif
