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

#include <gtest/gtest.h>

#include <unordered_set>

#include "oracles.h"
#include "qem/error.h"
#include "qem/rng.h"

namespace qem {
namespace {

TEST(BitString, TextRoundTrip) {
    for (const char *text : {"0", "1", "0110", "1111111111111111111111111111111111111111111111111111111111111111",
                             "10000000000000000000000000000000000000000000000000000000000000001"}) {
        EXPECT_EQ(BitString::from_text(text).to_text(), text);
    }
}

TEST(BitString, MostSignificantQubitFirst) {
    BitString s = BitString::from_text("100");
    EXPECT_TRUE(s.get(0));
    EXPECT_FALSE(s.get(1));
    EXPECT_FALSE(s.get(2));
}

TEST(BitString, RejectsBadText) {
    EXPECT_EQ(BitString::from_text("").size(), 0u);
    EXPECT_THROW(BitString::from_text("01a"), ParseError);
}

TEST(BitString, OrderingMatchesTextOrder) {
    Rng rng(11);
    for (int trial = 0; trial < 500; trial++) {
        size_t n = 1 + rng.below(130);
        BitString a = oracle::random_string(n, rng);
        BitString b = oracle::random_string(n, rng);
        EXPECT_EQ(a < b, a.to_text() < b.to_text());
        EXPECT_EQ(a == b, a.to_text() == b.to_text());
    }
}

TEST(HammingDistance, Examples) {
    auto d = [](const char *a, const char *b) { return hamming_distance(BitString::from_text(a), BitString::from_text(b)); };
    EXPECT_EQ(d("000", "000"), 0u);
    EXPECT_EQ(d("101", "010"), 3u);
    EXPECT_EQ(d("1100", "1010"), 2u);
}

TEST(HammingDistance, LengthMismatchThrows) {
    EXPECT_THROW(hamming_distance(BitString::from_text("01"), BitString::from_text("011")), DimensionError);
}

TEST(HammingDistance, MatchesCharacterwiseCount) {
    Rng rng(3);
    for (int trial = 0; trial < 500; trial++) {
        size_t n = 1 + rng.below(200);
        BitString a = oracle::random_string(n, rng);
        BitString b = oracle::random_string(n, rng);
        EXPECT_EQ(hamming_distance(a, b), oracle::distance(a, b));
        EXPECT_EQ(hamming_distance(a, b), hamming_distance(b, a));
        EXPECT_EQ(hamming_distance(a, a), 0u);
    }
}

TEST(HammingDistance, TriangleInequality) {
    Rng rng(5);
    for (int trial = 0; trial < 500; trial++) {
        size_t n = 1 + rng.below(150);
        BitString a = oracle::random_string(n, rng);
        BitString b = oracle::random_string(n, rng);
        BitString c = oracle::random_string(n, rng);
        EXPECT_LE(hamming_distance(a, c), hamming_distance(a, b) + hamming_distance(b, c));
    }
}

TEST(HammingDistance, EqualsPopcountOfXor) {
    Rng rng(8);
    for (int trial = 0; trial < 200; trial++) {
        size_t n = 1 + rng.below(300);
        BitString a = oracle::random_string(n, rng);
        BitString b = oracle::random_string(n, rng);
        BitString x(n);
        for (size_t j = 0; j < n; j++) {
            x.set(j, a.get(j) != b.get(j));
        }
        EXPECT_EQ(hamming_distance(a, b), x.popcount());
    }
}

TEST(BitString, PaddingBitsStayZero) {
    BitString s(70);
    for (size_t j = 0; j < 70; j++) {
        s.flip(j);
    }
    EXPECT_EQ(s.popcount(), 70u);
    EXPECT_EQ(s.words()[1], ~uint64_t{0} << 58);
}

TEST(BitString, HashSeparatesDistinctStrings) {
    std::unordered_set<BitString, BitStringHash> set;
    for (int v = 0; v < 1024; v++) {
        BitString s(10);
        for (size_t j = 0; j < 10; j++) {
            s.set(j, (v >> j) & 1);
        }
        set.insert(s);
    }
    EXPECT_EQ(set.size(), 1024u);
}

}  // namespace
}  // namespace qem
