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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.h"
#include "qem/error.h"
#include "qem/shot_io.h"

namespace qem {
namespace {

BitString bs(const char *text) {
    return BitString::from_text(text);
}

Responsibilities from_rows(const std::vector<std::vector<double>> &rows) {
    Responsibilities w(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); i++) {
        for (size_t k = 0; k < rows[i].size(); k++) {
            w(i, k) = rows[i][k];
        }
    }
    return w;
}

Responsibilities random_responsibilities(size_t rows, size_t cols, Rng &rng) {
    Responsibilities w(rows, cols);
    for (size_t i = 0; i < rows; i++) {
        double total = 0;
        for (size_t k = 0; k < cols; k++) {
            w(i, k) = rng.uniform();
            total += w(i, k);
        }
        for (size_t k = 0; k < cols; k++) {
            w(i, k) /= total;
        }
    }
    return w;
}

TEST(ComponentLikelihood, Examples) {
    std::vector<double> eps{0.25, 0.25};
    EXPECT_NEAR(log_component_likelihood(bs("01"), bs("01"), eps), 2 * std::log(0.75), 1e-12);
    EXPECT_NEAR(log_component_likelihood(bs("01"), bs("01"), eps), -0.575364, 1e-6);
    EXPECT_NEAR(log_component_likelihood(bs("01"), bs("10"), eps), -2.772589, 1e-6);
    EXPECT_DOUBLE_EQ(log_component_likelihood(bs("1"), bs("1"), std::vector<double>{0.1}), std::log(0.9));
    EXPECT_THROW(log_component_likelihood(bs("1"), bs("11"), eps), DimensionError);
}

TEST(LogLikelihood, ClosedForms) {
    ShotDataset d = parse_shots_text("10\n10\n10\n10\n10\n");
    MixtureModel one{{bs("10")}, {1.0}, {0.25, 0.25}};
    EXPECT_NEAR(log_likelihood(d, one), 5 * 2 * std::log(0.75), 1e-12);
    MixtureModel padded{{bs("10"), bs("01"), bs("11")}, {1.0, 0.0, 0.0}, {0.25, 0.25}};
    EXPECT_NEAR(log_likelihood(d, padded), log_likelihood(d, one), 1e-12);
}

TEST(LogLikelihood, RejectsInvalidModels) {
    ShotDataset d = parse_shots_text("10\n");
    EXPECT_THROW(log_likelihood(d, MixtureModel{{bs("10")}, {0.0}, {0.25, 0.25}}), InvalidModelError);
    EXPECT_THROW(log_likelihood(d, MixtureModel{{bs("10")}, {1.0}, {0.25, 0.6}}), InvalidModelError);
    EXPECT_THROW(log_likelihood(d, MixtureModel{{bs("100")}, {1.0}, {0.25, 0.25, 0.25}}), DimensionError);
}

TEST(LogLikelihood, WideStringsStayFinite) {
    Rng rng(1);
    ShotDataset d = oracle::random_dataset(256, 50, rng);
    MixtureModel m = oracle::random_model(256, 3, rng);
    EXPECT_TRUE(std::isfinite(log_likelihood(d, m)));
    Responsibilities w = e_step(d, m);
    for (size_t i = 0; i < w.rows(); i++) {
        double total = 0;
        for (double v : w.row(i)) {
            total += v;
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(MmlObjective, WorkedExample) {
    std::vector<double> alpha{1.0};
    double expected = -10 - 0.5 * std::log(100.0) - 1.5 - std::log(100.0);
    EXPECT_NEAR(mml_penalized(-10, 1200, 2, alpha), expected, 1e-12);
    EXPECT_NEAR(mml_penalized(-10, 1200, 2, alpha), -18.40776, 1e-5);
}

TEST(MmlObjective, ZeroWeightsCarryNoPenalty) {
    std::vector<double> a{0.5, 0.5};
    std::vector<double> b{0.5, 0.0, 0.5, 0.0};
    EXPECT_EQ(mml_penalized(-50, 1000, 8, a), mml_penalized(-50, 1000, 8, b));
}

TEST(EStep, SingleComponentIsCertain) {
    Rng rng(2);
    ShotDataset d = oracle::random_dataset(6, 40, rng);
    Responsibilities w = e_step(d, oracle::random_model(6, 1, rng));
    for (size_t i = 0; i < w.rows(); i++) {
        EXPECT_EQ(w(i, 0), 1.0);
    }
}

TEST(EStep, WorkedExample) {
    ShotDataset d = parse_shots_text("01\n");
    Responsibilities w = e_step(d, MixtureModel{{bs("00"), bs("11")}, {0.5, 0.5}, {0.1, 0.2}});
    EXPECT_NEAR(w(0, 0), 9.0 / 13.0, 1e-12);
    EXPECT_NEAR(w(0, 1), 4.0 / 13.0, 1e-12);
}

TEST(EStep, SymmetricCase) {
    ShotDataset d = parse_shots_text("0110\n");
    Responsibilities w = e_step(d, MixtureModel{{bs("0000"), bs("1111")}, {0.5, 0.5}, {0.1, 0.1, 0.1, 0.1}});
    EXPECT_DOUBLE_EQ(w(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(w(0, 1), 0.5);
}

TEST(EStep, ZeroWeightGivesZeroResponsibility) {
    Rng rng(3);
    ShotDataset d = oracle::random_dataset(5, 30, rng);
    MixtureModel m = oracle::random_model(5, 3, rng);
    m.alpha = {0.6, 0.0, 0.4};
    Responsibilities w = e_step(d, m);
    for (size_t i = 0; i < w.rows(); i++) {
        EXPECT_EQ(w(i, 1), 0.0);
    }
}

TEST(EStep, MatchesDirectProbabilities) {
    Rng rng(4);
    for (int trial = 0; trial < 100; trial++) {
        size_t n = 1 + rng.below(8);
        size_t k = 1 + rng.below(4);
        ShotDataset d = oracle::random_dataset(n, 1 + rng.below(100), rng);
        MixtureModel m = oracle::random_model(n, k, rng);
        auto expected = oracle::responsibilities(d, m);
        EStepResult got = e_step_with_likelihood(d, m);
        for (size_t i = 0; i < d.num_shots(); i++) {
            for (size_t c = 0; c < k; c++) {
                EXPECT_NEAR(got.w(i, c), expected[i][c], 1e-9);
            }
        }
        EXPECT_NEAR(got.log_likelihood, oracle::log_likelihood(d, m), 1e-9);
    }
}

TEST(EStep, IndependentOfWorkers) {
    Rng rng(5);
    ShotDataset d = oracle::random_dataset(100, 777, rng);
    MixtureModel m = oracle::random_model(100, 5, rng);
    EStepResult a = e_step_with_likelihood(d, m, 1);
    EStepResult b = e_step_with_likelihood(d, m, 4);
    EXPECT_EQ(a.log_likelihood, b.log_likelihood);
    for (size_t i = 0; i < d.num_shots(); i++) {
        for (size_t k = 0; k < 5; k++) {
            ASSERT_EQ(a.w(i, k), b.w(i, k));
        }
    }
}

TEST(MStepAlpha, WorkedExample) {
    // Column sums (3, 1) over S = 4, n = 2.
    Responsibilities w = from_rows({{1, 0}, {1, 0}, {0.5, 0.5}, {0.5, 0.5}});
    EXPECT_EQ(m_step_alpha(w, 2), (std::vector<double>{1.0, 0.0}));
}

TEST(MStepAlpha, EqualColumnsEqualWeights) {
    Responsibilities w = from_rows({{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}});
    EXPECT_EQ(m_step_alpha(w, 2), (std::vector<double>{0.5, 0.5}));
}

TEST(MStepAlpha, MassAtOrBelowHalfNIsAnnihilated) {
    // Column masses (6, 2, 2) with n = 4: the boundary columns vanish.
    Responsibilities w = from_rows({{1, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 0, 0},
                                    {0, 1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 1}});
    EXPECT_EQ(m_step_alpha(w, 4), (std::vector<double>{1.0, 0.0, 0.0}));
    EXPECT_THROW(m_step_alpha(w, 12), DegenerateModelError);
}

TEST(MStepAlpha, MatchesNaiveTranscription) {
    Rng rng(6);
    for (int trial = 0; trial < 100; trial++) {
        size_t s = 1 + rng.below(200);
        size_t k = 1 + rng.below(5);
        size_t n = 1 + rng.below(10);
        Responsibilities w = random_responsibilities(s, k, rng);
        std::vector<double> expected = oracle::alpha_update(w, n);
        bool any = false;
        for (double v : expected) {
            any |= v > 0;
        }
        if (!any) {
            EXPECT_THROW(m_step_alpha(w, n), DegenerateModelError);
            continue;
        }
        std::vector<double> got = m_step_alpha(w, n);
        double total = 0;
        for (size_t c = 0; c < k; c++) {
            EXPECT_NEAR(got[c], expected[c], 1e-12);
            EXPECT_GE(got[c], 0.0);
            total += got[c];
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(MStepAlphaPlain, ColumnMeans) {
    Responsibilities w = from_rows({{1, 0}, {0.25, 0.75}});
    EXPECT_EQ(m_step_alpha_plain(w), (std::vector<double>{0.625, 0.375}));
}

TEST(MStepX, UnanimousShots) {
    ShotDataset d = parse_shots_text("1011\n1011\n1011\n");
    Responsibilities w = from_rows({{1, 0}, {1, 0}, {1, 0}});
    EXPECT_EQ(m_step_x(d, w)[0], bs("1011"));
}

TEST(MStepX, WorkedExampleAndTie) {
    ShotDataset d = parse_shots_text("1\n0\n1\n");
    EXPECT_EQ(m_step_x(d, from_rows({{1}, {1}, {0.5}}))[0], bs("1"));
    // 1 - 1 + 0 = 0 exactly: the Heaviside convention gives 1.
    EXPECT_EQ(m_step_x(d, from_rows({{1}, {1}, {0}}))[0], bs("1"));
    ShotDataset e = parse_shots_text("0\n1\n");
    EXPECT_EQ(m_step_x(e, from_rows({{0.5}, {0.5}}))[0], bs("1"));
    EXPECT_EQ(m_step_x(e, from_rows({{0.75}, {0.25}}))[0], bs("0"));
}

TEST(MStepX, MatchesHeavisideAndArgminForms) {
    Rng rng(7);
    for (int trial = 0; trial < 100; trial++) {
        size_t n = 1 + rng.below(70);
        size_t k = 1 + rng.below(4);
        ShotDataset d = oracle::random_dataset(n, 1 + rng.below(60), rng);
        Responsibilities w = random_responsibilities(d.num_shots(), k, rng);
        auto got = m_step_x(d, w, 1 + rng.below(3));
        EXPECT_EQ(got, oracle::center_update(d, w));
        EXPECT_EQ(got, oracle::center_update_argmin(d, w));
    }
}

TEST(MStepX, ExactTiesFromDyadicWeights) {
    Rng rng(8);
    for (int trial = 0; trial < 100; trial++) {
        size_t n = 1 + rng.below(6);
        ShotDataset d = oracle::random_dataset(n, 2 * (1 + rng.below(4)), rng);
        Responsibilities w(d.num_shots(), 2);
        for (size_t i = 0; i < d.num_shots(); i++) {
            double v = static_cast<double>(rng.below(5)) / 4.0;
            w(i, 0) = v;
            w(i, 1) = 1 - v;
        }
        EXPECT_EQ(m_step_x(d, w), oracle::center_update(d, w));
    }
}

TEST(MStepEps, SingleComponentIsMismatchFraction) {
    ShotDataset d = parse_shots_text("00\n00\n01\n10\n");
    Responsibilities w = from_rows({{1}, {1}, {1}, {1}});
    EXPECT_EQ(m_step_eps(d, w, std::vector<BitString>{bs("00")}, 1e-6, 1e-6), (std::vector<double>{0.25, 0.25}));
}

TEST(MStepEps, PerfectFitClampsLow) {
    ShotDataset d = parse_shots_text("00\n11\n");
    Responsibilities w = from_rows({{1, 0}, {0, 1}});
    EXPECT_EQ(m_step_eps(d, w, std::vector<BitString>{bs("00"), bs("11")}, 1e-6, 1e-6),
              (std::vector<double>{1e-6, 1e-6}));
}

TEST(MStepEps, ClampsHigh) {
    ShotDataset d = parse_shots_text("11\n11\n");
    Responsibilities w = from_rows({{1}, {1}});
    EXPECT_EQ(m_step_eps(d, w, std::vector<BitString>{bs("00")}, 1e-6, 1e-6),
              (std::vector<double>{0.5 - 1e-6, 0.5 - 1e-6}));
}

TEST(MStepEps, MatchesNaiveTranscription) {
    Rng rng(9);
    for (int trial = 0; trial < 100; trial++) {
        size_t n = 1 + rng.below(140);
        size_t k = 1 + rng.below(4);
        ShotDataset d = oracle::random_dataset(n, 1 + rng.below(60), rng);
        Responsibilities w = random_responsibilities(d.num_shots(), k, rng);
        std::vector<BitString> centers;
        for (size_t c = 0; c < k; c++) {
            centers.push_back(oracle::random_string(n, rng));
        }
        auto got = m_step_eps(d, w, centers, 1e-6, 1e-6, 1 + rng.below(3));
        auto expected = oracle::eps_update(d, w, centers, 1e-6, 1e-6);
        for (size_t j = 0; j < n; j++) {
            EXPECT_NEAR(got[j], expected[j], 1e-12);
        }
    }
}

}  // namespace
}  // namespace qem
