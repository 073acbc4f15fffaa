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

#include "qem/harness.h"

#include <gtest/gtest.h>

#include "qem/error.h"

namespace qem {
namespace {

SweepConfig small_grid() {
    SweepConfig c;
    c.seed = 3;
    c.n_values = {8};
    c.k_values = {2, 3};
    c.shot_values = {2000};
    c.noise = {NoiseSetting{.p = 0.5, .eps_low = 0.02, .eps_high = 0.08, .depth_label = ""}};
    c.repeats = 2;
    c.subsample_points = {500, 2000};
    c.em.k_max = 6;
    return c;
}

TEST(SweepConfig, ParsesJson) {
    SweepConfig c = parse_sweep_config(R"({
        "seed": 9, "n": [10, 12], "k": [2], "shots": [5000],
        "noise": [{"p": 0.8, "eps_low": 0.01, "eps_high": 0.05, "depth_label": "D3"}],
        "repeats": 4, "subsample": [1000],
        "filter": {"eta": 1.5, "z": 0, "t_floor": 3},
        "em": {"k_max": 10, "delta": 1e-6, "mml": false}})");
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.n_values, (std::vector<size_t>{10, 12}));
    EXPECT_EQ(c.noise.at(0).p, 0.8);
    EXPECT_EQ(c.noise.at(0).depth_label, "D3");
    EXPECT_EQ(c.repeats, 4u);
    EXPECT_EQ(c.subsample_points, (std::vector<size_t>{1000}));
    EXPECT_EQ(c.filter.eta, 1.5);
    EXPECT_EQ(c.filter.z, 0.0);
    EXPECT_EQ(c.filter.t_floor, 3.0);
    EXPECT_EQ(c.em.k_max, 10u);
    EXPECT_EQ(c.em.delta, 1e-6);
    EXPECT_FALSE(c.em.mml_enabled);
}

TEST(SweepConfig, RejectsBadGrids) {
    EXPECT_THROW(parse_sweep_config("{"), ParseError);
    EXPECT_THROW(parse_sweep_config(R"({"n": [10], "k": [2], "shots": [100], "subsample": [200]})"), DataError);
    EXPECT_THROW(parse_sweep_config(R"({"n": [10], "k": [2], "shots": [100], "repeats": 0})"), DataError);
    EXPECT_THROW(parse_sweep_config(R"({"n": [], "k": [2], "shots": [100]})"), DataError);
}

TEST(CellSeed, IndependentOfOtherCells) {
    EXPECT_EQ(cell_seed(1, 10, 2, 10000, 3), cell_seed(1, 10, 2, 10000, 3));
    EXPECT_NE(cell_seed(1, 10, 2, 10000, 3), cell_seed(1, 10, 2, 10000, 4));
    EXPECT_NE(cell_seed(1, 10, 2, 10000, 3), cell_seed(2, 10, 2, 10000, 3));

    SweepConfig narrow = small_grid();
    narrow.k_values = {3};
    auto narrow_rows = run_sweep(narrow);
    auto wide_rows = run_sweep(small_grid());
    std::vector<SweepRow> k3;
    for (const auto &r : wide_rows) {
        if (r.k_true == 3) {
            k3.push_back(r);
        }
    }
    EXPECT_EQ(format_rows_csv(k3), format_rows_csv(narrow_rows));
}

TEST(RunSweep, NoiselessSingleCell) {
    SweepConfig c;
    c.n_values = {6};
    c.k_values = {2};
    c.shot_values = {300};
    c.noise = {NoiseSetting{.p = 0, .eps_low = 0, .eps_high = 0, .depth_label = ""}};
    c.em.k_max = 4;
    auto rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].error, "");
    EXPECT_FALSE(rows[0].k_error);
    EXPECT_EQ(rows[0].k_hat, 2u);
    EXPECT_EQ(rows[0].ber, std::optional<double>(0.0));
    EXPECT_EQ(rows[0].filter_kept_fraction, 1.0);
}

TEST(RunSweep, RowsInGridOrderWhateverTheJobCount) {
    SweepConfig c = small_grid();
    std::vector<SweepRow> streamed;
    auto rows = run_sweep(c, 3, [&](const SweepRow &r) { streamed.push_back(r); });
    ASSERT_EQ(rows.size(), 2u * 2u * 2u);
    EXPECT_EQ(format_rows_csv(rows), format_rows_csv(streamed));
    EXPECT_EQ(format_rows_csv(rows), format_rows_csv(run_sweep(c, 1)));
    EXPECT_EQ(rows[0].k_true, 2u);
    EXPECT_EQ(rows[0].repeat, 0u);
    EXPECT_EQ(rows[0].s_used, 500u);
    EXPECT_EQ(rows[1].s_used, 2000u);
    EXPECT_EQ(rows[2].repeat, 1u);
    EXPECT_EQ(rows[4].k_true, 3u);
}

TEST(RunSweep, FailuresAreRecordedNotThrown) {
    SweepConfig c;
    c.n_values = {2};
    c.k_values = {5};
    c.shot_values = {100};
    auto rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_TRUE(rows[0].k_error);
    EXPECT_NE(rows[0].error.find("distinct strings"), std::string::npos) << rows[0].error;
}

SweepRow row(size_t k_true, size_t k_hat, double ber) {
    SweepRow r;
    r.n = 10;
    r.k_true = k_true;
    r.s_total = r.s_used = 10000;
    r.k_hat = k_hat;
    r.k_error = k_hat != k_true;
    r.ber = ber;
    r.hellinger = 1.0;
    r.filter_kept_fraction = 0.2;
    r.runtime_ms = 5;
    return r;
}

TEST(Aggregate, AllCorrect) {
    std::vector<SweepRow> rows{row(2, 2, 0), row(2, 2, 0)};
    auto cells = aggregate(rows);
    ASSERT_EQ(cells.size(), 1u);
    EXPECT_EQ(cells[0].p_k_error, 0.0);
    EXPECT_EQ(cells[0].mean_ber, std::optional<double>(0.0));
}

TEST(Aggregate, BerOnlyOverCorrectRuns) {
    std::vector<SweepRow> rows;
    for (int i = 0; i < 19; i++) {
        rows.push_back(row(4, 4, i == 0 ? 0.19 : 0.0));
    }
    rows.push_back(row(4, 5, 0.5));
    auto cells = aggregate(rows);
    ASSERT_EQ(cells.size(), 1u);
    EXPECT_EQ(cells[0].runs, 20u);
    EXPECT_EQ(cells[0].p_k_error, 0.05);
    EXPECT_NEAR(*cells[0].mean_ber, 0.01, 1e-15);
}

TEST(Aggregate, SortedAndRepeatable) {
    std::vector<SweepRow> rows{row(8, 8, 0), row(2, 2, 0), row(4, 3, 0)};
    auto cells = aggregate(rows);
    ASSERT_EQ(cells.size(), 3u);
    EXPECT_EQ(cells[0].k_true, 2u);
    EXPECT_EQ(cells[2].k_true, 8u);
    EXPECT_EQ(format_summary(cells, rows, false), format_summary(aggregate(rows), rows, false));
    EXPECT_EQ(format_summary(cells, rows, false).find("runtime"), std::string::npos);
    EXPECT_NE(format_summary(cells, rows, true).find("mean_runtime_ms"), std::string::npos);
}

TEST(RowsCsv, Layout) {
    SweepRow r = row(2, 2, 0.125);
    r.seed = 42;
    r.iterations = 17;
    r.error = "bad, \"thing\"";
    EXPECT_EQ(format_rows_csv(std::vector<SweepRow>{r}),
              "n,k_true,s_total,s_used,noise_index,repeat,seed,k_hat,ber,p_k_error_flag,hellinger,"
              "filter_kept_fraction,iterations,error\n"
              "10,2,10000,10000,0,0,42,2,0.125,0,1,0.2,17,\"bad, \"\"thing\"\"\"\n");
    EXPECT_EQ(format_timings_csv(std::vector<SweepRow>{r}).find("runtime_ms") != std::string::npos, true);
}

}  // namespace
}  // namespace qem
