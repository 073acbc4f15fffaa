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

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <json.hpp>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>
#include <tuple>

#include "qem/error.h"
#include "qem/metrics.h"
#include "qem/rng.h"
#include "qem/synth.h"

namespace qem {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::string format_optional(const std::optional<double> &v) {
    return v ? format_double(*v) : std::string();
}

/// Shot counts without replacement, original order kept.
ShotDataset subsample(const ShotDataset &full, size_t count, uint64_t seed) {
    std::vector<size_t> indices(full.num_shots());
    std::iota(indices.begin(), indices.end(), size_t{0});
    Rng rng(seed);
    for (size_t i = 0; i < count; i++) {
        size_t j = i + rng.below(indices.size() - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(count);
    std::sort(indices.begin(), indices.end());
    return full.select(indices);
}

struct Task {
    size_t n;
    size_t k;
    size_t shots;
    size_t noise_index;
    size_t repeat;
};

std::vector<SweepRow> run_task(const SweepConfig &config, const Task &task) {
    uint64_t seed = cell_seed(config.seed, task.n, task.k, task.shots, task.repeat);
    std::vector<size_t> points;
    for (size_t s : config.subsample_points) {
        if (s <= task.shots) {
            points.push_back(s);
        }
    }
    bool subsampling = !points.empty();
    if (!subsampling) {
        points.push_back(task.shots);
    }

    std::vector<SweepRow> rows;
    for (size_t s : points) {
        SweepRow row;
        row.n = task.n;
        row.k_true = task.k;
        row.s_total = task.shots;
        row.s_used = s;
        row.noise_index = task.noise_index;
        row.repeat = task.repeat;
        row.seed = seed;
        rows.push_back(row);
    }

    GroundTruth truth;
    ShotDataset full = ShotDataset::from_shots(std::vector<BitString>{BitString(1)});
    try {
        const NoiseSetting &setting = config.noise[task.noise_index];
        truth = sample_ground_truth(task.n, task.k, derive_seed(seed, {1}));
        NoiseSpec noise{
            .p = setting.p,
            .eps = sample_flip_probabilities(task.n, setting.eps_low, setting.eps_high, derive_seed(seed, {2})),
            .depth_label = setting.depth_label};
        full = generate_shots(truth, noise, task.shots, derive_seed(seed, {3}));
    } catch (const std::exception &e) {
        for (auto &row : rows) {
            row.error = e.what();
        }
        return rows;
    }

    Distribution truth_dist;
    for (size_t k = 0; k < truth.solutions.size(); k++) {
        truth_dist[truth.solutions[k]] += truth.weights[k];
    }

    for (size_t idx = 0; idx < rows.size(); idx++) {
        SweepRow &row = rows[idx];
        auto start = std::chrono::steady_clock::now();
        try {
            ShotDataset data = subsampling ? subsample(full, row.s_used, derive_seed(seed, {4, idx})) : full;
            PipelineOptions options{.filter = config.filter, .skip_filter = config.skip_filter, .em = config.em};
            options.em.seed = derive_seed(seed, {5});
            options.em.workers = 1;
            PipelineResult result = run_pipeline(data, options);
            row.filter_kept_fraction =
                result.filter ? static_cast<double>(result.filter->kept.num_shots()) / static_cast<double>(row.s_used)
                              : 1.0;
            row.k_hat = result.em.k_hat;
            row.iterations = result.em.iterations_total;
            EvalResult eval = bit_error_rate(truth.solutions, result.em.best.centers, task.n);
            row.ber = eval.ber;
            row.k_error = !eval.k_correct;
            row.hellinger = hellinger_fidelity(truth_dist, model_to_distribution(result.em.best));
        } catch (const std::exception &e) {
            row.error = e.what();
            row.k_error = true;
        }
        row.runtime_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return rows;
}

std::string csv_escape(const std::string &text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

}  // namespace

PipelineResult run_pipeline(const ShotDataset &dataset, const PipelineOptions &options) {
    PipelineResult result;
    if (options.skip_filter) {
        result.em = run_em(dataset, options.em);
        return result;
    }
    result.filter = filter_shots(dataset, options.filter, options.em.workers);
    result.em = run_em(result.filter->kept, options.em);
    return result;
}

void SweepConfig::validate() const {
    if (n_values.empty() || k_values.empty() || shot_values.empty() || noise.empty()) {
        throw DataError("sweep grid needs at least one n, k, shots and noise value");
    }
    if (repeats < 1) {
        throw DataError("repeats must be at least 1");
    }
    size_t max_shots = *std::max_element(shot_values.begin(), shot_values.end());
    for (size_t s : subsample_points) {
        if (s == 0 || s > max_shots) {
            throw DataError("subsample point " + std::to_string(s) + " outside [1, max shots]");
        }
    }
    for (const auto &ns : noise) {
        if (!(ns.p >= 0 && ns.p <= 1) || !(ns.eps_low >= 0 && ns.eps_low <= ns.eps_high && ns.eps_high < 0.5)) {
            throw DataError("invalid noise setting in sweep grid");
        }
    }
    filter.validate();
    em.validate();
}

SweepConfig parse_sweep_config(std::string_view text) {
    SweepConfig config;
    try {
        auto doc = nlohmann::json::parse(text);
        config.seed = doc.value("seed", config.seed);
        config.n_values = doc.at("n").get<std::vector<size_t>>();
        config.k_values = doc.at("k").get<std::vector<size_t>>();
        config.shot_values = doc.at("shots").get<std::vector<size_t>>();
        if (doc.contains("noise")) {
            config.noise.clear();
            for (const auto &entry : doc["noise"]) {
                NoiseSetting ns;
                ns.p = entry.value("p", ns.p);
                ns.eps_low = entry.value("eps_low", ns.eps_low);
                ns.eps_high = entry.value("eps_high", ns.eps_high);
                ns.depth_label = entry.value("depth_label", ns.depth_label);
                config.noise.push_back(ns);
            }
        }
        config.repeats = doc.value("repeats", config.repeats);
        config.subsample_points = doc.value("subsample", config.subsample_points);
        if (doc.contains("filter")) {
            const auto &f = doc["filter"];
            config.filter.eta = f.value("eta", config.filter.eta);
            config.filter.z = f.value("z", config.filter.z);
            config.filter.t_floor = f.value("t_floor", config.filter.t_floor);
            if (f.contains("threshold")) {
                config.filter.threshold = f["threshold"].get<double>();
            }
            config.skip_filter = f.value("skip", config.skip_filter);
        }
        if (doc.contains("em")) {
            const auto &e = doc["em"];
            config.em.k_min = e.value("k_min", config.em.k_min);
            config.em.k_max = e.value("k_max", config.em.k_max);
            config.em.delta = e.value("delta", config.em.delta);
            config.em.max_iters = e.value("max_iters", config.em.max_iters);
            config.em.eps_init = e.value("eps_init", config.em.eps_init);
            config.em.eps_clamp_lo = e.value("eps_clamp_lo", config.em.eps_clamp_lo);
            config.em.eps_clamp_gap = e.value("eps_clamp_gap", config.em.eps_clamp_gap);
            config.em.mml_enabled = e.value("mml", config.em.mml_enabled);
        }
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("invalid sweep config: ") + e.what());
    }
    config.validate();
    return config;
}

uint64_t cell_seed(uint64_t master, size_t n, size_t k, size_t shots, size_t repeat) {
    return derive_seed(master, {n, k, shots, repeat});
}

std::vector<SweepRow> run_sweep(
    const SweepConfig &config, size_t jobs, const std::function<void(const SweepRow &)> &on_row) {
    config.validate();
    std::vector<Task> tasks;
    for (size_t n : config.n_values) {
        for (size_t k : config.k_values) {
            for (size_t s : config.shot_values) {
                for (size_t ni = 0; ni < config.noise.size(); ni++) {
                    for (size_t r = 0; r < config.repeats; r++) {
                        tasks.push_back({n, k, s, ni, r});
                    }
                }
            }
        }
    }

    std::vector<std::vector<SweepRow>> results(tasks.size());
    std::vector<bool> done(tasks.size(), false);
    std::atomic<size_t> next_task{0};
    std::mutex emit_mutex;
    size_t next_emit = 0;

    auto worker = [&] {
        while (true) {
            size_t t = next_task.fetch_add(1);
            if (t >= tasks.size()) {
                return;
            }
            auto rows = run_task(config, tasks[t]);
            std::lock_guard lock(emit_mutex);
            results[t] = std::move(rows);
            done[t] = true;
            // Single writer: emit the completed prefix in grid order.
            while (next_emit < tasks.size() && done[next_emit]) {
                if (on_row) {
                    for (const auto &row : results[next_emit]) {
                        on_row(row);
                    }
                }
                next_emit++;
            }
        }
    };
    jobs = std::max<size_t>(1, std::min(jobs, tasks.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        for (size_t j = 0; j < jobs; j++) {
            threads.emplace_back(worker);
        }
    }

    std::vector<SweepRow> rows;
    for (auto &r : results) {
        rows.insert(rows.end(), r.begin(), r.end());
    }
    return rows;
}

std::vector<CellSummary> aggregate(std::span<const SweepRow> rows) {
    using Key = std::tuple<size_t, size_t, size_t, size_t>;
    struct Acc {
        CellSummary cell;
        double ber_sum = 0;
        size_t ber_count = 0;
        double hellinger_sum = 0;
        size_t hellinger_count = 0;
        double kept_sum = 0;
        double runtime_sum = 0;
    };
    std::map<Key, Acc> cells;
    for (const auto &row : rows) {
        auto &acc = cells[{row.n, row.k_true, row.s_used, row.noise_index}];
        acc.cell.n = row.n;
        acc.cell.k_true = row.k_true;
        acc.cell.s_used = row.s_used;
        acc.cell.noise_index = row.noise_index;
        acc.cell.runs++;
        acc.cell.k_errors += row.k_error;
        acc.cell.failures += !row.error.empty();
        if (!row.k_error && row.ber) {
            acc.ber_sum += *row.ber;
            acc.ber_count++;
        }
        if (row.hellinger) {
            acc.hellinger_sum += *row.hellinger;
            acc.hellinger_count++;
        }
        acc.kept_sum += row.filter_kept_fraction;
        acc.runtime_sum += row.runtime_ms;
    }
    std::vector<CellSummary> out;
    for (auto &[key, acc] : cells) {
        double runs = static_cast<double>(acc.cell.runs);
        acc.cell.p_k_error = static_cast<double>(acc.cell.k_errors) / runs;
        if (acc.ber_count > 0) {
            acc.cell.mean_ber = acc.ber_sum / static_cast<double>(acc.ber_count);
        }
        if (acc.hellinger_count > 0) {
            acc.cell.mean_hellinger = acc.hellinger_sum / static_cast<double>(acc.hellinger_count);
        }
        acc.cell.mean_kept_fraction = acc.kept_sum / runs;
        acc.cell.mean_runtime_ms = acc.runtime_sum / runs;
        out.push_back(acc.cell);
    }
    return out;
}

std::string rows_csv_header() {
    return "n,k_true,s_total,s_used,noise_index,repeat,seed,k_hat,ber,p_k_error_flag,hellinger,"
           "filter_kept_fraction,iterations,error\n";
}

std::string format_row_csv(const SweepRow &row) {
    std::string line;
    line += std::to_string(row.n) + ",";
    line += std::to_string(row.k_true) + ",";
    line += std::to_string(row.s_total) + ",";
    line += std::to_string(row.s_used) + ",";
    line += std::to_string(row.noise_index) + ",";
    line += std::to_string(row.repeat) + ",";
    line += std::to_string(row.seed) + ",";
    line += std::to_string(row.k_hat) + ",";
    line += format_optional(row.ber) + ",";
    line += std::string(row.k_error ? "1" : "0") + ",";
    line += format_optional(row.hellinger) + ",";
    line += format_double(row.filter_kept_fraction) + ",";
    line += std::to_string(row.iterations) + ",";
    line += csv_escape(row.error) + "\n";
    return line;
}

std::string format_rows_csv(std::span<const SweepRow> rows) {
    std::string out = rows_csv_header();
    for (const auto &row : rows) {
        out += format_row_csv(row);
    }
    return out;
}

std::string format_timings_csv(std::span<const SweepRow> rows) {
    std::string out = "n,k_true,s_used,noise_index,repeat,runtime_ms\n";
    for (const auto &row : rows) {
        out += std::to_string(row.n) + "," + std::to_string(row.k_true) + "," + std::to_string(row.s_used) + "," +
               std::to_string(row.noise_index) + "," + std::to_string(row.repeat) + "," +
               format_double(row.runtime_ms) + "\n";
    }
    return out;
}

std::string format_summary(std::span<const CellSummary> cells, std::span<const SweepRow> rows, bool with_runtime) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto &c : cells) {
        nlohmann::ordered_json entry;
        entry["n"] = c.n;
        entry["k_true"] = c.k_true;
        entry["s_used"] = c.s_used;
        entry["noise_index"] = c.noise_index;
        entry["runs"] = c.runs;
        entry["k_errors"] = c.k_errors;
        entry["failures"] = c.failures;
        entry["p_k_error"] = c.p_k_error;
        entry["mean_ber"] = c.mean_ber ? nlohmann::ordered_json(*c.mean_ber) : nlohmann::ordered_json(nullptr);
        entry["mean_hellinger"] =
            c.mean_hellinger ? nlohmann::ordered_json(*c.mean_hellinger) : nlohmann::ordered_json(nullptr);
        entry["mean_kept_fraction"] = c.mean_kept_fraction;
        if (with_runtime) {
            entry["mean_runtime_ms"] = c.mean_runtime_ms;
        }
        list.push_back(entry);
    }
    doc["cells"] = list;
    if (!rows.empty()) {
        std::vector<std::pair<size_t, size_t>> runs;
        for (const auto &r : rows) {
            runs.emplace_back(r.k_true, r.k_error ? 0 : r.k_true);
        }
        doc["runs"] = rows.size();
        doc["p_k_error"] = k_error_rate(runs);
    }
    return doc.dump(2) + "\n";
}

}  // namespace qem
