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

#include "qem/em.h"

#include <cmath>
#include <json.hpp>
#include <limits>

#include "qem/error.h"

namespace qem {

void EmConfig::validate() const {
    if (k_min < 1 || k_min > k_max) {
        throw DataError("need 1 <= k_min <= k_max");
    }
    if (!(delta > 0)) {
        throw DataError("delta must be positive");
    }
    if (max_iters < 1) {
        throw DataError("max_iters must be at least 1");
    }
    if (!(eps_init > 0 && eps_init < 0.5)) {
        throw DataError("eps_init must lie in (0, 0.5)");
    }
    if (!(eps_clamp_lo > 0 && eps_clamp_gap > 0 && eps_clamp_lo < 0.5 - eps_clamp_gap)) {
        throw DataError("eps clamps must satisfy 0 < lo < 0.5 - gap");
    }
}

MixtureModel initial_model(const ShotDataset &dataset, const EmConfig &config) {
    config.validate();
    MixtureModel model;
    model.centers = kmeanspp_init(dataset, config.k_max, config.seed);
    model.alpha.assign(config.k_max, 1.0 / static_cast<double>(config.k_max));
    model.eps.assign(dataset.num_bits(), config.eps_init);
    return model;
}

FixedKResult run_em_fixed_k(const ShotDataset &dataset, const MixtureModel &init, const EmConfig &config) {
    config.validate();
    size_t num_shots = dataset.num_shots();
    size_t n = dataset.num_bits();
    auto score = [&](const EStepResult &e, const MixtureModel &m) {
        return config.mml_enabled ? mml_penalized(e.log_likelihood, num_shots, n, m.alpha) : e.log_likelihood;
    };

    FixedKResult result;
    result.model = init;
    MixtureModel &model = result.model;
    EStepResult current = e_step_with_likelihood(dataset, model, config.workers);
    double previous = score(current, model);
    double objective = previous;

    for (size_t t = 1; t <= config.max_iters; t++) {
        std::vector<double> alpha = config.mml_enabled ? m_step_alpha(current.w, n) : m_step_alpha_plain(current.w);
        std::vector<BitString> centers = m_step_x(dataset, current.w, config.workers);
        for (size_t k = 0; k < centers.size(); k++) {
            if (alpha[k] > 0) {
                model.centers[k] = std::move(centers[k]);
            }
        }
        model.alpha = std::move(alpha);
        model.eps = m_step_eps(
            dataset, current.w, model.centers, config.eps_clamp_lo, config.eps_clamp_gap, config.workers);

        current = e_step_with_likelihood(dataset, model, config.workers);
        objective = score(current, model);
        result.trace.push_back({model.num_nonzero(), t, objective});
        result.iterations = t;
        if (std::abs(objective - previous) < config.delta * std::abs(previous)) {
            result.converged = true;
            break;
        }
        previous = objective;
    }
    result.objective = objective;
    result.log_likelihood = current.log_likelihood;
    return result;
}

EmReport run_em(const ShotDataset &dataset, const EmConfig &config) {
    config.validate();
    size_t num_shots = dataset.num_shots();
    size_t n = dataset.num_bits();

    EmReport report;
    MixtureModel model = initial_model(dataset, config);
    std::optional<MixtureModel> best;
    double best_score = -std::numeric_limits<double>::infinity();

    while (true) {
        LevelRecord level;
        level.k_start = model.num_nonzero();
        if (level.k_start < config.k_min) {
            break;
        }
        FixedKResult fit;
        try {
            fit = run_em_fixed_k(dataset, model, config);
        } catch (const DegenerateModelError &e) {
            level.failure = e.what();
            report.levels.push_back(level);
            break;
        }
        report.objective_trace.insert(report.objective_trace.end(), fit.trace.begin(), fit.trace.end());
        report.iterations_total += fit.iterations;
        model = std::move(fit.model);

        level.k_end = model.num_nonzero();
        level.iterations = fit.iterations;
        level.converged = fit.converged;
        level.mml = config.mml_enabled ? fit.objective : mml_penalized(fit.log_likelihood, num_shots, n, model.alpha);
        report.levels.push_back(level);

        if (level.k_end >= config.k_min && level.k_end <= config.k_max && level.mml > best_score) {
            best_score = level.mml;
            best = model;
            report.best_log_likelihood = fit.log_likelihood;
        }
        if (level.k_end <= config.k_min || level.k_end <= 1) {
            break;
        }

        // Force out the lightest survivor (lowest index on ties).
        size_t lightest = model.alpha.size();
        for (size_t k = 0; k < model.alpha.size(); k++) {
            if (model.alpha[k] > 0 && (lightest == model.alpha.size() || model.alpha[k] < model.alpha[lightest])) {
                lightest = k;
            }
        }
        model.alpha[lightest] = 0;
        double total = 0;
        for (double a : model.alpha) {
            total += a;
        }
        for (auto &a : model.alpha) {
            a /= total;
        }
    }

    if (!best) {
        throw DegenerateModelError(
            "no level produced a model with between " + std::to_string(config.k_min) + " and " +
            std::to_string(config.k_max) + " live components");
    }
    report.best_mml = best_score;
    report.best = best->nonzero_part();
    report.k_hat = report.best.num_components();
    return report;
}

std::string format_model(const EmReport &report, const EmConfig &config) {
    nlohmann::ordered_json doc;
    doc["n"] = report.best.num_bits();
    doc["k_hat"] = report.k_hat;
    nlohmann::ordered_json solutions = nlohmann::ordered_json::array();
    for (const auto &c : report.best.centers) {
        solutions.push_back(c.to_text());
    }
    doc["solutions"] = solutions;
    doc["alpha"] = report.best.alpha;
    doc["eps"] = report.best.eps;
    doc["l_mml"] = report.best_mml;
    doc["log_likelihood"] = report.best_log_likelihood;
    doc["iterations_total"] = report.iterations_total;
    doc["mml_enabled"] = config.mml_enabled;
    doc["seed"] = config.seed;
    nlohmann::ordered_json levels = nlohmann::ordered_json::array();
    for (const auto &l : report.levels) {
        nlohmann::ordered_json entry;
        entry["k_start"] = l.k_start;
        entry["k_end"] = l.k_end;
        entry["iterations"] = l.iterations;
        entry["converged"] = l.converged;
        entry["l_mml"] = l.mml;
        if (!l.failure.empty()) {
            entry["failure"] = l.failure;
        }
        levels.push_back(entry);
    }
    doc["levels"] = levels;
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (const auto &p : report.objective_trace) {
        trace.push_back({p.k_nonzero, p.iteration, p.objective});
    }
    doc["objective_trace"] = trace;
    return doc.dump(2) + "\n";
}

MixtureModel parse_model(std::string_view text) {
    MixtureModel model;
    try {
        auto doc = nlohmann::json::parse(text);
        for (const auto &s : doc.at("solutions")) {
            model.centers.push_back(BitString::from_text(s.get<std::string>()));
        }
        model.alpha = doc.at("alpha").get<std::vector<double>>();
        model.eps = doc.at("eps").get<std::vector<double>>();
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("invalid model file: ") + e.what());
    }
    model.validate();
    return model;
}

}  // namespace qem
