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

#include "qem/cli.h"

#include <spdlog/logger.h>
#include <spdlog/sinks/ostream_sink.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "qem/depfilter.h"
#include "qem/em.h"
#include "qem/error.h"
#include "qem/harness.h"
#include "qem/metrics.h"
#include "qem/rng.h"
#include "qem/shot_io.h"
#include "qem/synth.h"

namespace qem::cli {

namespace {

struct GlobalOptions {
    std::string log_level = "info";
    std::optional<uint64_t> seed;
    bool quiet = false;
};

struct GenerateOptions {
    size_t n = 0;
    size_t k = 0;
    size_t shots = 10000;
    double p = 0.9;
    double eps_low = 0.05;
    double eps_high = 0.15;
    std::string depth_label;
    std::string out;
    std::string truth_out;
    size_t workers = 1;
};

struct FilterOptions {
    std::string input;
    std::string out;
    FilterConfig filter;
    size_t workers = 1;
};

struct MitigateOptions {
    std::string input;
    std::string out;
    FilterConfig filter;
    bool skip_filter = false;
    bool no_mml = false;
    EmConfig em;
};

struct EvaluateOptions {
    std::string model;
    std::string truth;
    std::string out;
};

struct SweepOptions {
    std::string config;
    std::string out;
    size_t jobs = 1;
};

class Session {
   public:
    Session(const GlobalOptions &global, std::ostream &out, std::ostream &err)
        : global_(global), out_(out), log_("qem-mix", std::make_shared<spdlog::sinks::ostream_sink_st>(err, true)) {
        log_.set_pattern("[%l] %v");
        log_.set_level(global.quiet ? spdlog::level::err : spdlog::level::from_str(global.log_level));
    }

    spdlog::logger &log() {
        return log_;
    }

    /// Human-readable line on the data stream; suppressed by --quiet.
    void say(const std::string &line) {
        if (!global_.quiet) {
            out_ << line << "\n";
        }
    }

    void emit(const std::string &path, const std::string &contents) {
        if (path.empty() || path == "-") {
            out_ << contents;
        } else {
            write_file(path, contents);
            log_.info("wrote {}", path);
        }
    }

    uint64_t seed() {
        uint64_t value;
        if (global_.seed) {
            value = *global_.seed;
            log_.info("seed: {}", value);
        } else {
            value = entropy_seed();
            log_.info("seed: {} (from entropy; pass --seed {} to replay)", value, value);
        }
        return value;
    }

    bool seed_given() const {
        return global_.seed.has_value();
    }

    std::optional<uint64_t> seed_option() const {
        return global_.seed;
    }

   private:
    const GlobalOptions &global_;
    std::ostream &out_;
    spdlog::logger log_;
};

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::setprecision(digits) << v;
    return s.str();
}

void add_filter_flags(CLI::App *cmd, FilterConfig &filter) {
    cmd->add_option("--eta", filter.eta, "Multiplier on the uniform-noise expected support lambda*(n+1)")
        ->group("Filter");
    cmd->add_option("--z", filter.z, "Poisson standard deviations added to the threshold")->group("Filter");
    cmd->add_option("--t-floor", filter.t_floor, "Minimum absolute support threshold")->group("Filter");
    cmd->add_option("--threshold", filter.threshold, "Absolute support threshold; overrides eta, z and t-floor")
        ->group("Filter");
}

int run_generate(Session &session, const GenerateOptions &opt) {
    uint64_t seed = session.seed();
    GroundTruth truth = sample_ground_truth(opt.n, opt.k, derive_seed(seed, {1}));
    NoiseSpec noise{
        .p = opt.p,
        .eps = sample_flip_probabilities(opt.n, opt.eps_low, opt.eps_high, derive_seed(seed, {2})),
        .depth_label = opt.depth_label};
    noise.validate(opt.n);
    ShotDataset data = generate_shots(truth, noise, opt.shots, derive_seed(seed, {3}), opt.workers);

    std::string truth_path = opt.truth_out.empty() ? opt.out + ".truth.json" : opt.truth_out;
    save_counts(data, opt.out);
    write_file(truth_path, format_truth(TruthRecord{.truth = truth, .noise = noise, .seed = seed}));
    session.log().info("wrote {} and {}", opt.out, truth_path);
    session.say("generated " + std::to_string(opt.shots) + " shots, n=" + std::to_string(opt.n) +
                ", K=" + std::to_string(opt.k) + ", " + std::to_string(data.counts().size()) + " distinct");
    return kOk;
}

int run_filter(Session &session, const FilterOptions &opt) {
    ShotDataset data = load_dataset(opt.input);
    FilterReport report = filter_shots(data, opt.filter, opt.workers);
    if (!opt.out.empty()) {
        save_counts(report.kept, opt.out);
        session.log().info("wrote {}", opt.out);
    }
    session.say("kept " + std::to_string(report.kept.num_shots()) + " of " + std::to_string(data.num_shots()) +
                " shots (threshold " + fixed(report.threshold_used, 6) + ", lambda " + fixed(report.lambda, 6) +
                ")");
    session.emit("", format_filter_report(report, data.num_shots()) + "\n");
    return kOk;
}

int run_mitigate(Session &session, MitigateOptions opt) {
    opt.em.seed = session.seed();
    opt.em.mml_enabled = !opt.no_mml;
    ShotDataset data = load_dataset(opt.input);
    PipelineResult result =
        run_pipeline(data, PipelineOptions{.filter = opt.filter, .skip_filter = opt.skip_filter, .em = opt.em});
    if (result.filter) {
        session.log().info("filter kept {} of {} shots (threshold {})", result.filter->kept.num_shots(),
                           data.num_shots(), result.filter->threshold_used);
    }
    session.emit(opt.out, format_model(result.em, opt.em));
    session.say("k_hat " + std::to_string(result.em.k_hat) + ", objective " + fixed(result.em.best_mml, 10) +
                ", " + std::to_string(result.em.iterations_total) + " iterations");
    return kOk;
}

int run_evaluate(Session &session, const EvaluateOptions &opt) {
    MixtureModel model = parse_model(read_file(opt.model));
    TruthRecord record = parse_truth(read_file(opt.truth));
    size_t n = record.truth.num_bits();
    MixtureModel live = model.nonzero_part();
    EvalResult eval = bit_error_rate(record.truth.solutions, live.centers, n);
    Distribution truth_dist;
    for (size_t k = 0; k < record.truth.solutions.size(); k++) {
        truth_dist[record.truth.solutions[k]] += record.truth.weights[k];
    }
    eval.hellinger = hellinger_fidelity(truth_dist, model_to_distribution(live));
    session.emit(opt.out, format_eval(eval));
    session.say("BER " + fixed(eval.ber, 6) + ", K " + std::to_string(eval.k_hat) + " of " +
                std::to_string(eval.k_true) + (eval.k_correct ? " (correct)" : " (wrong)") + ", fidelity " +
                fixed(*eval.hellinger, 6));
    return kOk;
}

int run_sweep_command(Session &session, const SweepOptions &opt) {
    SweepConfig config = parse_sweep_config(read_file(opt.config));
    if (auto seed = session.seed_option()) {
        config.seed = *seed;
    }
    session.log().info("seed: {}", config.seed);
    config.validate();

    std::filesystem::path dir(opt.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    std::ofstream rows_file(dir / "rows.csv", std::ios::binary);
    if (!rows_file) {
        throw IoError("cannot write " + (dir / "rows.csv").string());
    }
    rows_file << rows_csv_header() << std::flush;
    size_t done = 0;
    auto rows = run_sweep(config, opt.jobs, [&](const SweepRow &row) {
        rows_file << format_row_csv(row) << std::flush;
        session.log().debug("row {}: n={} K={} S={} repeat={} k_hat={}", ++done, row.n, row.k_true, row.s_used,
                            row.repeat, row.k_hat);
    });
    rows_file.close();

    auto cells = aggregate(rows);
    write_file(dir / "timings.csv", format_timings_csv(rows));
    write_file(dir / "summary.json", format_summary(cells, rows, false));
    session.log().info("wrote {} rows to {}", rows.size(), dir.string());
    for (const auto &c : cells) {
        session.say("n=" + std::to_string(c.n) + " K=" + std::to_string(c.k_true) + " S=" +
                    std::to_string(c.s_used) + " noise=" + std::to_string(c.noise_index) +
                    " P_Kerror=" + fixed(c.p_k_error, 4) +
                    " BER=" + (c.mean_ber ? fixed(*c.mean_ber, 4) : std::string("n/a")) +
                    " failures=" + std::to_string(c.failures));
    }
    return kOk;
}

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app("Recover the noiseless outputs of a quantum circuit from noisy measurement shots.", "qem-mix");
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    if (const char *env = std::getenv("QEM_LOG_LEVEL")) {
        global.log_level = env;
    }
    app.add_option("--log-level", global.log_level, "Log verbosity (default from QEM_LOG_LEVEL)")
        ->check(CLI::IsMember({"error", "warn", "info", "debug"}));
    app.add_option("--seed", global.seed, "Master seed; drawn from OS entropy and logged when unset");
    app.add_flag("--quiet", global.quiet, "Only log errors and suppress human-readable summaries");

    GenerateOptions gen;
    auto *generate = app.add_subcommand("generate", "Sample a synthetic dataset and its ground truth");
    generate->add_option("--n", gen.n, "Bits per shot")->required();
    generate->add_option("--k", gen.k, "Number of true output strings")->required();
    generate->add_option("--shots", gen.shots, "Number of shots");
    generate->add_option("--p", gen.p, "Probability a shot is replaced by a uniform random string");
    generate->add_option("--eps-low", gen.eps_low, "Lower bound of per-bit flip probabilities");
    generate->add_option("--eps-high", gen.eps_high, "Upper bound of per-bit flip probabilities");
    generate->add_option("--depth-label", gen.depth_label, "Free-form label stored with the ground truth");
    generate->add_option("--out,-o", gen.out, "Counts file to write")->required();
    generate->add_option("--truth-out", gen.truth_out, "Ground-truth file (default: <out>.truth.json)");
    generate->add_option("--workers", gen.workers, "Sampling threads")->check(CLI::PositiveNumber);

    FilterOptions flt;
    auto *filter = app.add_subcommand("filter", "Drop shots that look like uniform depolarizing noise");
    filter->add_option("input", flt.input, "Shots text or counts file")->required();
    filter->add_option("--out,-o", flt.out, "Write the kept shots as a counts file");
    add_filter_flags(filter, flt.filter);
    filter->add_option("--workers", flt.workers, "Support-counting threads")->check(CLI::PositiveNumber);

    MitigateOptions mit;
    auto *mitigate = app.add_subcommand("mitigate", "Filter, then fit a bit-flip mixture and select K");
    mitigate->add_option("input", mit.input, "Shots text or counts file")->required();
    mitigate->add_option("--out,-o", mit.out, "Model file to write (default: standard output)");
    mitigate->add_option("--k-min", mit.em.k_min, "Smallest number of components tried");
    mitigate->add_option("--k-max", mit.em.k_max, "Number of components at the start");
    mitigate->add_option("--delta", mit.em.delta, "Relative convergence threshold");
    mitigate->add_option("--max-iters", mit.em.max_iters, "Iteration cap per component count");
    mitigate->add_option("--eps-init", mit.em.eps_init, "Initial flip probability of every bit");
    mitigate->add_flag("--no-mml", mit.no_mml, "Plain maximum-likelihood EM without the message-length penalty");
    mitigate->add_flag("--skip-filter", mit.skip_filter, "Fit all shots without filtering");
    add_filter_flags(mitigate, mit.filter);
    mitigate->add_option("--workers", mit.em.workers, "EM threads; results do not depend on this")
        ->check(CLI::PositiveNumber);

    EvaluateOptions ev;
    auto *evaluate = app.add_subcommand("evaluate", "Score a model file against a ground-truth file");
    evaluate->add_option("--model", ev.model, "Model file from mitigate")->required();
    evaluate->add_option("--truth", ev.truth, "Ground-truth file from generate")->required();
    evaluate->add_option("--out,-o", ev.out, "Result file to write (default: standard output)");

    SweepOptions sw;
    auto *sweep = app.add_subcommand("sweep", "Run a grid of synthetic experiments");
    sweep->add_option("--config", sw.config, "Sweep description (JSON)")->required();
    sweep->add_option("--out,-o", sw.out, "Output directory for rows.csv, timings.csv and summary.json")
        ->required();
    sweep->add_option("--jobs", sw.jobs, "Cells run concurrently; results do not depend on this")
        ->check(CLI::PositiveNumber);

    const std::string global_note = "Global options --seed, --log-level and --quiet may also follow the subcommand.";
    for (auto *sub : app.get_subcommands({})) {
        sub->footer(global_note);
    }

    for (size_t i = 0; i < args.size(); i++) {
        if (args[i] == "--log-level" || args[i] == "--seed") {
            i++;
            continue;
        }
        if (!args[i].empty() && args[i][0] != '-') {
            auto subs = app.get_subcommands({});
            if (std::none_of(subs.begin(), subs.end(), [&](CLI::App *sub) { return sub->check_name(args[i]); })) {
                err << "error: unknown subcommand '" << args[i] << "'\n\n" << app.help();
                return kUsage;
            }
            break;
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n";
        err << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kUsage;
    }

    Session session(global, out, err);
    try {
        if (generate->parsed()) {
            return run_generate(session, gen);
        }
        if (filter->parsed()) {
            return run_filter(session, flt);
        }
        if (mitigate->parsed()) {
            return run_mitigate(session, mit);
        }
        if (evaluate->parsed()) {
            return run_evaluate(session, ev);
        }
        return run_sweep_command(session, sw);
    } catch (const NumericalError &e) {
        session.log().error("{}", e.what());
        return kNumericalError;
    } catch (const std::exception &e) {
        session.log().error("{}", e.what());
        return kDataError;
    }
}

}  // namespace qem::cli
