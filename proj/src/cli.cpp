// Copyright 2026 The qpe-lab Authors
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

#include "qpelab/cli.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qpelab/adaptive.hpp"
#include "qpelab/bounds.hpp"
#include "qpelab/csv.hpp"
#include "qpelab/errors.hpp"
#include "qpelab/harness.hpp"
#include "qpelab/plot.hpp"
#include "qpelab/trace_json.hpp"

namespace qpelab::cli {

namespace {

// Thrown for flag values that parse but are out of range; mapped to exit code 2.
struct UsageError : Error {
    using Error::Error;
};

struct NoiseFlags {
    double alpha = 1.0;
    double beta = 1.0;

    void add_to(CLI::App& app) {
        app.add_option("--alpha", alpha, "fringe visibility in (0, 1]")->capture_default_str();
        app.add_option("--beta", beta, "per-application decay in (0, 1]")->capture_default_str();
    }
    NoiseModel model() const {
        try {
            return NoiseModel(alpha, beta);
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
    }
};

struct ScheduleFlags {
    std::int64_t depth_limit = std::int64_t{1} << 20;
    double exponent = 3.0;
    double epsilon = 1.0;

    void add_to(CLI::App& app) {
        app.add_option("--n-lim", depth_limit, "hardware depth cap")->capture_default_str();
        app.add_option("--p", exponent, "exponent of the confidence schedule")->capture_default_str();
        app.add_option("--epsilon", epsilon, "scale of the confidence schedule")->capture_default_str();
    }
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

// "32,64,128" or the doubling range "32..4096".
std::vector<std::int64_t> parse_ladder(const std::string& text) {
    std::vector<std::int64_t> ladder;
    try {
        if (const auto dots = text.find(".."); dots != std::string::npos) {
            const std::int64_t lo = csv::parse_int(text.substr(0, dots));
            const std::int64_t hi = csv::parse_int(text.substr(dots + 2));
            if (lo < 1 || hi < lo) throw UsageError("ladder range must satisfy 1 <= lo <= hi");
            for (std::int64_t n = lo; n <= hi; n *= 2) ladder.push_back(n);
        } else {
            for (const auto& item : split_list(text)) ladder.push_back(csv::parse_int(item));
        }
    } catch (const InvalidArgument& e) {
        throw UsageError(std::string("bad --ladder: ") + e.what());
    }
    if (ladder.empty()) throw UsageError("--ladder is empty");
    return ladder;
}

template <class F>
auto as_usage(F&& f) {
    try {
        return f();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
}

int env_threads() {
    const char* value = std::getenv("QPE_LAB_THREADS");
    if (!value || !*value) return 0;
    try {
        const std::int64_t n = csv::parse_int(value);
        if (n < 0) throw InvalidArgument("negative");
        return static_cast<int>(n);
    } catch (const InvalidArgument&) {
        throw UsageError(std::string("QPE_LAB_THREADS must be a non-negative integer, got '") + value + "'");
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path.string() + "' for writing");
    f << content;
    if (!f) throw Error("failed writing '" + path.string() + "'");
}

struct RunCommand {
    std::int64_t n_tot = 0;
    double theta = 0.0;
    NoiseFlags noise;
    ScheduleFlags schedule;
    std::int64_t grid = 1024;
    std::uint64_t seed = 0;
    std::string loss = "mae";
    std::string estimator = "map";
    std::string out_path;

    void add_to(CLI::App& app) {
        app.add_option("--n-tot", n_tot, "total unitary applications")->required();
        app.add_option("--theta", theta, "true phase")->capture_default_str();
        noise.add_to(app);
        schedule.add_to(app);
        app.add_option("--grid", grid, "initial posterior grid size")->capture_default_str();
        app.add_option("--seed", seed, "random seed")->capture_default_str();
        app.add_option("--loss", loss, "loss for predictions and the reported expected loss")
            ->check(CLI::IsMember({"mae", "mse"}))
            ->capture_default_str();
        app.add_option("--estimator", estimator, "final estimator")
            ->check(CLI::IsMember({"map", "mean"}))
            ->capture_default_str();
        app.add_option("--out", out_path, "write the trace JSON here");
    }

    int execute(std::ostream& out) const {
        AlgorithmConfig cfg;
        cfg.total_resources = n_tot;
        cfg.depth_limit = schedule.depth_limit;
        cfg.epsilon_exponent = schedule.exponent;
        cfg.epsilon_scale = schedule.epsilon;
        cfg.noise = noise.model();
        cfg.loss_kind = parse_loss_kind(loss);
        cfg.estimator = parse_estimator_kind(estimator);
        cfg.grid_size = grid;
        cfg.seed = seed;
        as_usage([&] {
            cfg.validate();
            return 0;
        });

        const AlgorithmTrace trace = run(cfg, theta);
        if (!out_path.empty()) write_file(out_path, trace_to_json(trace) + "\n");
        out << "estimate " << csv::format_double(trace.final_estimate) << '\n'
            << "expected_loss " << csv::format_double(trace.final_expected_loss) << '\n'
            << "resources_spent " << trace.resources_spent << '\n'
            << "max_depth " << trace.max_depth_used() << '\n';
        return kExitOk;
    }
};

struct SweepCommand {
    std::string strategies = "adaptive";
    std::string ladder = "32..4096";
    int k = 20;
    int r = 10;
    std::string out_dir = "sweep";
    std::uint64_t seed = 0;
    NoiseFlags noise;
    ScheduleFlags schedule;
    std::int64_t grid = 1024;
    std::string loss = "mae";
    std::string estimator = "map";
    std::int64_t shots_per_depth = 8;
    bool record_runtime = false;

    void add_to(CLI::App& app) {
        app.add_option("--strategies", strategies, "adaptive,qpea,nonadaptive-doubling,classical")
            ->capture_default_str();
        app.add_option("--ladder", ladder, "N_tot values: comma list or doubling range lo..hi")
            ->capture_default_str();
        app.add_option("--k", k, "evenly spaced true phases")->capture_default_str();
        app.add_option("--r", r, "repetitions per phase")->capture_default_str();
        app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();
        app.add_option("--seed", seed, "master seed")->capture_default_str();
        noise.add_to(app);
        schedule.add_to(app);
        app.add_option("--grid", grid, "initial posterior grid size")->capture_default_str();
        app.add_option("--loss", loss)->check(CLI::IsMember({"mae", "mse"}))->capture_default_str();
        app.add_option("--estimator", estimator)->check(CLI::IsMember({"map", "mean"}))->capture_default_str();
        app.add_option("--shots-per-depth", shots_per_depth, "shots per phase and depth for nonadaptive-doubling")
            ->capture_default_str();
        app.add_flag("--record-runtime", record_runtime, "fill runtime_ms (makes outputs non-reproducible)");
    }

    int execute(std::ostream& out, std::ostream& err, const std::atomic<bool>* cancel) const {
        SweepConfig cfg;
        cfg.strategies.clear();
        for (const auto& name : split_list(strategies)) cfg.strategies.push_back(as_usage([&] {
            return parse_strategy(name);
        }));
        cfg.resource_ladder = parse_ladder(ladder);
        cfg.theta_count = k;
        cfg.repetitions = r;
        cfg.noise = noise.model();
        cfg.algorithm.depth_limit = schedule.depth_limit;
        cfg.algorithm.epsilon_exponent = schedule.exponent;
        cfg.algorithm.epsilon_scale = schedule.epsilon;
        cfg.algorithm.grid_size = grid;
        cfg.algorithm.loss_kind = parse_loss_kind(loss);
        cfg.algorithm.estimator = parse_estimator_kind(estimator);
        cfg.master_seed = seed;
        cfg.shots_per_depth = shots_per_depth;
        cfg.record_runtime = record_runtime;
        cfg.threads = env_threads();
        as_usage([&] {
            cfg.validate();
            return 0;
        });

        const std::vector<SweepCellResult> results = run_sweep(cfg, cancel);
        const bool interrupted = cancel && cancel->load();

        const std::filesystem::path dir(out_dir);
        std::ostringstream results_csv, aggregate_csv, by_theta_csv;
        csv::write_results(results_csv, results);
        csv::write_aggregate(aggregate_csv, aggregate(results));
        csv::write_aggregate(by_theta_csv, aggregate_by_theta(results));
        write_file(dir / "results.csv", results_csv.str());
        write_file(dir / "aggregate.csv", aggregate_csv.str());
        write_file(dir / "aggregate_by_theta.csv", by_theta_csv.str());
        write_file(dir / "manifest.json", sweep_manifest_json(cfg, results, interrupted) + "\n");

        std::size_t failed = 0;
        for (const auto& c : results) failed += c.ok ? 0 : 1;
        out << "cells " << results.size() << " failed " << failed << " -> " << dir.string() << '\n';
        if (interrupted) {
            err << "interrupted: partial results written to " << dir.string() << '\n';
            return kExitRuntime;
        }
        return kExitOk;
    }
};

struct PlotCommand {
    std::string input;
    std::string y = "mae_mean";
    std::string refs;
    std::string out_path;
    std::string title;
    NoiseFlags noise;
    ScheduleFlags schedule;

    void add_to(CLI::App& app) {
        app.add_option("--input", input, "results or aggregate CSV")->required();
        app.add_option("--y", y, "error column")->capture_default_str();
        app.add_option("--ref", refs, "reference curves: sql,hl,noisy_floor,appendix_bound");
        app.add_option("--out", out_path, "SVG output path")->required();
        app.add_option("--title", title);
        noise.add_to(app);
        schedule.add_to(app);
    }

    int execute(std::ostream& out) const {
        PlotSpec spec;
        spec.y_column = y;
        spec.title = title;
        spec.noise = noise.model();
        for (const auto& name : split_list(refs)) spec.references.push_back(as_usage([&] {
            return parse_reference_curve(name);
        }));
        spec.bound.exponent = schedule.exponent;
        spec.bound.epsilon_scale = schedule.epsilon;
        spec.bound.depth_limit = schedule.depth_limit;

        std::ifstream in(input);
        if (!in) throw Error("cannot open '" + input + "'");
        const csv::Table table = csv::read_table(in);
        write_file(out_path, render_svg(table, spec));
        out << "wrote " << out_path << '\n';
        return kExitOk;
    }
};

struct BoundsCommand {
    NoiseFlags noise;
    ScheduleFlags schedule;
    std::string ladder = "64..1048576";
    int steps = 0;
    std::string out_path;

    void add_to(CLI::App& app) {
        noise.add_to(app);
        schedule.add_to(app);
        app.add_option("--ladder", ladder, "N_tot values: comma list or doubling range lo..hi")
            ->capture_default_str();
        app.add_option("--steps", steps, "fixed chain length m >= 2 (default: best feasible)");
        app.add_option("--out", out_path, "CSV output path (default: stdout)");
    }

    int execute(std::ostream& out) const {
        BoundParams params;
        params.noise = noise.model();
        params.exponent = schedule.exponent;
        params.epsilon_scale = schedule.epsilon;
        params.depth_limit = schedule.depth_limit;
        if (steps != 0) params.step_count = steps;
        const std::vector<std::int64_t> ns = parse_ladder(ladder);
        as_usage([&] {
            params.total_resources = ns.front();
            params.validate();
            return 0;
        });

        std::ostringstream table;
        table << "n_tot,mae_bound,mse_bound,steps\n";
        for (std::int64_t n : ns) {
            params.total_resources = n;
            const BoundBreakdown mae = appendix_loss_bound_detail(params, LossKind::kAbsolute);
            const BoundBreakdown mse = appendix_loss_bound_detail(params, LossKind::kSquared);
            table << n << ',' << csv::format_double(mae.value) << ',' << csv::format_double(mse.value) << ','
                  << mae.step_count << '\n';
        }
        if (out_path.empty()) {
            out << table.str();
        } else {
            write_file(out_path, table.str());
            out << "wrote " << out_path << '\n';
        }
        return kExitOk;
    }
};

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) {
    g_interrupted.store(true);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const std::atomic<bool>* cancel) {
    CLI::App app{"Adaptive Bayesian phase estimation lab", "qpe_lab"};
    app.set_version_flag("--version", QPELAB_VERSION);
    app.require_subcommand(1);

    RunCommand run_cmd;
    SweepCommand sweep_cmd;
    PlotCommand plot_cmd;
    BoundsCommand bounds_cmd;
    CLI::App* run_app = app.add_subcommand("run", "one adaptive estimation; optionally writes the trace as JSON");
    CLI::App* sweep_app = app.add_subcommand("sweep", "Monte Carlo sweep over strategies, budgets and phases");
    CLI::App* plot_app = app.add_subcommand("plot", "log-log SVG of a results or aggregate CSV");
    CLI::App* bounds_app = app.add_subcommand("bounds", "tabulate the worst-case MAE/MSE bounds over a ladder");
    run_cmd.add_to(*run_app);
    sweep_cmd.add_to(*sweep_app);
    plot_cmd.add_to(*plot_app);
    bounds_cmd.add_to(*bounds_app);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kExitOk;
        err << app.help();
        return kExitUsage;
    }

    try {
        if (run_app->parsed()) return run_cmd.execute(out);
        if (sweep_app->parsed()) return sweep_cmd.execute(out, err, cancel);
        if (plot_app->parsed()) return plot_cmd.execute(out);
        return bounds_cmd.execute(out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int main(int argc, char** argv) {
    std::signal(SIGINT, on_sigint);
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr, &g_interrupted);
}

}  // namespace qpelab::cli
