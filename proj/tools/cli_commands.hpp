/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "okc/okc.hpp"

#ifndef OKC_VERSION
#define OKC_VERSION "0.0.0"
#endif

namespace okc::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

namespace detail {

struct InputOptions {
    std::string data;
    std::string spec;
    DatasetSchema schema;
    bool no_header = false;
};

inline void add_input_options(CLI::App &cmd, InputOptions &in) {
    auto *data = cmd.add_option("--data", in.data, "CSV dataset");
    auto *spec = cmd.add_option("--spec", in.spec, "generator spec (JSON) used instead of a CSV dataset");
    data->excludes(spec);
    cmd.add_option("--delimiter", in.schema.delimiter, "CSV field separator")->capture_default_str();
    cmd.add_option("--label-column", in.schema.label_column,
                   "label column: 0-based index, negative index from the end, or header name (default: last)");
    cmd.add_option("--target-label", in.schema.target_label, "raw label value treated as the target class")
        ->capture_default_str();
    cmd.add_flag("--no-header", in.no_header, "the CSV has no header line");
    cmd.add_option("--drop-column", in.schema.drop_columns, "column to ignore (repeatable)");
    cmd.add_option("--missing", in.schema.missing_token, "cell value marking a row to skip");
    cmd.add_flag("--normalize", in.schema.normalize, "min-max scale every feature to [0, 1]");
}

inline Stream load_input(InputOptions &in) {
    if (!in.spec.empty()) { return gen_stream(load_spec(in.spec)); }
    if (in.data.empty()) { throw InvalidInputError("one of --data or --spec is required"); }
    in.schema.path = in.data;
    in.schema.header = !in.no_header;
    return load_csv(in.schema);
}

inline std::string dataset_name(const InputOptions &in) {
    return std::filesystem::path(in.spec.empty() ? in.data : in.spec).stem().string();
}

/// "auto" or a positive number.
inline std::optional<double> parse_auto(const std::string &text, const char *flag) {
    if (text == "auto") { return std::nullopt; }
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size() && v > 0.0 && std::isfinite(v)) { return v; }
    } catch (const std::exception &) {
    }
    throw InvalidInputError(std::string(flag) + " must be 'auto' or a positive number, got '" + text + "'");
}

}  // namespace detail

/// Parses args (without the program name) and runs the chosen subcommand.
/// Results go to out as JSON, diagnostics to err.
inline int run_cli(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Streaming one-class classification with online kernel ELM models", "okc"};
    app.require_subcommand(1, 1);
    app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
    app.option_defaults()->always_capture_default();

    // gen
    std::string gen_spec;
    std::string gen_out;
    auto *gen = app.add_subcommand("gen", "Generate a labelled stream from a JSON spec and write it as CSV");
    gen->add_option("spec", gen_spec, "generator spec (JSON)")->required();
    gen->add_option("-o,--out", gen_out, "output CSV path")->required();

    // select
    detail::InputOptions sel_in;
    std::string sel_framework_name = "boundary";
    SelectionConfig sel_cfg;
    std::uint64_t sel_seed = 0;
    auto *sel = app.add_subcommand(
        "select", "Pick (lambda, sigma) on the target samples: 20 sigma values between the smallest and largest "
                  "pairwise distance, 17 lambda values 1e-8 .. 1e8");
    detail::add_input_options(*sel, sel_in);
    sel->add_option("--framework", sel_framework_name, "boundary or reconstruction")
        ->check(CLI::IsMember({"boundary", "reconstruction"}));
    sel->add_option("--folds", sel_cfg.folds, "cross-validation folds")->check(CLI::Range(2, 1000));
    sel->add_option("--sigma-thr", sel_cfg.sigma_thr, "consistency tolerance in standard deviations")
        ->check(CLI::NonNegativeNumber);
    sel->add_option("--eta", sel_cfg.eta, "expected rejection fraction of targets")->check(CLI::Range(0.0, 1.0));
    sel->add_option("--sigma-count", sel_cfg.sigma_count, "number of sigma values")->check(CLI::PositiveNumber);
    sel->add_option("--seed", sel_seed, "fold shuffling seed");

    // run
    detail::InputOptions run_in;
    RunConfig run_cfg;
    std::string run_framework_name = "boundary";
    std::string protocol = "stream";
    std::string mode = "sliding";
    std::string run_lambda = "auto";
    std::string run_sigma = "auto";
    std::string run_out = ".";
    std::string run_name;
    auto *run = app.add_subcommand("run", "Evaluate a model on a stream (prequential) or a stationary dataset");
    detail::add_input_options(*run, run_in);
    run->add_option("--protocol", protocol, "stream (test-then-train) or stationary (repeated 70/30 target split)")
        ->check(CLI::IsMember({"stream", "stationary"}));
    run->add_option("--framework", run_framework_name, "boundary or reconstruction")
        ->check(CLI::IsMember({"boundary", "reconstruction"}));
    run->add_option("--mode", mode, "sliding (forget and learn per chunk) or static (initial window only)")
        ->check(CLI::IsMember({"sliding", "static"}));
    run->add_option("--window", run_cfg.window, "window size W")->check(CLI::PositiveNumber);
    run->add_option("--chunk", run_cfg.chunk, "chunk size s, s < W")->check(CLI::PositiveNumber);
    run->add_option("--eta", run_cfg.eta, "expected rejection fraction of targets")->check(CLI::Range(0.0, 1.0));
    run->add_option("--lambda", run_lambda,
                    "regularisation, or 'auto' to select from 17 values 1e-8 .. 1e8 on the initial window");
    run->add_option("--sigma", run_sigma,
                    "RBF width, or 'auto' to select from 20 values spanning the pairwise distances");
    run->add_option("--folds", run_cfg.selection.folds, "cross-validation folds for 'auto'")
        ->check(CLI::Range(2, 1000));
    run->add_option("--sigma-thr", run_cfg.selection.sigma_thr, "consistency tolerance for 'auto'")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--runs", run_cfg.runs, "repetitions of the stationary protocol")->check(CLI::PositiveNumber);
    run->add_option("--steps", run_cfg.steps, "batches of the accuracy series")->check(CLI::PositiveNumber);
    run->add_option("--seed", run_cfg.seed, "seed for splits and selection");
    run->add_option("--out", run_out, "directory receiving the report files");
    run->add_option("--name", run_name, "dataset name used in file names (default: input file stem)");

    // bench
    BenchConfig bench_cfg;
    std::string bench_framework_name = "boundary";
    auto *bench = app.add_subcommand("bench", "Time incremental slides against rebuilding the model from scratch");
    bench->add_option("--window", bench_cfg.window, "window size W")->check(CLI::PositiveNumber);
    bench->add_option("--chunk", bench_cfg.chunk, "chunk size s, s < W")->check(CLI::PositiveNumber);
    bench->add_option("--dims", bench_cfg.dims, "feature dimension")->check(CLI::PositiveNumber);
    bench->add_option("--slides", bench_cfg.slides, "timed slides")->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_cfg.seed, "data seed");
    bench->add_option("--framework", bench_framework_name, "boundary or reconstruction")
        ->check(CLI::IsMember({"boundary", "reconstruction"}));

    auto *version = app.add_subcommand("version", "Print the version");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp &) {
        out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
        return kOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "okc: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (gen->parsed()) {
            const Stream stream = gen_stream(load_spec(gen_spec));
            write_csv(stream, gen_out);
            const auto counts = count_classes(stream);
            out << nlohmann::json{{"path", gen_out},
                                  {"rows", stream.size()},
                                  {"targets", counts.targets},
                                  {"outliers", counts.outliers}}
                       .dump()
                << '\n';
        } else if (sel->parsed()) {
            const Stream data = detail::load_input(sel_in);
            const auto result = select(targets_of(data), framework_from_string(sel_framework_name), sel_cfg, sel_seed);
            out << to_json(result).dump() << '\n';
        } else if (run->parsed()) {
            run_cfg.framework = framework_from_string(run_framework_name);
            run_cfg.mode = run_mode_from_string(mode);
            run_cfg.lambda = detail::parse_auto(run_lambda, "--lambda");
            run_cfg.sigma = detail::parse_auto(run_sigma, "--sigma");
            run_cfg.validate();
            const Stream data = detail::load_input(run_in);
            const std::string name = run_name.empty() ? detail::dataset_name(run_in) : run_name;
            const EvalReport report =
                protocol == "stream" ? run_stream(data, run_cfg, name) : run_stationary(data, run_cfg, name);

            std::error_code ec;
            std::filesystem::create_directories(run_out, ec);
            const auto base = std::filesystem::path(run_out) / report_basename(report);
            const std::string json_path = base.string() + ".json";
            const std::string csv_path = base.string() + ".csv";
            {
                std::ofstream f(json_path);
                f << to_json(report).dump(2) << '\n';
                if (!f) { throw IoError("failed writing '" + json_path + "'"); }
            }
            {
                std::ofstream f(csv_path);
                write_step_csv(report, f);
                if (!f) { throw IoError("failed writing '" + csv_path + "'"); }
            }
            out << nlohmann::json{{"overall_accuracy", report.overall_accuracy},
                                  {"auc", report.auc ? nlohmann::json(*report.auc) : nlohmann::json(nullptr)},
                                  {"train_s", report.timing.train_s},
                                  {"forget_s", report.timing.forget_s},
                                  {"test_s", report.timing.test_s},
                                  {"report", json_path},
                                  {"steps", csv_path}}
                       .dump()
                << '\n';
        } else if (bench->parsed()) {
            bench_cfg.framework = framework_from_string(bench_framework_name);
            bench_cfg.validate();
            out << to_json(benchmark_slides(bench_cfg), bench_cfg).dump() << '\n';
        } else if (version->parsed()) {
            out << nlohmann::json{{"name", "okc"}, {"version", OKC_VERSION}}.dump() << '\n';
        }
    } catch (const InvalidInputError &e) {
        err << "okc: " << e.what() << '\n';
        return kUsageError;
    } catch (const SpecError &e) {
        err << "okc: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception &e) {
        err << "okc: " << e.what() << '\n';
        return kDataError;
    }
    return kOk;
}

}  // namespace okc::cli
