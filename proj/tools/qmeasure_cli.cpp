// Copyright 2026 The qmeasure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qmeasure: run measurement scenarios, check invariants, list presets.
//
// Exit codes: 0 ok, 1 property failure, 2 parse error, 3 invariant violation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "qmeasure/errors.hpp"
#include "qmeasure/scenario.hpp"
#include "qmeasure/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kPropertyFailure = 1;
constexpr int kParseError = 2;
constexpr int kInvariantViolation = 3;

struct Source {
    std::string id;
    std::string text;
};

std::optional<Source> load(const std::string &target) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::is_regular_file(target, ec)) {
        std::ifstream in(target);
        std::ostringstream buf;
        buf << in.rdbuf();
        if (!in.bad())
            return Source{fs::path(target).stem().string(), buf.str()};
    }
    if (const auto *preset = qmeasure::scenario::find_preset(target))
        return Source{std::string(preset->name), std::string(preset->text)};
    return std::nullopt;
}

int run_command(const std::string &target, const std::string &format,
                std::optional<std::uint64_t> seed) {
    namespace sc = qmeasure::scenario;
    const auto source = load(target);
    if (!source) {
        std::cerr << "error: '" << target
                  << "' is neither a readable file nor a preset\n";
        return kParseError;
    }
    try {
        const auto file = sc::ScenarioFile::parse(source->text);
        const auto report = sc::run_scenario(file, source->id, seed);
        std::cout << (format == "records" ? sc::format_records(report)
                                          : sc::format_table(report));
        return kOk;
    } catch (const sc::ParseError &e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParseError;
    } catch (const sc::InvariantViolation &e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return kInvariantViolation;
    } catch (const qmeasure::Error &e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return kInvariantViolation;
    }
}

int verify_command(const qmeasure::verify::Options &options) {
    try {
        const auto report = qmeasure::verify::run(options);
        std::cout << qmeasure::verify::format(report);
        if (!report.all_passed()) {
            std::cerr << "rerun with: verify --trials " << options.trials
                      << " --dims-limit " << options.dims_limit << " --seed "
                      << options.seed << '\n';
            return kPropertyFailure;
        }
        return kOk;
    } catch (const qmeasure::Error &e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return kInvariantViolation;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Finite-dimensional quantum measurement scenarios"};
    app.require_subcommand(1);

    auto *run = app.add_subcommand("run", "Run a scenario file or preset");
    std::string target;
    std::string format = "table";
    std::optional<std::uint64_t> run_seed;
    run->add_option("scenario", target, "Scenario file path or preset name")
        ->required();
    run->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "records"}));
    run->add_option("--seed", run_seed, "Override the scenario's seed");

    auto *verify = app.add_subcommand("verify", "Run the randomized invariant batteries");
    qmeasure::verify::Options options;
    verify->add_option("--trials", options.trials, "Cases per battery")
        ->check(CLI::PositiveNumber);
    verify->add_option("--dims-limit", options.dims_limit,
                       "Largest small-system dimension")
        ->check(CLI::Range(2, 16));
    verify->add_option("--seed", options.seed, "Base seed");

    auto *presets = app.add_subcommand("presets", "List built-in presets");
    std::string show;
    presets->add_option("--show", show, "Print the scenario text of a preset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParseError;
    }

    if (*run)
        return run_command(target, format, run_seed);
    if (*verify)
        return verify_command(options);
    if (!show.empty()) {
        const auto *preset = qmeasure::scenario::find_preset(show);
        if (!preset) {
            std::cerr << "error: unknown preset '" << show << "'\n";
            return kParseError;
        }
        std::cout << preset->text;
        return kOk;
    }
    std::cout << qmeasure::scenario::format_presets();
    return kOk;
}
