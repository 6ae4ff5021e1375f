// Copyright 2026 The Lightcone Authors
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

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lightcone/error.hpp"
#include "runner.hpp"

namespace {

struct RunOptions {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw lightcone::InputError("--config: cannot read " + path);
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run(runner::Kind kind, const RunOptions& opt, const CLI::App& sub) {
    runner::Config config = runner::parse_config(read_file(opt.config));
    if (config.kind != kind) {
        throw lightcone::InputError("kind: config is '" + std::string(runner::kind_name(config.kind)) +
                                    "' but the subcommand expects '" + std::string(runner::kind_name(kind)) + "'");
    }
    if (sub.count("--seed")) {
        config.seed = opt.seed;
    }
    if (sub.count("--out")) {
        config.output = opt.out;
    }
    if (config.output.empty()) {
        throw lightcone::InputError("output: no output directory in the config and no --out given");
    }
    runner::validate(config);

    auto start = std::chrono::steady_clock::now();
    runner::RunResult result = runner::execute(config, opt.workers);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    runner::write_run(config, result, config.output, opt.workers, wall);

    std::cout << runner::kind_name(kind) << ": wrote " << result.files.size() << " files to " << config.output;
    if (!result.guard_trips.empty()) {
        std::cout << " (" << result.guard_trips.size() << " guard trips, see manifest.json)";
    }
    std::cout << (result.checks_passed ? "" : "; CHECKS FAILED") << "\n";
    return result.checks_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lieb-Robinson light-cone bounds and simulations"};
    app.require_subcommand(1);

    struct Entry {
        runner::Kind kind;
        const char* name;
        const char* help;
    };
    const Entry entries[] = {
        {runner::Kind::Bounds, "bounds", "Evaluate a bound family on an (r, t) grid"},
        {runner::Kind::ExactVerify, "exact", "Check chain commutator norms against the bound"},
        {runner::Kind::Walk, "walk", "Single-particle walk amplitudes and tail bounds"},
        {runner::Kind::Circuit, "circuit", "Random brickwork operator spreading"},
        {runner::Kind::Protocols, "protocols", "GHZ and W state preparation"},
    };
    RunOptions opt;
    std::vector<std::pair<CLI::App*, runner::Kind>> runs;
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        sub->add_option("--config", opt.config, "JSON run config")->required();
        sub->add_option("--out", opt.out, "Output directory (overrides the config)");
        sub->add_option("--seed", opt.seed, "Seed (overrides the config)");
        sub->add_option("--workers", opt.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
        runs.emplace_back(sub, e.kind);
    }

    std::string left, right, report;
    double tolerance = 0;
    CLI::App* cmp = app.add_subcommand("compare", "Compare two CSV files or run directories cell by cell");
    cmp->add_option("a", left, "First file or run directory")->required();
    cmp->add_option("b", right, "Second file or run directory")->required();
    cmp->add_option("--tolerance", tolerance, "Largest accepted absolute difference")->check(CLI::NonNegativeNumber);
    cmp->add_option("--out", report, "Write the report JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmp->parsed()) {
            runner::CompareReport rep = runner::compare(left, right, tolerance);
            std::string text = rep.to_json().dump(2) + "\n";
            if (!report.empty()) {
                std::ofstream(report) << text;
            }
            std::cout << text;
            return rep.pass ? 0 : 1;
        }
        for (auto& [sub, kind] : runs) {
            if (sub->parsed()) {
                return run(kind, opt, *sub);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return runner::exit_code(e);
    }
    return 1;
}
