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

#ifndef LIGHTCONE_TOOLS_RUNNER_HPP
#define LIGHTCONE_TOOLS_RUNNER_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace runner {

enum class Kind { Bounds, ExactVerify, Walk, Circuit, Protocols };

std::string_view kind_name(Kind k);
/// Accepts "bounds", "exact_verify" (or "exact"), "walk", "circuit", "protocols".
Kind kind_from_name(std::string_view name);

struct Config {
    Kind kind = Kind::Bounds;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<int> r;
    std::vector<double> t;
    std::uint64_t seed = 0;
    std::string output;

    /// The resolved config as written to the manifest.
    nlohmann::json to_json() const;
};

/// Parses and validates a config. Every problem is reported as an InputError
/// naming the offending field, e.g. "parameters.h: expected a number".
Config parse_config(std::string_view text);

/// Checks kind-specific parameters without running anything.
void validate(const Config& config);

struct Artifact {
    std::string name;
    std::string content;
};

struct RunResult {
    /// Data files in the order they are written.
    std::vector<Artifact> files;
    /// Caps and guards that changed a reported value.
    nlohmann::json guard_trips = nlohmann::json::array();
    /// Verification outcome for kinds that check inequalities.
    bool checks_passed = true;
};

/// Runs a validated config in memory. Results depend only on the config.
RunResult execute(const Config& config, unsigned workers);

/// Writes the artifacts and manifest.json into `dir`, each through a
/// temporary file that is renamed into place.
void write_run(const Config& config, const RunResult& result, const std::string& dir, unsigned workers,
               double wall_seconds);

struct FileDiff {
    std::string name;
    double max_abs_diff = 0;
    std::size_t cells = 0;
};

struct CompareReport {
    std::vector<FileDiff> files;
    double max_abs_diff = 0;
    double tolerance = 0;
    bool pass = true;

    nlohmann::json to_json() const;
};

/// Per-cell comparison of two CSV files, or of the CSV files in two run
/// directories. Text cells must match exactly; numeric cells contribute their
/// absolute difference. Different headers, row counts or file sets are an
/// InputError.
CompareReport compare(const std::string& a, const std::string& b, double tolerance);

/// Exit status for an exception escaping a run: 2 input, 3 resource,
/// 4 numeric, 1 anything else.
int exit_code(const std::exception& e);

/// Runs a fixed set of small seeded configs twice and with several worker
/// counts, returning the names of those whose artifacts differ.
std::vector<std::string> determinism_probe();
int determinism_probe_count();

}  // namespace runner

#endif
