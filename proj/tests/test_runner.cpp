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

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "lightcone/error.hpp"
#include "runner.hpp"

namespace fs = std::filesystem;
using runner::Config;
using runner::Kind;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("lightcone_runner_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::string parse_error(const std::string& text) {
    try {
        runner::parse_config(text);
    } catch (const lightcone::InputError& e) {
        return e.what();
    }
    return "";
}

const char* kChain = R"({"kind":"bounds","parameters":{"family":"chain_1d","h":1},
    "grid":{"r":[1,2,3],"t":[0,0.5,1,2]}})";

}  // namespace

TEST(RunnerConfig, ParsesChainConfig) {
    Config c = runner::parse_config(kChain);
    EXPECT_EQ(c.kind, Kind::Bounds);
    EXPECT_EQ(c.r, (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(c.t.size(), 4u);
    EXPECT_EQ(c.to_json()["kind"], "bounds");
}

TEST(RunnerConfig, ErrorsNameTheField) {
    EXPECT_NE(parse_error("{not json").find("malformed JSON"), std::string::npos);
    EXPECT_NE(parse_error("[1,2]").find("config"), std::string::npos);
    EXPECT_NE(parse_error(R"({"parameters":{}})").find("kind"), std::string::npos);
    EXPECT_NE(parse_error(R"({"kind":"spin"})").find("kind"), std::string::npos);
    EXPECT_NE(parse_error(R"({"kind":"bounds","colour":1})").find("colour"), std::string::npos);
    EXPECT_NE(parse_error(R"({"kind":"bounds","parameters":{"family":"chain_1d","h":"x"},"grid":{"r":[1],"t":[1]}})")
                  .find("parameters.h"),
              std::string::npos);
    EXPECT_NE(parse_error(R"({"kind":"bounds","parameters":{"family":"chain_1d","h":1},"grid":{"r":[1],"t":[2,1]}})")
                  .find("grid.t"),
              std::string::npos);
    EXPECT_NE(parse_error(R"({"kind":"bounds","parameters":{"family":"chain_1d","h":1},"grid":{"r":[1],"t":[]}})")
                  .find("grid.t"),
              std::string::npos);
    EXPECT_NE(parse_error(R"({"kind":"bounds","parameters":{"family":"nope"},"grid":{"r":[1],"t":[1]}})")
                  .find("parameters.family"),
              std::string::npos);
    EXPECT_NE(parse_error(R"({"kind":"bounds","parameters":{"family":"chain_1d","h":1,"g":3},"grid":{"r":[1],"t":[1]}})")
                  .find("parameters.g"),
              std::string::npos);
    EXPECT_NE(parse_error(R"({"kind":"walk","parameters":{"h":1,"r_max":5},"grid":{"r":[0],"t":[3]}})")
                  .find("parameters.r_max"),
              std::string::npos);
    EXPECT_NE(parse_error(R"({"kind":"circuit","parameters":{"length":10,"depth":8,"samples":4}})")
                  .find("parameters.length"),
              std::string::npos);
    EXPECT_NE(parse_error(R"({"kind":"exact_verify","parameters":{"n":4},"grid":{"r":[4],"t":[1]}})").find("grid.r"),
              std::string::npos);
    EXPECT_NE(parse_error(R"({"kind":"bounds","seed":-1,"parameters":{"family":"chain_1d","h":1},"grid":{"r":[1],"t":[1]}})")
                  .find("seed"),
              std::string::npos);
}

TEST(RunnerConfig, OversizedExactRunIsAResourceError) {
    EXPECT_THROW(runner::parse_config(R"({"kind":"exact_verify","parameters":{"n":13},"grid":{"r":[1],"t":[1]}})"),
                 lightcone::ResourceError);
}

TEST(RunnerBounds, CurveHasOneRowPerCell) {
    runner::RunResult res = runner::execute(runner::parse_config(kChain), 2);
    ASSERT_EQ(res.files.size(), 1u);
    EXPECT_EQ(res.files[0].name, "curve.csv");
    EXPECT_EQ(lines(res.files[0].content), 1u + 3 * 4);
    EXPECT_EQ(res.files[0].content.substr(0, 17), "family,r,t,value\n");
}

TEST(RunnerBounds, GraphFamiliesAndGuards) {
    Config c = runner::parse_config(R"({"kind":"bounds","parameters":{"family":"path_sum",
        "graph":{"type":"cycle","n":8},"max_length":4},"grid":{"r":[1,2,3],"t":[0.5,1]}})");
    runner::RunResult res = runner::execute(c, 1);
    EXPECT_EQ(lines(res.files[0].content), 7u);
    ASSERT_EQ(res.guard_trips.size(), 1u);
    EXPECT_EQ(res.guard_trips[0]["guard"], "path_length_truncation");
    EXPECT_EQ(res.guard_trips[0]["cells"], 6);

    c = runner::parse_config(R"({"kind":"bounds","parameters":{"family":"single_particle","h":1,"epsilon":0.1},
        "grid":{"r":[2,4,6,8],"t":[0,0.25,0.5,0.75,1,1.25,1.5,1.75,2,2.25,2.5,2.75,3,3.25,3.5,3.75,4,4.25,4.5,4.75,5,5.25,5.5,5.75,6.0]}})");
    res = runner::execute(c, 1);
    ASSERT_EQ(res.files.size(), 2u);
    EXPECT_EQ(res.files[1].name, "lightcone.json");
    EXPECT_FALSE(res.guard_trips.empty());
}

TEST(RunnerExact, ChecksPassOnRandomChain) {
    Config c = runner::parse_config(
        R"({"kind":"exact_verify","parameters":{"n":5},"grid":{"r":[1,2,4],"t":[0,0.3,1]},"seed":3})");
    runner::RunResult res = runner::execute(c, 2);
    EXPECT_TRUE(res.checks_passed);
    ASSERT_EQ(res.files[0].name, "verify.csv");
    EXPECT_EQ(lines(res.files[0].content), 1u + 3 * 3 * 3);
    auto summary = nlohmann::json::parse(res.files.back().content);
    EXPECT_EQ(summary["checks"], 18);
    EXPECT_EQ(summary["violations"], 0);
}

TEST(RunnerWalk, WritesAmplitudesAndGapTables) {
    Config c = runner::parse_config(R"({"kind":"walk","parameters":{"h":1},"grid":{"r":[-2,0,3],"t":[0.5,1,2]}})");
    runner::RunResult res = runner::execute(c, 1);
    EXPECT_TRUE(res.checks_passed);
    EXPECT_EQ(res.files[0].name, "walk.csv");
    EXPECT_EQ(lines(res.files[0].content), 1u + 4 * 3 * 3);
    EXPECT_EQ(res.files[1].name, "gap_000.csv");
    EXPECT_EQ(res.files[3].name, "gap_002.csv");
}

TEST(RunnerProtocols, FidelitiesAndBoundCurve) {
    Config c = runner::parse_config(R"({"kind":"protocols","parameters":{"protocols":["ghz","w","ghz_bound"],
        "bound_n":8},"grid":{"r":[3,4],"t":[0,0.01,0.02]}})");
    runner::RunResult res = runner::execute(c, 1);
    EXPECT_TRUE(res.checks_passed);
    EXPECT_EQ(res.files[0].name, "protocols.csv");
    EXPECT_EQ(lines(res.files[0].content), 5u);
    EXPECT_EQ(res.files[1].name, "curve.csv");
}

TEST(RunnerFiles, WriteAndCompare) {
    fs::path dir = scratch("write");
    Config c = runner::parse_config(kChain);
    runner::write_run(c, runner::execute(c, 1), dir.string(), 1, 0.25);
    EXPECT_TRUE(fs::exists(dir / "curve.csv"));
    auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    for (const char* key : {"config", "version", "wall_time_seconds", "workers", "guard_trips", "outputs"}) {
        EXPECT_TRUE(manifest.contains(key)) << key;
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        EXPECT_NE(entry.path().extension(), ".tmp");
    }

    runner::CompareReport self = runner::compare(dir.string(), dir.string(), 0);
    EXPECT_TRUE(self.pass);
    EXPECT_EQ(self.max_abs_diff, 0);
    EXPECT_EQ(self.files[0].cells, 12u * 3);
    fs::remove_all(dir);
}

TEST(RunnerFiles, CrossModuleAgreement) {
    // The complete-graph closed form against the generic matrix exponential.
    fs::path a = scratch("cross_a"), b = scratch("cross_b");
    Config ghz = runner::parse_config(R"({"kind":"protocols","parameters":{"protocols":["ghz_bound"],"bound_n":8},
        "grid":{"t":[0,0.01,0.02,0.05,0.1]}})");
    Config mat = runner::parse_config(R"({"kind":"bounds","parameters":{"family":"matrix_exp",
        "graph":{"type":"complete","n":8},"a":[0]},"grid":{"r":[1],"t":[0,0.01,0.02,0.05,0.1]}})");
    runner::write_run(ghz, runner::execute(ghz, 1), a.string(), 1, 0);
    runner::write_run(mat, runner::execute(mat, 1), b.string(), 1, 0);
    runner::CompareReport rep = runner::compare((a / "curve.csv").string(), (b / "curve.csv").string(), 1e-9);
    EXPECT_TRUE(rep.pass) << rep.max_abs_diff;
    EXPECT_GT(rep.files[0].cells, 0u);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(RunnerFiles, DifferentSeedsDiffer) {
    fs::path a = scratch("seed_a"), b = scratch("seed_b");
    Config c = runner::parse_config(
        R"({"kind":"circuit","parameters":{"length":41,"depth":12,"samples":50},"seed":1})");
    runner::write_run(c, runner::execute(c, 1), a.string(), 1, 0);
    c.seed = 2;
    runner::write_run(c, runner::execute(c, 1), b.string(), 1, 0);
    runner::CompareReport rep = runner::compare(a.string(), b.string(), 0);
    EXPECT_FALSE(rep.pass);
    EXPECT_GT(rep.max_abs_diff, 0);
    EXPECT_TRUE(runner::compare(a.string(), a.string(), 0).pass);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(RunnerFiles, SchemaMismatchIsAnInputError) {
    fs::path a = scratch("schema_a"), b = scratch("schema_b");
    Config c = runner::parse_config(kChain);
    runner::write_run(c, runner::execute(c, 1), a.string(), 1, 0);
    c.r = {1, 2};
    runner::write_run(c, runner::execute(c, 1), b.string(), 1, 0);
    EXPECT_THROW(runner::compare(a.string(), b.string(), 1), lightcone::InputError);
    Config w = runner::parse_config(R"({"kind":"walk","parameters":{"h":1},"grid":{"r":[0],"t":[1]}})");
    fs::remove_all(b);
    runner::write_run(w, runner::execute(w, 1), b.string(), 1, 0);
    EXPECT_THROW(runner::compare(a.string(), b.string(), 1), lightcone::InputError);
    EXPECT_THROW(runner::compare((a / "curve.csv").string(), (b / "walk.csv").string(), 1), lightcone::InputError);
    EXPECT_THROW(runner::compare(a.string(), (a / "missing").string(), 1), lightcone::InputError);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(RunnerExit, CodesFollowTheErrorKind) {
    EXPECT_EQ(runner::exit_code(lightcone::InputError("x")), 2);
    EXPECT_EQ(runner::exit_code(lightcone::ResourceError("x")), 3);
    EXPECT_EQ(runner::exit_code(lightcone::NumericError("x")), 4);
    EXPECT_EQ(runner::exit_code(lightcone::FitError("x")), 4);
    EXPECT_EQ(runner::exit_code(std::runtime_error("x")), 1);
}

TEST(RunnerDeterminism, ProbeFindsNoDifferences) {
    EXPECT_TRUE(runner::determinism_probe().empty());
}

#ifdef LIGHTCONE_CLI
namespace {

int cli(const std::string& args) {
    int status = std::system((std::string(LIGHTCONE_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(RunnerCli, MalformedConfigWritesNothing) {
    fs::path dir = scratch("cli_bad");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.json") << "{\"kind\": \"bounds\", \"grid\": ";
    EXPECT_EQ(cli("bounds --config " + (dir / "bad.json").string() + " --out " + (dir / "run").string()), 2);
    EXPECT_FALSE(fs::exists(dir / "run"));
    EXPECT_EQ(cli("bounds --config " + (dir / "missing.json").string() + " --out " + (dir / "run").string()), 2);
    EXPECT_EQ(cli("frobnicate"), 2);
    fs::remove_all(dir);
}

TEST(RunnerCli, RunAndCompare) {
    fs::path dir = scratch("cli_run");
    fs::create_directories(dir);
    std::ofstream(dir / "chain.json") << kChain;
    EXPECT_EQ(cli("bounds --config " + (dir / "chain.json").string() + " --out " + (dir / "a").string()), 0);
    EXPECT_EQ(cli("bounds --workers 3 --config " + (dir / "chain.json").string() + " --out " + (dir / "b").string()), 0);
    EXPECT_EQ(slurp(dir / "a" / "curve.csv"), slurp(dir / "b" / "curve.csv"));
    EXPECT_EQ(cli("compare " + (dir / "a").string() + " " + (dir / "b").string()), 0);
    // Wrong subcommand for the config kind.
    EXPECT_EQ(cli("walk --config " + (dir / "chain.json").string() + " --out " + (dir / "c").string()), 2);
    EXPECT_FALSE(fs::exists(dir / "c"));
    fs::remove_all(dir);
}
#endif
