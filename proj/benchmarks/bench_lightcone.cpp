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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "lightcone/bounds.hpp"
#include "lightcone/circuit.hpp"
#include "lightcone/dynamics.hpp"
#include "lightcone/graph.hpp"
#include "lightcone/walk.hpp"

using namespace lightcone;

namespace {

void BM_MatrixExpBound(benchmark::State& state) {
    auto g = grid_graph(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
    std::vector<Vertex> a{0}, b{g.vertices().back()};
    std::vector<double> ts;
    for (int k = 0; k <= 50; k++) {
        ts.push_back(0.02 * k);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(matrix_exp_bound(g, a, b, ts));
    }
}
BENCHMARK(BM_MatrixExpBound)->Arg(4)->Arg(8)->Arg(16);

void BM_SelfAvoidingPaths(benchmark::State& state) {
    auto g = grid_graph(4, 4);
    std::vector<Vertex> a{0}, b{15};
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_paths(g, a, b, static_cast<int>(state.range(0)), true));
    }
}
BENCHMARK(BM_SelfAvoidingPaths)->Arg(8)->Arg(10)->Arg(12);

void BM_UnrestrictedPaths(benchmark::State& state) {
    auto g = grid_graph(6, 6);
    std::vector<Vertex> a{0}, b{35};
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_paths(g, a, b, static_cast<int>(state.range(0)), false));
    }
}
BENCHMARK(BM_UnrestrictedPaths)->Arg(10)->Arg(20);

void BM_ChainCurve(benchmark::State& state) {
    std::vector<int> rs;
    std::vector<double> ts;
    for (int r = 1; r <= 50; r++) {
        rs.push_back(r);
    }
    for (int k = 0; k <= 200; k++) {
        ts.push_back(0.05 * k);
    }
    auto workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_curve(
            BoundFamily::Chain1D, [](int r, double t) { return chain_bound(1.0, r, t); }, rs, ts, workers));
    }
}
BENCHMARK(BM_ChainCurve)->Arg(1)->Arg(4);

void BM_HeisenbergCommutator(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(7);
    Propagator p(build_hamiltonian(random_chain(n, 1.0, rng)));
    HeisenbergTrajectory traj(p, pauli_string_matrix(PauliString::single(static_cast<std::size_t>(n), 0, Pauli::X)));
    PauliString probe = PauliString::single(static_cast<std::size_t>(n), static_cast<std::size_t>(n - 1), Pauli::Z);
    for (auto _ : state) {
        benchmark::DoNotOptimize(commutator_norms_with_pauli(traj.at(1.0), probe));
    }
}
BENCHMARK(BM_HeisenbergCommutator)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_WalkExact(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(walk_exact(1.0, 10.0, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_WalkExact)->Arg(100)->Arg(400);

void BM_WalkOde(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(walk_ode(1.0, 5.0, 60));
    }
}
BENCHMARK(BM_WalkOde)->Unit(benchmark::kMillisecond);

void BM_RunSpread(benchmark::State& state) {
    SpreadConfig c;
    c.length = 201;
    c.depth = 80;
    c.initial_site = 100;
    c.samples = 200;
    c.seed = 1;
    c.workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_spread(c));
    }
}
BENCHMARK(BM_RunSpread)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
