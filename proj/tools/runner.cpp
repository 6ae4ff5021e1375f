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

#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "lightcone/bounds.hpp"
#include "lightcone/circuit.hpp"
#include "lightcone/dense.hpp"
#include "lightcone/dynamics.hpp"
#include "lightcone/error.hpp"
#include "lightcone/graph.hpp"
#include "lightcone/parallel.hpp"
#include "lightcone/protocols.hpp"
#include "lightcone/walk.hpp"

#ifndef LIGHTCONE_VERSION
#define LIGHTCONE_VERSION "unknown"
#endif

namespace runner {

namespace fs = std::filesystem;
using json = nlohmann::json;
using lightcone::format_real;
using lightcone::InputError;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw InputError(field + ": " + what);
}

// ---------------------------------------------------------------------------
// Typed access to the parameters object.

class Params {
   public:
    explicit Params(const json& j) : j_(j) {}

    bool has(const std::string& key) const { return j_.contains(key); }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
        if (!j_.contains(key)) {
            if (fallback) {
                return *fallback;
            }
            fail(field(key), "required number is missing");
        }
        const json& v = j_.at(key);
        if (!v.is_number()) {
            fail(field(key), "expected a number");
        }
        double x = v.get<double>();
        if (!std::isfinite(x)) {
            fail(field(key), "must be finite");
        }
        return x;
    }

    double non_negative(const std::string& key, std::optional<double> fallback = std::nullopt) const {
        double x = number(key, fallback);
        if (x < 0) {
            fail(field(key), "must be non-negative");
        }
        return x;
    }

    double positive(const std::string& key, std::optional<double> fallback = std::nullopt) const {
        double x = number(key, fallback);
        if (!(x > 0)) {
            fail(field(key), "must be positive");
        }
        return x;
    }

    int integer(const std::string& key, int lo, std::optional<int> fallback = std::nullopt) const {
        if (!j_.contains(key)) {
            if (fallback) {
                return *fallback;
            }
            fail(field(key), "required integer is missing");
        }
        const json& v = j_.at(key);
        if (!v.is_number_integer()) {
            fail(field(key), "expected an integer");
        }
        auto x = v.get<std::int64_t>();
        if (x < lo || x > 1'000'000'000) {
            fail(field(key), "must be at least " + std::to_string(lo));
        }
        return static_cast<int>(x);
    }

    std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
        if (!j_.contains(key)) {
            if (fallback) {
                return *fallback;
            }
            fail(field(key), "required string is missing");
        }
        if (!j_.at(key).is_string()) {
            fail(field(key), "expected a string");
        }
        return j_.at(key).get<std::string>();
    }

    std::vector<int> int_list(const std::string& key, std::vector<int> fallback) const {
        if (!j_.contains(key)) {
            return fallback;
        }
        const json& v = j_.at(key);
        if (!v.is_array() || v.empty()) {
            fail(field(key), "expected a non-empty list of integers");
        }
        std::vector<int> out;
        for (const json& x : v) {
            if (!x.is_number_integer()) {
                fail(field(key), "expected a non-empty list of integers");
            }
            out.push_back(x.get<int>());
        }
        return out;
    }

    std::vector<std::string> text_list(const std::string& key, std::vector<std::string> fallback) const {
        if (!j_.contains(key)) {
            return fallback;
        }
        const json& v = j_.at(key);
        if (!v.is_array() || v.empty()) {
            fail(field(key), "expected a non-empty list of strings");
        }
        std::vector<std::string> out;
        for (const json& x : v) {
            if (!x.is_string()) {
                fail(field(key), "expected a non-empty list of strings");
            }
            out.push_back(x.get<std::string>());
        }
        return out;
    }

    const json& raw(const std::string& key) const { return j_.at(key); }

    void only(std::initializer_list<const char*> allowed) const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
            if (!ok) {
                fail(field(it.key()), "unknown parameter");
            }
        }
    }

   private:
    static std::string field(const std::string& key) { return "parameters." + key; }
    const json& j_;
};

void require_grid(const Config& c, bool need_r, bool need_t) {
    if (need_r && c.r.empty()) {
        fail("grid.r", "must be a non-empty list");
    }
    if (need_t && c.t.empty()) {
        fail("grid.t", "must be a non-empty list");
    }
}

// ---------------------------------------------------------------------------
// Kind-specific parameter sets.

struct BoundsSetup {
    lightcone::BoundFamily family = lightcone::BoundFamily::Chain1D;
    std::map<std::string, double> values;
    std::optional<lightcone::InteractionGraph> graph;
    std::vector<lightcone::Vertex> a;
    int max_length = 0;
    lightcone::PathOptions path_options;
    std::optional<double> qw_b;
    std::optional<double> epsilon;
};

lightcone::InteractionGraph graph_from_params(const json& g) {
    if (!g.is_object()) {
        fail("parameters.graph", "expected an object");
    }
    if (g.contains("vertices")) {
        return lightcone::graph_from_json(g.dump());
    }
    Params p(g);
    std::string type = p.text("type");
    double norm = p.positive("norm", 1.0);
    try {
        if (type == "path") {
            return lightcone::path_graph(p.integer("n", 1), norm);
        }
        if (type == "cycle") {
            return lightcone::cycle_graph(p.integer("n", 3), norm);
        }
        if (type == "complete") {
            return lightcone::complete_graph(p.integer("n", 1), norm);
        }
        if (type == "grid") {
            return lightcone::grid_graph(p.integer("nx", 1), p.integer("ny", 1), norm);
        }
    } catch (const InputError& e) {
        fail("parameters.graph", e.what());
    }
    fail("parameters.graph.type", "expected path, cycle, complete or grid, got '" + type + "'");
}

BoundsSetup bounds_setup(const Config& c) {
    require_grid(c, true, true);
    if (c.t.front() < 0) {
        fail("grid.t", "times must be non-negative");
    }
    Params p(c.parameters);
    BoundsSetup s;
    std::string name = p.text("family");
    try {
        s.family = lightcone::family_from_name(name);
    } catch (const InputError&) {
        fail("parameters.family", "unknown bound family '" + name + "'");
    }
    if (p.has("epsilon")) {
        double eps = p.number("epsilon");
        if (!(eps > 0 && eps <= 1)) {
            fail("parameters.epsilon", "must lie in (0, 1]");
        }
        s.epsilon = eps;
    }
    int min_r = 0;
    using F = lightcone::BoundFamily;
    switch (s.family) {
        case F::Chain1D:
            p.only({"family", "epsilon", "h"});
            s.values["h"] = p.non_negative("h");
            break;
        case F::BoundedDegree:
            p.only({"family", "epsilon", "h", "g"});
            s.values["h"] = p.non_negative("h");
            s.values["g"] = p.integer("g", 2);
            break;
        case F::SingleParticle:
            p.only({"family", "epsilon", "h"});
            s.values["h"] = p.non_negative("h");
            min_r = 1;
            break;
        case F::QWMarkov:
            p.only({"family", "epsilon", "h", "b"});
            s.values["h"] = p.non_negative("h");
            if (p.has("b")) {
                s.qw_b = p.positive("b");
                s.values["b"] = *s.qw_b;
            }
            min_r = 1;
            break;
        case F::ExpEnvelope:
            p.only({"family", "epsilon", "c", "mu", "v", "boundary"});
            s.values["c"] = p.positive("c");
            s.values["mu"] = p.positive("mu");
            s.values["v"] = p.positive("v");
            s.values["boundary"] = p.integer("boundary", 1);
            min_r = 1;
            break;
        case F::MatrixExp:
        case F::PathSum:
        case F::SelfAvoiding: {
            p.only({"family", "epsilon", "graph", "a", "max_length", "length_guard", "expansion_budget"});
            if (!p.has("graph")) {
                fail("parameters.graph", "required for family " + name);
            }
            s.graph = graph_from_params(p.raw("graph"));
            s.a = p.int_list("a", {s.graph->vertices().front()});
            for (int v : s.a) {
                if (!s.graph->contains(v)) {
                    fail("parameters.a", "vertex " + std::to_string(v) + " is not in the graph");
                }
            }
            for (int r : c.r) {
                if (!s.graph->contains(r)) {
                    fail("grid.r", "vertex " + std::to_string(r) + " is not in the graph");
                }
            }
            if (s.family != F::MatrixExp) {
                s.max_length = p.integer("max_length", 1);
                s.path_options.length_guard = p.integer("length_guard", 1, 20);
                if (p.has("expansion_budget")) {
                    s.path_options.expansion_budget = p.raw("expansion_budget").is_number_unsigned()
                                                          ? p.raw("expansion_budget").get<std::uint64_t>()
                                                          : 0;
                    if (s.path_options.expansion_budget == 0) {
                        fail("parameters.expansion_budget", "expected a positive integer");
                    }
                }
            } else if (p.has("max_length")) {
                fail("parameters.max_length", "only used by path_sum and self_avoiding");
            }
            s.values["vertices"] = static_cast<double>(s.graph->vertex_count());
            return s;
        }
        case F::Measured:
            fail("parameters.family", "'measured' is not a bound family");
    }
    for (int r : c.r) {
        if (r < min_r) {
            fail("grid.r", "values must be at least " + std::to_string(min_r) + " for family " + name);
        }
    }
    return s;
}

struct ExactSetup {
    lightcone::HamiltonianSpec spec;
    bool from_seed = true;
    int qubit_cap = lightcone::kDefaultQubitCap;
};

ExactSetup exact_setup(const Config& c) {
    require_grid(c, true, true);
    Params p(c.parameters);
    p.only({"n", "h_max", "hamiltonian", "qubit_cap"});
    ExactSetup s;
    s.qubit_cap = p.integer("qubit_cap", 1, lightcone::kDefaultQubitCap);
    if (p.has("hamiltonian")) {
        if (p.has("n") || p.has("h_max")) {
            fail("parameters.hamiltonian", "give either a hamiltonian or n and h_max, not both");
        }
        try {
            s.spec = lightcone::hamiltonian_from_json(p.raw("hamiltonian").dump());
            lightcone::bond_norms(s.spec);
        } catch (const InputError& e) {
            fail("parameters.hamiltonian", e.what());
        }
        s.from_seed = false;
    } else {
        s.spec.n = p.integer("n", 2);
        double h = p.positive("h_max", 1.0);
        if (s.spec.n > s.qubit_cap) {
            throw lightcone::ResourceError("parameters.n: " + std::to_string(s.spec.n) +
                                           " qubits exceed the cap of " + std::to_string(s.qubit_cap));
        }
        std::mt19937_64 rng(c.seed);
        s.spec = lightcone::random_chain(s.spec.n, h, rng);
    }
    for (int r : c.r) {
        if (r < 1 || r >= s.spec.n) {
            fail("grid.r", "distances must lie in [1, n - 1]");
        }
    }
    return s;
}

struct WalkSetup {
    double h = 0;
    bool ode = false;
    int r_max = 0;
};

WalkSetup walk_setup(const Config& c) {
    require_grid(c, true, true);
    Params p(c.parameters);
    p.only({"h", "method", "r_max"});
    WalkSetup s;
    s.h = p.non_negative("h");
    std::string method = p.text("method", "exact");
    if (method != "exact" && method != "ode") {
        fail("parameters.method", "expected 'exact' or 'ode'");
    }
    s.ode = method == "ode";
    for (double t : c.t) {
        if (t < 0) {
            fail("grid.t", "times must be non-negative");
        }
    }
    int need = 0;
    for (double t : c.t) {
        need = std::max(need, lightcone::walk_min_range(s.h, t));
    }
    s.r_max = p.integer("r_max", 1, need);
    if (s.r_max < need) {
        fail("parameters.r_max", "must be at least " + std::to_string(need) + " for the largest time");
    }
    for (int r : c.r) {
        if (std::abs(r) > s.r_max) {
            fail("grid.r", "sites must lie within r_max = " + std::to_string(s.r_max));
        }
    }
    return s;
}

lightcone::SpreadConfig circuit_setup(const Config& c, unsigned workers) {
    Params p(c.parameters);
    p.only({"length", "depth", "initial_site", "samples"});
    lightcone::SpreadConfig s;
    s.length = p.integer("length", 2);
    s.depth = p.integer("depth", 1);
    s.initial_site = p.integer("initial_site", 0, s.length / 2);
    s.samples = p.integer("samples", 2);
    s.seed = c.seed;
    s.workers = workers;
    if (s.length < 2 * s.depth + 2) {
        fail("parameters.length", "must be at least 2 * depth + 2");
    }
    if (s.initial_site < s.depth || s.initial_site > s.length - 1 - s.depth) {
        fail("parameters.initial_site", "must be at least depth sites from either end");
    }
    return s;
}

struct ProtocolSetup {
    bool ghz = false;
    bool w = false;
    bool bound = false;
    int bound_n = 0;
    double a = 1;
    double b = 0;
    int qubit_cap = lightcone::kDefaultQubitCap;
};

ProtocolSetup protocol_setup(const Config& c) {
    Params p(c.parameters);
    p.only({"protocols", "bound_n", "a", "b", "qubit_cap"});
    ProtocolSetup s;
    for (const std::string& name : p.text_list("protocols", {"ghz", "w"})) {
        if (name == "ghz") {
            s.ghz = true;
        } else if (name == "w") {
            s.w = true;
        } else if (name == "ghz_bound") {
            s.bound = true;
        } else {
            fail("parameters.protocols", "unknown protocol '" + name + "' (expected ghz, w or ghz_bound)");
        }
    }
    s.qubit_cap = p.integer("qubit_cap", 1, lightcone::kDefaultQubitCap);
    if (s.ghz || s.w) {
        require_grid(c, true, false);
        for (int n : c.r) {
            if (n < (s.w ? 3 : 2)) {
                fail("grid.r", std::string("qubit counts must be at least ") + (s.w ? "3 for w" : "2"));
            }
            if (n > s.qubit_cap) {
                throw lightcone::ResourceError("grid.r: " + std::to_string(n) + " qubits exceed the cap of " +
                                               std::to_string(s.qubit_cap));
            }
        }
    }
    if (s.bound) {
        require_grid(c, false, true);
        s.bound_n = p.integer("bound_n", 2);
        s.a = p.non_negative("a", 1.0);
        s.b = p.non_negative("b", (s.bound_n - 2) * s.a / s.bound_n);
    } else if (p.has("bound_n") || p.has("a") || p.has("b")) {
        fail("parameters.protocols", "bound_n, a and b need the ghz_bound protocol");
    }
    return s;
}

// ---------------------------------------------------------------------------
// Output helpers.

struct DumpRow {
    std::string quantity;
    int r = 0;
    double t = 0;
    double value = 0;
};

std::string dump_csv(const std::vector<DumpRow>& rows) {
    std::ostringstream out;
    out << "quantity,r,t,value\n";
    for (const DumpRow& row : rows) {
        out << row.quantity << ',' << row.r << ',' << format_real(row.t) << ',' << format_real(row.value) << '\n';
    }
    return out.str();
}

std::string dump_json(const json& j) {
    return j.dump(2) + "\n";
}

json trip(const std::string& guard, std::size_t cells, const std::string& detail) {
    return {{"guard", guard}, {"cells", cells}, {"detail", detail}};
}

std::size_t count_at(const lightcone::BoundCurve& c, double cap) {
    return static_cast<std::size_t>(
        std::count_if(c.grid.begin(), c.grid.end(), [cap](const lightcone::CurvePoint& p) { return p.value >= cap; }));
}

const lightcone::Pauli kPaulis[3] = {lightcone::Pauli::X, lightcone::Pauli::Y, lightcone::Pauli::Z};

// ---------------------------------------------------------------------------
// Execution per kind.

RunResult run_bounds(const Config& c, unsigned workers) {
    BoundsSetup s = bounds_setup(c);
    using F = lightcone::BoundFamily;
    RunResult out;
    lightcone::BoundCurve curve;
    const auto& v = s.values;
    switch (s.family) {
        case F::Chain1D:
            curve = lightcone::evaluate_curve(
                s.family, [&](int r, double t) { return lightcone::chain_bound(v.at("h"), r, t); }, c.r, c.t,
                workers, v);
            break;
        case F::BoundedDegree:
            curve = lightcone::evaluate_curve(
                s.family,
                [&](int r, double t) {
                    return lightcone::bounded_degree_bound(static_cast<int>(v.at("g")), v.at("h"), r, t);
                },
                c.r, c.t, workers, v);
            if (std::size_t n = count_at(curve, 2.0)) {
                out.guard_trips.push_back(trip("bounded_degree_cap", n, "values capped at 2"));
            }
            break;
        case F::SingleParticle:
            curve = lightcone::evaluate_curve(
                s.family, [&](int r, double t) { return lightcone::single_particle_bound(v.at("h"), r, t); }, c.r,
                c.t, workers, v);
            if (std::size_t n = count_at(curve, 1.0)) {
                out.guard_trips.push_back(trip("single_particle_cap", n, "values capped at 1"));
            }
            break;
        case F::QWMarkov:
            curve = lightcone::evaluate_curve(
                s.family, [&](int r, double t) { return lightcone::qw_markov_bound(v.at("h"), r, t, s.qw_b); }, c.r,
                c.t, workers, v);
            if (std::size_t n = count_at(curve, 1.0)) {
                out.guard_trips.push_back(trip("qw_markov_clip", n, "values clipped at 1"));
            }
            break;
        case F::ExpEnvelope:
            curve = lightcone::evaluate_curve(
                s.family,
                [&](int r, double t) {
                    return lightcone::exp_envelope(v.at("c"), v.at("mu"), v.at("v"), static_cast<int>(v.at("boundary")),
                                                   r, t);
                },
                c.r, c.t, workers, v);
            break;
        case F::MatrixExp: {
            std::vector<std::vector<double>> rows(c.r.size());
            lightcone::parallel_for(c.r.size(), workers, [&](std::size_t i) {
                std::vector<lightcone::Vertex> b{c.r[i]};
                rows[i] = lightcone::matrix_exp_bound(*s.graph, s.a, b, c.t);
            });
            curve.family = s.family;
            curve.params = v;
            for (std::size_t i = 0; i < c.r.size(); i++) {
                for (std::size_t k = 0; k < c.t.size(); k++) {
                    curve.grid.push_back({c.r[i], c.t[k], rows[i][k]});
                }
            }
            break;
        }
        case F::PathSum:
        case F::SelfAvoiding: {
            bool avoid = s.family == F::SelfAvoiding;
            std::vector<std::vector<lightcone::PathTotal>> totals(c.r.size());
            lightcone::parallel_for(c.r.size(), workers, [&](std::size_t i) {
                std::vector<lightcone::Vertex> b{c.r[i]};
                totals[i] = lightcone::enumerate_paths(*s.graph, s.a, b, s.max_length, avoid, s.path_options);
            });
            curve.family = s.family;
            curve.params = v;
            curve.params["max_length"] = s.max_length;
            std::size_t truncated = 0;
            double worst = 0;
            for (std::size_t i = 0; i < c.r.size(); i++) {
                for (double t : c.t) {
                    lightcone::PathSum ps = lightcone::path_sum_from_totals(*s.graph, s.a, totals[i], t, avoid);
                    curve.grid.push_back({c.r[i], t, ps.partial_sum});
                    if (ps.tail_estimate > 0) {
                        truncated++;
                        worst = std::max(worst, ps.tail_estimate);
                    }
                }
            }
            if (truncated) {
                out.guard_trips.push_back(trip("path_length_truncation", truncated,
                                               "largest discarded-tail bound " + format_real(worst)));
            }
            break;
        }
        case F::Measured:
            break;
    }
    std::string problem = curve.validate(1e-9);
    if (!problem.empty()) {
        throw lightcone::NumericError("bounds: " + problem);
    }
    out.files.push_back({"curve.csv", lightcone::curve_to_csv(curve)});
    if (s.epsilon) {
        out.files.push_back({"lightcone.json", lightcone::report_to_json(lightcone::light_cone_fit(curve, *s.epsilon)) + "\n"});
    }
    return out;
}

RunResult run_exact(const Config& c, unsigned workers) {
    ExactSetup s = exact_setup(c);
    int n = s.spec.n;
    double h = lightcone::chain_coupling(s.spec);
    lightcone::Propagator prop(lightcone::build_hamiltonian(s.spec, s.qubit_cap));
    std::size_t nr = c.r.size(), nt = c.t.size();
    std::vector<double> op(nr * nt, 0.0), frob(nr * nt, 0.0);
    for (lightcone::Pauli pa : kPaulis) {
        lightcone::HeisenbergTrajectory traj(
            prop, lightcone::pauli_string_matrix(lightcone::PauliString::single(static_cast<std::size_t>(n), 0, pa)));
        lightcone::parallel_for(nt, workers, [&](std::size_t k) {
            lightcone::Matrix m = traj.at(c.t[k]);
            for (std::size_t i = 0; i < nr; i++) {
                for (lightcone::Pauli pb : kPaulis) {
                    auto norms = lightcone::commutator_norms_with_pauli(
                        m, lightcone::PauliString::single(static_cast<std::size_t>(n), static_cast<std::size_t>(c.r[i]), pb));
                    op[i * nt + k] = std::max(op[i * nt + k], norms.op_norm);
                    frob[i * nt + k] = std::max(frob[i * nt + k], norms.frob_norm);
                }
            }
        });
    }
    std::vector<DumpRow> rows;
    std::size_t checks = 0, violations = 0;
    double max_ratio = 0;
    for (const char* q : {"commutator_op", "commutator_frob", "chain_bound"}) {
        for (std::size_t i = 0; i < nr; i++) {
            for (std::size_t k = 0; k < nt; k++) {
                double bound = lightcone::chain_bound(h, c.r[i], c.t[k]);
                double value = q[11] == 'o' ? op[i * nt + k] : q[11] == 'f' ? frob[i * nt + k] : bound;
                rows.push_back({q, c.r[i], c.t[k], value});
            }
        }
    }
    for (std::size_t i = 0; i < nr; i++) {
        for (std::size_t k = 0; k < nt; k++) {
            double bound = lightcone::chain_bound(h, c.r[i], c.t[k]);
            double half = op[i * nt + k] / 2;
            checks += 2;
            violations += half > bound + 1e-9;
            violations += frob[i * nt + k] > op[i * nt + k] + 1e-12;
            if (bound > 0) {
                max_ratio = std::max(max_ratio, half / bound);
            }
        }
    }
    RunResult out;
    out.checks_passed = violations == 0;
    out.files.push_back({"verify.csv", dump_csv(rows)});
    out.files.push_back({"hamiltonian.json", lightcone::hamiltonian_to_json(s.spec) + "\n"});
    json summary = {{"checks", checks},
                    {"violations", violations},
                    {"pass", out.checks_passed},
                    {"h", h},
                    {"max_ratio", max_ratio},
                    {"commutator_convention", "op / 2 compared with chain_bound"}};
    out.files.push_back({"summary.json", dump_json(summary)});
    return out;
}

RunResult run_walk(const Config& c, unsigned workers) {
    WalkSetup s = walk_setup(c);
    std::size_t nt = c.t.size();
    std::vector<lightcone::WalkState> states(nt);
    lightcone::parallel_for(nt, workers, [&](std::size_t k) {
        states[k] = s.ode ? lightcone::walk_ode(s.h, c.t[k], s.r_max) : lightcone::walk_exact(s.h, c.t[k], s.r_max);
    });
    std::vector<DumpRow> rows;
    std::size_t checks = 0, violations = 0, leaky = 0;
    double min_prob = 1;
    std::vector<std::vector<double>> tails(nt);
    for (std::size_t k = 0; k < nt; k++) {
        const auto& st = states[k];
        min_prob = std::min(min_prob, st.probability());
        leaky += st.probability() < 1 - 1e-10;
        std::vector<double>& tail = tails[k];
        tail.assign(static_cast<std::size_t>(s.r_max) + 2, 0.0);
        for (int x = s.r_max; x >= 0; x--) {
            tail[static_cast<std::size_t>(x)] = tail[static_cast<std::size_t>(x) + 1] + std::norm(st.at(x));
        }
    }
    auto amp_bound = [&](int r, double t) { return r == 0 ? 1.0 : lightcone::single_particle_bound(s.h, std::abs(r), t); };
    auto qw = [&](int r, double t) { return r == 0 ? 1.0 : lightcone::qw_markov_bound(s.h, std::abs(r), t); };
    auto tail_at = [&](std::size_t k, int r) { return tails[k][static_cast<std::size_t>(std::abs(r))]; };
    for (const char* q : {"abs_psi", "single_particle_bound", "tail", "qw_tail_bound"}) {
        std::string name = q;
        for (int r : c.r) {
            for (std::size_t k = 0; k < nt; k++) {
                double t = c.t[k];
                double value = name == "abs_psi"    ? std::abs(states[k].at(r))
                               : name == "single_particle_bound" ? amp_bound(r, t)
                               : name == "tail"     ? tail_at(k, r)
                                                    : qw(r, t);
                rows.push_back({name, r, t, value});
            }
        }
    }
    for (int r : c.r) {
        for (std::size_t k = 0; k < nt; k++) {
            checks += 2;
            violations += std::abs(states[k].at(r)) > amp_bound(r, c.t[k]) + 1e-12;
            violations += tail_at(k, r) > qw(r, c.t[k]) + 1e-12;
        }
    }
    RunResult out;
    out.checks_passed = violations == 0;
    out.files.push_back({"walk.csv", dump_csv(rows)});
    for (std::size_t k = 0; k < nt; k++) {
        char name[32];
        std::snprintf(name, sizeof name, "gap_%03zu.csv", k);
        out.files.push_back({name, lightcone::gap_table_to_csv(lightcone::walk_bound_gap(s.h, c.t[k], s.r_max))});
    }
    json summary = {{"checks", checks},
                    {"violations", violations},
                    {"pass", out.checks_passed},
                    {"method", s.ode ? "ode" : "exact"},
                    {"r_max", s.r_max},
                    {"min_probability", min_prob}};
    out.files.push_back({"summary.json", dump_json(summary)});
    if (leaky) {
        out.guard_trips.push_back(trip("walk_truncation", leaky, "probability below 1 - 1e-10, lowest " + format_real(min_prob)));
    }
    return out;
}

RunResult run_circuit(const Config& c, unsigned workers) {
    lightcone::SpreadStats stats = lightcone::run_spread(circuit_setup(c, workers));
    auto violation = lightcone::strict_cone_check(stats);
    RunResult out;
    out.checks_passed = !violation;
    out.files.push_back({"spread.csv", lightcone::spread_to_csv(stats)});
    out.files.push_back({"summary.json", lightcone::spread_summary_json(stats) + "\n"});
    json cone = {{"strict_cone", !violation},
                 {"violation", violation ? json{{"sample", violation->sample}, {"step", violation->step}} : json(nullptr)},
                 {"v_b_upper99", stats.v_b_upper99}};
    json hist = json::array();
    for (std::uint64_t h : stats.support_histogram) {
        hist.push_back(h);
    }
    cone["support_histogram"] = hist;
    out.files.push_back({"cone.json", dump_json(cone)});
    return out;
}

RunResult run_protocols(const Config& c, unsigned) {
    ProtocolSetup s = protocol_setup(c);
    std::vector<DumpRow> rows;
    std::size_t checks = 0, violations = 0;
    if (s.ghz) {
        for (int n : c.r) {
            auto res = lightcone::run_ghz_protocol(n, std::numbers::pi / 4, s.qubit_cap);
            rows.push_back({"ghz_fidelity", n, res.time, res.fidelity});
            checks++;
            violations += std::abs(res.fidelity - 1) > 1e-9;
        }
    }
    if (s.w) {
        for (int n : c.r) {
            auto res = lightcone::run_w_protocol(n, -1, s.qubit_cap);
            rows.push_back({"w_fidelity", n, res.time, res.fidelity});
            checks++;
            violations += std::abs(res.fidelity - 1) > 1e-9;
        }
    }
    RunResult out;
    out.checks_passed = violations == 0;
    if (!rows.empty()) {
        out.files.push_back({"protocols.csv", dump_csv(rows)});
    }
    if (s.bound) {
        out.files.push_back({"curve.csv", lightcone::curve_to_csv(lightcone::ghz_lower_bound_curve(s.bound_n, s.a, s.b, c.t))});
    }
    json summary = {{"checks", checks}, {"violations", violations}, {"pass", out.checks_passed}};
    if (s.bound) {
        summary["ghz_bound"] = {{"N", s.bound_n}, {"a", s.a}, {"b", s.b}};
    }
    out.files.push_back({"summary.json", dump_json(summary)});
    return out;
}

// ---------------------------------------------------------------------------
// CSV comparison.

struct Csv {
    std::string header;
    std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

Csv read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("compare: cannot read " + path.string());
    }
    Csv csv;
    if (!std::getline(in, csv.header)) {
        throw InputError("compare: " + path.string() + " is empty");
    }
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            csv.rows.push_back(split(line));
        }
    }
    return csv;
}

std::optional<double> as_number(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    char* end = nullptr;
    double x = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) {
        return std::nullopt;
    }
    return x;
}

FileDiff compare_csv(const fs::path& a, const fs::path& b, const std::string& name) {
    Csv ca = read_csv(a), cb = read_csv(b);
    if (ca.header != cb.header) {
        throw InputError("compare: schema mismatch in " + name + ": headers '" + ca.header + "' and '" + cb.header + "'");
    }
    if (ca.rows.size() != cb.rows.size()) {
        throw InputError("compare: schema mismatch in " + name + ": " + std::to_string(ca.rows.size()) + " and " +
                         std::to_string(cb.rows.size()) + " rows");
    }
    FileDiff d{name, 0, 0};
    for (std::size_t i = 0; i < ca.rows.size(); i++) {
        const auto& ra = ca.rows[i];
        const auto& rb = cb.rows[i];
        if (ra.size() != rb.size()) {
            throw InputError("compare: schema mismatch in " + name + " at row " + std::to_string(i + 1));
        }
        for (std::size_t j = 0; j < ra.size(); j++) {
            auto xa = as_number(ra[j]), xb = as_number(rb[j]);
            if (xa && xb) {
                double diff = *xa == *xb ? 0.0 : std::abs(*xa - *xb);
                if (std::isnan(diff)) {
                    diff = std::numeric_limits<double>::infinity();
                }
                d.max_abs_diff = std::max(d.max_abs_diff, diff);
                d.cells++;
            } else if (ra[j] != rb[j]) {
                throw InputError("compare: schema mismatch in " + name + " at row " + std::to_string(i + 1) +
                                 ", column " + std::to_string(j + 1) + ": '" + ra[j] + "' vs '" + rb[j] + "'");
            }
        }
    }
    return d;
}

std::vector<std::string> csv_names(const fs::path& dir) {
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            out.push_back(entry.path().filename().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view kind_name(Kind k) {
    switch (k) {
        case Kind::Bounds:
            return "bounds";
        case Kind::ExactVerify:
            return "exact_verify";
        case Kind::Walk:
            return "walk";
        case Kind::Circuit:
            return "circuit";
        case Kind::Protocols:
            return "protocols";
    }
    return "unknown";
}

Kind kind_from_name(std::string_view name) {
    for (Kind k : {Kind::Bounds, Kind::ExactVerify, Kind::Walk, Kind::Circuit, Kind::Protocols}) {
        if (kind_name(k) == name) {
            return k;
        }
    }
    if (name == "exact") {
        return Kind::ExactVerify;
    }
    fail("kind", "expected bounds, exact_verify, walk, circuit or protocols, got '" + std::string(name) + "'");
}

json Config::to_json() const {
    return {{"kind", kind_name(kind)},
            {"parameters", parameters},
            {"grid", {{"r", r}, {"t", t}}},
            {"seed", seed},
            {"output", output}};
}

Config parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) {
        fail("config", "expected a JSON object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        static const std::set<std::string> known{"kind", "parameters", "grid", "seed", "output"};
        if (!known.count(it.key())) {
            fail(it.key(), "unknown field");
        }
    }
    Config c;
    if (!j.contains("kind") || !j["kind"].is_string()) {
        fail("kind", "required string is missing");
    }
    c.kind = kind_from_name(j["kind"].get<std::string>());
    if (j.contains("parameters")) {
        if (!j["parameters"].is_object()) {
            fail("parameters", "expected an object");
        }
        c.parameters = j["parameters"];
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (!g.is_object()) {
            fail("grid", "expected an object with r and t lists");
        }
        for (auto it = g.begin(); it != g.end(); ++it) {
            if (it.key() != "r" && it.key() != "t") {
                fail("grid." + it.key(), "unknown field");
            }
        }
        if (g.contains("r")) {
            if (!g["r"].is_array()) {
                fail("grid.r", "expected a list of integers");
            }
            for (const json& x : g["r"]) {
                if (!x.is_number_integer()) {
                    fail("grid.r", "expected a list of integers");
                }
                c.r.push_back(x.get<int>());
            }
        }
        if (g.contains("t")) {
            if (!g["t"].is_array()) {
                fail("grid.t", "expected a list of numbers");
            }
            for (const json& x : g["t"]) {
                if (!x.is_number() || !std::isfinite(x.get<double>())) {
                    fail("grid.t", "expected a list of finite numbers");
                }
                c.t.push_back(x.get<double>());
            }
        }
        for (std::size_t i = 1; i < c.r.size(); i++) {
            if (c.r[i] <= c.r[i - 1]) {
                fail("grid.r", "values must be strictly ascending");
            }
        }
        for (std::size_t i = 1; i < c.t.size(); i++) {
            if (c.t[i] <= c.t[i - 1]) {
                fail("grid.t", "values must be strictly ascending");
            }
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) {
            fail("seed", "expected a non-negative 64-bit integer");
        }
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("output")) {
        if (!j["output"].is_string()) {
            fail("output", "expected a path string");
        }
        c.output = j["output"].get<std::string>();
    }
    validate(c);
    return c;
}

void validate(const Config& config) {
    switch (config.kind) {
        case Kind::Bounds:
            bounds_setup(config);
            break;
        case Kind::ExactVerify:
            exact_setup(config);
            break;
        case Kind::Walk:
            walk_setup(config);
            break;
        case Kind::Circuit:
            circuit_setup(config, 1);
            break;
        case Kind::Protocols:
            protocol_setup(config);
            break;
    }
}

RunResult execute(const Config& config, unsigned workers) {
    workers = std::max(workers, 1u);
    switch (config.kind) {
        case Kind::Bounds:
            return run_bounds(config, workers);
        case Kind::ExactVerify:
            return run_exact(config, workers);
        case Kind::Walk:
            return run_walk(config, workers);
        case Kind::Circuit:
            return run_circuit(config, workers);
        case Kind::Protocols:
            return run_protocols(config, workers);
    }
    throw InputError("kind: unsupported");
}

void write_run(const Config& config, const RunResult& result, const std::string& dir, unsigned workers,
               double wall_seconds) {
    fs::path root(dir);
    fs::create_directories(root);
    json outputs = json::array();
    for (const Artifact& a : result.files) {
        write_atomic(root / a.name, a.content);
        outputs.push_back(a.name);
    }
    json manifest = {{"config", config.to_json()},
                     {"version", LIGHTCONE_VERSION},
                     {"wall_time_seconds", wall_seconds},
                     {"workers", workers},
                     {"guard_trips", result.guard_trips},
                     {"checks_passed", result.checks_passed},
                     {"outputs", outputs}};
    write_atomic(root / "manifest.json", dump_json(manifest));
}

json CompareReport::to_json() const {
    json files_json = json::array();
    for (const FileDiff& f : files) {
        files_json.push_back({{"file", f.name}, {"max_abs_diff", f.max_abs_diff}, {"cells", f.cells}});
    }
    return {{"files", files_json}, {"max_abs_diff", max_abs_diff}, {"tolerance", tolerance}, {"pass", pass}};
}

CompareReport compare(const std::string& a, const std::string& b, double tolerance) {
    if (!(tolerance >= 0)) {
        throw InputError("compare: tolerance must be non-negative");
    }
    fs::path pa(a), pb(b);
    for (const fs::path& p : {pa, pb}) {
        if (!fs::exists(p)) {
            throw InputError("compare: " + p.string() + " does not exist");
        }
    }
    CompareReport rep;
    rep.tolerance = tolerance;
    if (fs::is_directory(pa) && fs::is_directory(pb)) {
        auto na = csv_names(pa), nb = csv_names(pb);
        if (na != nb) {
            throw InputError("compare: schema mismatch: the runs contain different CSV files");
        }
        if (na.empty()) {
            throw InputError("compare: no CSV files in " + a);
        }
        for (const std::string& name : na) {
            rep.files.push_back(compare_csv(pa / name, pb / name, name));
        }
    } else if (fs::is_regular_file(pa) && fs::is_regular_file(pb)) {
        rep.files.push_back(compare_csv(pa, pb, pa.filename().string()));
    } else {
        throw InputError("compare: give two files or two run directories");
    }
    for (const FileDiff& f : rep.files) {
        rep.max_abs_diff = std::max(rep.max_abs_diff, f.max_abs_diff);
    }
    rep.pass = rep.max_abs_diff <= tolerance;
    return rep;
}

int exit_code(const std::exception& e) {
    if (dynamic_cast<const lightcone::InputError*>(&e)) {
        return 2;
    }
    if (dynamic_cast<const lightcone::ResourceError*>(&e)) {
        return 3;
    }
    if (dynamic_cast<const lightcone::NumericError*>(&e)) {
        return 4;
    }
    return 1;
}

namespace {

const char* const kProbeConfigs[] = {
    R"({"kind":"bounds","parameters":{"family":"chain_1d","h":1,"epsilon":0.5},
        "grid":{"r":[1,2,3,4,5,6],"t":[0,0.25,0.5,0.75,1,1.5,2,2.5,3]}})",
    R"({"kind":"bounds","parameters":{"family":"self_avoiding","graph":{"type":"grid","nx":3,"ny":3},"a":[0],
        "max_length":8},"grid":{"r":[2,4,8],"t":[0.1,0.2,0.4]}})",
    R"({"kind":"exact_verify","parameters":{"n":6,"h_max":1},"grid":{"r":[1,2,3,5],"t":[0.1,0.4,0.8]},"seed":17})",
    R"({"kind":"walk","parameters":{"h":1,"method":"ode"},"grid":{"r":[-3,0,2,5],"t":[0.5,1]}})",
    R"({"kind":"circuit","parameters":{"length":61,"depth":20,"initial_site":30,"samples":300},"seed":5})",
    R"({"kind":"protocols","parameters":{"protocols":["ghz","w","ghz_bound"],"bound_n":6},
        "grid":{"r":[3,4,5],"t":[0,0.05,0.1]}})",
};

}  // namespace

std::vector<std::string> determinism_probe() {
    std::vector<std::string> mismatches;
    for (std::size_t k = 0; k < std::size(kProbeConfigs); k++) {
        Config c = parse_config(kProbeConfigs[k]);
        RunResult first = execute(c, 1);
        std::string name = std::string(kind_name(c.kind)) + "#" + std::to_string(k);
        for (unsigned workers : {1u, 3u}) {
            RunResult again = execute(c, workers);
            bool same = again.files.size() == first.files.size();
            for (std::size_t i = 0; same && i < first.files.size(); i++) {
                same = first.files[i].name == again.files[i].name && first.files[i].content == again.files[i].content;
            }
            if (!same) {
                mismatches.push_back(name + " (workers " + std::to_string(workers) + ")");
            }
        }
    }
    return mismatches;
}

int determinism_probe_count() {
    return static_cast<int>(std::size(kProbeConfigs));
}

}  // namespace runner
