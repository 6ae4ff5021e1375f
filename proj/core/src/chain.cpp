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

#include <algorithm>
#include <cmath>

#include "lightcone/bounds.hpp"
#include "lightcone/dynamics.hpp"
#include "lightcone/error.hpp"

namespace lightcone {

namespace {

constexpr Pauli kNonIdentity[3] = {Pauli::X, Pauli::Y, Pauli::Z};

// Random combination of the nine two-site strings on (i, j), scaled to norm
// `target`.
std::vector<PauliTerm> random_bond(int n, int i, int j, double target, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<PauliTerm> local, out;
    for (Pauli a : kNonIdentity) {
        for (Pauli b : kNonIdentity) {
            PauliString s(2);
            s.set(0, a);
            s.set(1, b);
            local.push_back({normal(rng), s});
        }
    }
    HamiltonianSpec two{2, local, {}};
    double norm = op_norm(build_hamiltonian(two).matrix());
    double scale = norm > 0 ? target / norm : 0.0;
    for (const PauliTerm& term : local) {
        PauliString s(static_cast<std::size_t>(n));
        s.set(static_cast<std::size_t>(i), term.string[0]);
        s.set(static_cast<std::size_t>(j), term.string[1]);
        out.push_back({term.coeff * scale, s});
    }
    return out;
}

struct Interval {
    int lo = 0;
    int hi = 0;
};

Interval as_interval(std::span<const int> sites, int n, const char* what) {
    if (sites.empty()) {
        throw InputError(std::string("patching_error: region ") + what + " is empty");
    }
    std::vector<int> s(sites.begin(), sites.end());
    std::sort(s.begin(), s.end());
    if (s.front() < 0 || s.back() >= n) {
        throw InputError(std::string("patching_error: region ") + what + " has sites outside the chain");
    }
    for (std::size_t k = 1; k < s.size(); k++) {
        if (s[k] != s[k - 1] + 1) {
            throw InputError(std::string("patching_error: region ") + what + " is not contiguous");
        }
    }
    return {s.front(), s.back()};
}

int gap(Interval x, Interval y) {
    if (x.hi < y.lo) {
        return y.lo - x.hi;
    }
    if (y.hi < x.lo) {
        return x.lo - y.hi;
    }
    return 0;
}

// e^{iH_X t} for the terms inside [lo, hi], embedded in the full chain.
Matrix block_evolution(const HamiltonianSpec& chain, Interval x, double t) {
    HamiltonianSpec sub = restrict_to_interval(chain, x.lo, x.hi);
    Propagator p(build_hamiltonian(sub));
    Matrix u = p.unitary(-t);
    Eigen::Index left = Eigen::Index{1} << x.lo;
    Eigen::Index right = Eigen::Index{1} << (chain.n - 1 - x.hi);
    return kron(kron(Matrix::Identity(left, left), u), Matrix::Identity(right, right));
}

}  // namespace

HamiltonianSpec random_chain(int n, double h_max, std::mt19937_64& rng) {
    if (n < 2) {
        throw InputError("random_chain: need at least two sites");
    }
    if (!(h_max > 0) || !std::isfinite(h_max)) {
        throw InputError("random_chain: h_max must be positive");
    }
    std::uniform_real_distribution<double> unit(0.5, 1.0);
    HamiltonianSpec spec;
    spec.n = n;
    for (int i = 0; i + 1 < n; i++) {
        auto bond = random_bond(n, i, i + 1, h_max * unit(rng), rng);
        spec.terms.insert(spec.terms.end(), bond.begin(), bond.end());
    }
    return spec;
}

GraphModel random_graph_model(int n, double p, double h_max, std::mt19937_64& rng) {
    if (n < 2) {
        throw InputError("random_graph_model: need at least two vertices");
    }
    if (!(p >= 0 && p <= 1)) {
        throw InputError("random_graph_model: edge probability must lie in [0, 1]");
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.5, 1.0);
    std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (int v = 1; v < n; v++) {
        std::uniform_int_distribution<int> parent(0, v - 1);
        int u = parent(rng);
        adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
    }
    for (int u = 0; u < n; u++) {
        for (int v = u + 1; v < n; v++) {
            if (!adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] && coin(rng) < p) {
                adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
            }
        }
    }
    GraphModel model;
    model.spec.n = n;
    std::vector<Edge> edges;
    std::vector<Vertex> vertices;
    for (int v = 0; v < n; v++) {
        vertices.push_back(v);
    }
    for (int u = 0; u < n; u++) {
        for (int v = u + 1; v < n; v++) {
            if (!adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) {
                continue;
            }
            double target = h_max * unit(rng);
            auto bond = random_bond(n, u, v, target, rng);
            for (PauliTerm& term : bond) {
                model.spec.terms.push_back(term);
                model.spec.links.push_back({u, v});
            }
            // The exact norm, computed on the two sites only.
            HamiltonianSpec two{2, {}, {}};
            for (const PauliTerm& term : bond) {
                PauliString s(2);
                s.set(0, term.string[static_cast<std::size_t>(u)]);
                s.set(1, term.string[static_cast<std::size_t>(v)]);
                two.terms.push_back({term.coeff, s});
            }
            edges.push_back({u, v, op_norm(build_hamiltonian(two).matrix())});
        }
    }
    model.graph = InteractionGraph(std::move(vertices), std::move(edges), "random");
    model.spec.validate();
    return model;
}

namespace {

struct BondParts {
    std::vector<HamiltonianSpec> cross;  // two-site terms only
    std::vector<HamiltonianSpec> full;   // with on-site fields folded in
};

BondParts split_bonds(const HamiltonianSpec& chain) {
    chain.validate();
    if (chain.n < 2) {
        throw InputError("chain: need at least two sites");
    }
    std::size_t bonds = static_cast<std::size_t>(chain.n - 1);
    BondParts parts{std::vector<HamiltonianSpec>(bonds, HamiltonianSpec{2, {}, {}}),
                    std::vector<HamiltonianSpec>(bonds, HamiltonianSpec{2, {}, {}})};
    for (const PauliTerm& term : chain.terms) {
        auto support = term.string.support();
        if (support.empty()) {
            continue;
        }
        PauliString local(2);
        std::size_t bond;
        if (support.size() == 1) {
            std::size_t s = support[0];
            bond = s == 0 ? 0 : s - 1;
            local.set(s - bond, term.string[s]);
            parts.full[bond].terms.push_back({term.coeff, local});
            continue;
        }
        if (support.size() > 2 || support[1] != support[0] + 1) {
            throw InputError("chain: term " + term.string.str() + " is not nearest-neighbour");
        }
        bond = support[0];
        local.set(0, term.string[support[0]]);
        local.set(1, term.string[support[1]]);
        parts.full[bond].terms.push_back({term.coeff, local});
        parts.cross[bond].terms.push_back({term.coeff, local});
    }
    return parts;
}

}  // namespace

std::vector<double> bond_norms(const HamiltonianSpec& chain) {
    BondParts parts = split_bonds(chain);
    std::vector<double> out;
    for (const HamiltonianSpec& b : parts.full) {
        out.push_back(op_norm(build_hamiltonian(b).matrix()));
    }
    return out;
}

double chain_coupling(const HamiltonianSpec& chain) {
    BondParts parts = split_bonds(chain);
    double h = 0;
    for (std::size_t k = 0; k < parts.full.size(); k++) {
        h = std::max(h, op_norm(build_hamiltonian(parts.full[k]).matrix()));
        h = std::max(h, op_norm(build_hamiltonian(parts.cross[k]).matrix()));
    }
    return h;
}

HamiltonianSpec restrict_to_interval(const HamiltonianSpec& spec, int lo, int hi) {
    if (lo < 0 || hi >= spec.n || lo > hi) {
        throw InputError("restrict_to_interval: invalid interval");
    }
    HamiltonianSpec out;
    out.n = hi - lo + 1;
    for (const PauliTerm& term : spec.terms) {
        auto support = term.string.support();
        bool inside = std::all_of(support.begin(), support.end(), [&](std::size_t s) {
            return static_cast<int>(s) >= lo && static_cast<int>(s) <= hi;
        });
        if (!inside) {
            continue;
        }
        PauliString s(static_cast<std::size_t>(out.n));
        for (std::size_t k : support) {
            s.set(k - static_cast<std::size_t>(lo), term.string[k]);
        }
        out.terms.push_back({term.coeff, s});
    }
    return out;
}

TruncationError truncation_error(const HamiltonianSpec& chain, int r, double t) {
    if (r < 1) {
        throw InputError("truncation_error: r must be at least 1");
    }
    if (r >= chain.n) {
        throw InputError("truncation_error: r = " + std::to_string(r) + " needs at least r + 1 sites, chain has " +
                         std::to_string(chain.n));
    }
    if (!std::isfinite(t)) {
        throw InputError("truncation_error: t must be finite");
    }
    double h = chain_coupling(chain);
    TruncationError out;
    out.bound = chain_bound(h, r, t);
    if (t == 0) {
        return out;
    }
    Propagator full(build_hamiltonian(chain));
    Propagator part(build_hamiltonian(restrict_to_interval(chain, 0, r - 1)));
    Eigen::Index rest = Eigen::Index{1} << (chain.n - r);
    for (Pauli p : kNonIdentity) {
        Matrix a = pauli_string_matrix(PauliString::single(static_cast<std::size_t>(chain.n), 0, p));
        Matrix a_small = pauli_string_matrix(PauliString::single(static_cast<std::size_t>(r), 0, p));
        Matrix approx = kron(part.heisenberg(a_small, t), Matrix::Identity(rest, rest));
        out.measured = std::max(out.measured, op_norm(full.heisenberg(a, t) - approx));
    }
    return out;
}

double patching_error(const HamiltonianSpec& chain, std::span<const int> a, std::span<const int> b,
                      std::span<const int> c, double t) {
    split_bonds(chain);
    if (!std::isfinite(t)) {
        throw InputError("patching_error: t must be finite");
    }
    Interval ia = as_interval(a, chain.n, "A");
    Interval ib = as_interval(b, chain.n, "B");
    Interval ic = as_interval(c, chain.n, "C");
    if (gap(ia, ib) == 0 || gap(ib, ic) == 0 || gap(ia, ic) == 0) {
        throw InputError("patching_error: regions overlap");
    }
    if (gap(ia, ib) != 1 || gap(ic, ib) != 1) {
        throw InputError("patching_error: B must be adjacent to both A and C");
    }
    if (gap(ia, ic) <= 1) {
        throw InputError("patching_error: A and C must be separated");
    }
    if (t == 0) {
        return 0.0;
    }
    Interval ab{std::min(ia.lo, ib.lo), std::max(ia.hi, ib.hi)};
    Interval bc{std::min(ib.lo, ic.lo), std::max(ib.hi, ic.hi)};
    Interval abc{std::min(ab.lo, ic.lo), std::max(ab.hi, ic.hi)};
    Matrix exact = block_evolution(chain, abc, t);
    Matrix patched = block_evolution(chain, ab, t) * block_evolution(chain, ib, -t) * block_evolution(chain, bc, t);
    return op_norm(exact - patched);
}

}  // namespace lightcone
