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

#include "lightcone/protocols.hpp"

#include <cmath>

#include "lightcone/dynamics.hpp"
#include "lightcone/error.hpp"

namespace lightcone {

namespace {

void check_protocol_size(int n, int minimum, int cap, const char* what) {
    if (n < minimum) {
        throw InputError(std::string(what) + ": need at least " + std::to_string(minimum) + " qubits");
    }
    if (n > cap) {
        throw ResourceError(std::string(what) + ": " + std::to_string(n) + " qubits exceed the cap of " +
                            std::to_string(cap));
    }
}

Eigen::Index top_bit(int n) {
    return Eigen::Index{1} << (n - 1);
}

}  // namespace

StateVector ghz_state(int n) {
    if (n < 1) {
        throw InputError("ghz_state: need at least one qubit");
    }
    Eigen::Index dim = Eigen::Index{1} << n;
    Vector v = Vector::Zero(dim);
    v(0) = v(dim - 1) = 1 / std::sqrt(2.0);
    return StateVector(std::move(v));
}

StateVector w_state(int n) {
    if (n < 1) {
        throw InputError("w_state: need at least one qubit");
    }
    Eigen::Index dim = Eigen::Index{1} << n;
    Vector v = Vector::Zero(dim);
    for (int s = 0; s < n; s++) {
        v(Eigen::Index{1} << s) = 1 / std::sqrt(static_cast<double>(n));
    }
    return StateVector(std::move(v));
}

HamiltonianSpec ghz_hamiltonian(int n) {
    if (n < 2) {
        throw InputError("ghz_hamiltonian: need at least two qubits");
    }
    auto sz = static_cast<std::size_t>(n);
    HamiltonianSpec spec;
    spec.n = n;
    spec.terms.push_back({static_cast<double>(n - 1), PauliString(sz)});
    spec.terms.push_back({-static_cast<double>(n - 1), PauliString::single(sz, 0, Pauli::Z)});
    for (std::size_t j = 1; j < sz; j++) {
        spec.terms.push_back({-1.0, PauliString::single(sz, j, Pauli::X)});
        PauliString zx = PauliString::single(sz, 0, Pauli::Z);
        zx.set(j, Pauli::X);
        spec.terms.push_back({1.0, zx});
    }
    return spec;
}

HamiltonianSpec w_hamiltonian(int n) {
    if (n < 2) {
        throw InputError("w_hamiltonian: need at least two qubits");
    }
    auto sz = static_cast<std::size_t>(n);
    HamiltonianSpec spec;
    spec.n = n;
    for (std::size_t j = 1; j < sz; j++) {
        PauliString xy = PauliString::single(sz, 0, Pauli::X);
        xy.set(j, Pauli::Y);
        PauliString yx = PauliString::single(sz, 0, Pauli::Y);
        yx.set(j, Pauli::X);
        spec.terms.push_back({0.5, xy});
        spec.terms.push_back({-0.5, yx});
    }
    return spec;
}

double w_protocol_time(int n) {
    if (n < 2) {
        throw InputError("w_protocol_time: need at least two qubits");
    }
    return std::acos(1 / std::sqrt(static_cast<double>(n))) / std::sqrt(static_cast<double>(n - 1));
}

ProtocolResult run_ghz_protocol(int n, double t, int qubit_cap) {
    check_protocol_size(n, 2, qubit_cap, "run_ghz_protocol");
    Vector start = Vector::Zero(Eigen::Index{1} << n);
    start(0) = start(top_bit(n)) = 1 / std::sqrt(2.0);
    StateVector out = evolve_state(build_hamiltonian(ghz_hamiltonian(n), qubit_cap), StateVector(start), t);
    double fidelity = std::abs(ghz_state(n).amplitudes().dot(out.amplitudes()));
    return {std::move(out), fidelity, t};
}

ProtocolResult run_w_protocol(int n, double t, int qubit_cap) {
    check_protocol_size(n, 3, qubit_cap, "run_w_protocol");
    if (t < 0) {
        t = w_protocol_time(n);
    }
    StateVector start = StateVector::basis(n, top_bit(n));
    StateVector out = evolve_state(build_hamiltonian(w_hamiltonian(n), qubit_cap), start, t);
    double fidelity = std::abs(w_state(n).amplitudes().dot(out.amplitudes()));
    return {std::move(out), fidelity, t};
}

BoundCurve ghz_lower_bound_curve(int n, double a, double b, std::span<const double> ts) {
    if (n < 2) {
        throw InputError("ghz_lower_bound_curve: N must be at least 2");
    }
    if (!(a >= 0) || !(b >= 0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw InputError("ghz_lower_bound_curve: a and b must be finite and non-negative");
    }
    BoundCurve c;
    c.family = BoundFamily::MatrixExp;
    c.params = {{"N", n}, {"a", a}, {"b", b}};
    double nn = n;
    for (double t : ts) {
        if (!std::isfinite(t)) {
            throw InputError("ghz_lower_bound_curve: t must be finite");
        }
        double tt = std::abs(t);
        double v = std::exp(2 * tt * b * nn) * std::expm1(2 * tt * a * nn) / nn;
        c.grid.push_back({1, t, v});
    }
    return c;
}

Matrix swap_matrix(int n, int i, int j) {
    if (n < 1 || i < 0 || j < 0 || i >= n || j >= n) {
        throw InputError("swap_matrix: site out of range");
    }
    Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::Index bi = Eigen::Index{1} << (n - 1 - i), bj = Eigen::Index{1} << (n - 1 - j);
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; k++) {
        bool x = k & bi, y = k & bj;
        Eigen::Index out = k;
        if (x != y) {
            out ^= bi | bj;
        }
        m(out, k) = 1;
    }
    return m;
}

double state_transfer_check(const DenseOperator& u, int i, int f) {
    u.require_unitary("state_transfer_check");
    int n = u.qubits();
    if (i < 0 || f < 0 || i >= n || f >= n) {
        throw InputError("state_transfer_check: site out of range");
    }
    auto sz = static_cast<std::size_t>(n);
    Matrix xf = pauli_string_matrix(PauliString::single(sz, static_cast<std::size_t>(f), Pauli::X));
    Matrix moved = u.matrix().adjoint() * xf * u.matrix();
    return commutator_norms_with_pauli(moved, PauliString::single(sz, static_cast<std::size_t>(i), Pauli::Z)).op_norm;
}

}  // namespace lightcone
