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

#ifndef LIGHTCONE_PROTOCOLS_HPP
#define LIGHTCONE_PROTOCOLS_HPP

#include <span>
#include <vector>

#include "lightcone/bounds.hpp"
#include "lightcone/dense.hpp"

namespace lightcone {

// ---------------------------------------------------------------------------
// State preparation.

struct ProtocolResult {
    StateVector final_state;
    double fidelity = 0;
    double time = 0;
};

/// (|0...0> + |1...1>) / sqrt(2)
StateVector ghz_state(int n);
/// Equal superposition of the n single-excitation basis states.
StateVector w_state(int n);

/// (I - Z_0) sum_{j >= 1} (I - X_j) as Pauli terms.
HamiltonianSpec ghz_hamiltonian(int n);
/// i X-_0 sum_{j >= 1} X+_j + h.c. with X+ |0> = |1>, X- |1> = |0>, which
/// expands to (1/2) sum_j (X_0 Y_j - Y_0 X_j).
HamiltonianSpec w_hamiltonian(int n);

double w_protocol_time(int n);

/// Evolves |+>|0...0> under ghz_hamiltonian for time t (default pi/4).
ProtocolResult run_ghz_protocol(int n, double t = 0.78539816339744830962, int qubit_cap = kDefaultQubitCap);
/// Evolves |1>|0...0> under w_hamiltonian for w_protocol_time(n) unless t is given.
ProtocolResult run_w_protocol(int n, double t = -1, int qubit_cap = kDefaultQubitCap);

/// |C(t)| <= (1/N)(e^{2t(a+b)N} - e^{2tbN}) on a t grid, as a curve at r = 1.
BoundCurve ghz_lower_bound_curve(int n, double a, double b, std::span<const double> ts);

// ---------------------------------------------------------------------------
// Transfer, entanglement and correlations.

/// Dense SWAP of sites i and j on n qubits.
Matrix swap_matrix(int n, int i, int j);

/// |[U^dag X_f U, Z_i]|. Throws InputError for non-unitary U.
double state_transfer_check(const DenseOperator& u, int i, int f);

/// Renyi entropy of the reduced state on `region`; alpha must be 1 or 2. An
/// empty region (or the full system) gives 0.
double renyi_entropy(const StateVector& psi, std::span<const int> region, int alpha);

/// Sites on which the operator acts non-trivially.
std::vector<int> operator_support(const Matrix& a, double tol = 1e-12);

/// <AB> - <A><B> for Hermitian A, B of norm at most one with disjoint supports.
double connected_correlation(const StateVector& psi, const DenseOperator& a, const DenseOperator& b);

struct GrowthCheck {
    double lhs = 0;
    double rhs = 0;
};

/// lhs = |P_B(U A U^dag)| with A = |psi_a><psi_a| (x) I_B and P_B keeping the
/// part acting non-trivially on B; rhs = 1 - exp(-S_2/2) of U (psi_a (x) psi_b)
/// across the split. a_sites and b_sites must partition the system, and the
/// amplitudes of psi_a, psi_b follow the order in which the sites are listed.
GrowthCheck entanglement_growth_check(const DenseOperator& u, std::span<const int> a_sites,
                                      std::span<const int> b_sites, const StateVector& psi_a,
                                      const StateVector& psi_b);

struct LowGrowthEntangler {
    /// von Neumann entropy of U|00>.
    double s1 = 0;
    /// Largest |P_B(U A U^dag)| over the probe set.
    double max_growth = 0;
    /// |U - I|
    double unitary_distance = 0;
    int probes = 0;
};

/// Two D-level parties (D a power of two, 2 <= D <= 64) and
/// U = U_2 (+) I with U_2 = [[sqrt(1-e), -sqrt(e)], [sqrt(e), sqrt(1-e)]] on
/// span{|00>, |diag>}, |diag> = sum_{j>=1} |jj> / sqrt(D-1). The probe set is
/// every Pauli string of weight one or two on the qubits encoding party A.
LowGrowthEntangler low_growth_entangler(int d, double epsilon);

/// The dense matrix of that unitary, for cross-checks at small D.
Matrix low_growth_unitary(int d, double epsilon);

}  // namespace lightcone

#endif
