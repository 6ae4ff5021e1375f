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

#ifndef LIGHTCONE_DENSE_HPP
#define LIGHTCONE_DENSE_HPP

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lightcone/graph.hpp"
#include "lightcone/pauli.hpp"

namespace lightcone {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Default hard cap on the qubit count of dense objects.
constexpr int kDefaultQubitCap = 12;

// Basis convention: site i of an n-qubit system is bit (n - 1 - i) of the
// computational basis index, so site 0 is the most significant bit and
// matrices are Kronecker products with site 0 on the left.

/// log2(dim); throws InputError unless dim is a positive power of two.
int qubits_for_dimension(Eigen::Index dim);

struct PauliTerm {
    double coeff = 0;
    PauliString string;
};

/// Optional association of a term with a graph edge (u, v) or vertex (u only).
struct TermLink {
    Vertex u = 0;
    std::optional<Vertex> v;
};

struct HamiltonianSpec {
    int n = 0;
    std::vector<PauliTerm> terms;
    /// Either empty or one entry per term.
    std::vector<TermLink> links;

    /// Checks string lengths, finite coefficients and, when linked, that each
    /// term acts on at most two sites lying inside its edge or vertex.
    void validate() const;
};

/// {"n":int, "terms":[{"coeff":real, "paulis":[{"site":int,"op":"X|Y|Z"}]}]}
HamiltonianSpec hamiltonian_from_json(std::string_view text);
std::string hamiltonian_to_json(const HamiltonianSpec& spec);

/// A dense 2^n x 2^n operator with finite entries.
class DenseOperator {
   public:
    DenseOperator() = default;
    explicit DenseOperator(Matrix m, std::string label = {});

    int qubits() const { return qubits_; }
    Eigen::Index dimension() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    const std::string& label() const { return label_; }

    bool is_hermitian(double tol = 1e-10) const;
    bool is_unitary(double tol = 1e-10) const;
    /// Throws InputError naming `what` when the check fails.
    void require_hermitian(std::string_view what, double tol = 1e-10) const;
    void require_unitary(std::string_view what, double tol = 1e-10) const;

    static DenseOperator identity(int n);

   private:
    Matrix m_;
    int qubits_ = 0;
    std::string label_;
};

/// A normalized state on n qubits.
class StateVector {
   public:
    StateVector() = default;
    explicit StateVector(Vector amplitudes);

    int qubits() const { return qubits_; }
    const Vector& amplitudes() const { return v_; }

    static StateVector basis(int n, Eigen::Index index);

   private:
    Vector v_;
    int qubits_ = 0;
};

Matrix kron(const Matrix& a, const Matrix& b);
Matrix pauli_string_matrix(const PauliString& p);
/// Single-site operator `op` (2x2) on `site` of an n-qubit system.
Matrix embed_site(const Matrix& op, int site, int n);

/// Sum of the terms as a dense Hermitian matrix.
DenseOperator build_hamiltonian(const HamiltonianSpec& spec, int qubit_cap = kDefaultQubitCap);

/// Largest singular value.
double op_norm(const Matrix& m);
/// sqrt(Tr(M^dag M) / Tr I)
double frob_norm(const Matrix& m);
/// Tr(A^dag B) / Tr I
Complex inner(const Matrix& a, const Matrix& b);

struct CommutatorNorms {
    double op_norm = 0;
    double frob_norm = 0;
};

CommutatorNorms commutator_norms(const Matrix& a, const Matrix& b);

/// commutator_norms(a, P) for a Pauli string P, computed from the blocks of a
/// that connect the +1 and -1 eigenspaces of P. Exact, and cheaper than the
/// generic route because only half-dimension blocks are diagonalized.
CommutatorNorms commutator_norms_with_pauli(const Matrix& a, const PauliString& p);

/// Applies the 2x2 unitary u on one site from the left and u^dag from the right.
Matrix conjugate_site(const Matrix& a, const Eigen::Matrix2cd& u, int site);

/// Keeps the part of `a` supported in `sites`: (Tr_{S^c} a / 2^{|S^c|}) (x) I.
Matrix super_project(const Matrix& a, std::span<const int> sites);

/// Keeps the part of `a` acting non-trivially somewhere in `sites`.
Matrix project_nontrivial(const Matrix& a, std::span<const int> sites);

/// Pauli coefficients c_P with a = sum_P c_P P. Index = sum_i symbol_i 4^{n-1-i}
/// with I, X, Y, Z = 0, 1, 2, 3. Limited to n <= 6.
std::vector<Complex> pauli_decompose(const Matrix& a);
Matrix pauli_recompose(const std::vector<Complex>& coeffs, int n);

enum class WeightMethod { Automatic, PauliBasis, PartialTrace };

/// (a|P_S|a) / (a|a).
double projector_weight(const Matrix& a, std::span<const int> sites, WeightMethod method = WeightMethod::Automatic);

/// Entry r is (a|Q_r|a)/(a|a), the weight of Pauli strings whose rightmost
/// non-identity site is r. The identity component is excluded, so the entries
/// sum to one minus the identity weight. The zero operator gives all zeros.
std::vector<double> rightmost_weights(const Matrix& a);

struct OperatorSize {
    double size = 0;
    /// (1/8) sum_{j,a} ([a, X_j^a] | [a, X_j^a]) / (a|a)
    double commutator_form = 0;
};

OperatorSize operator_size(const Matrix& a, WeightMethod method = WeightMethod::Automatic);

/// Max-entry norm of e^{(A+B)t} - e^{At} - int_0^t e^{(A+B)(t-s)} B e^{As} ds
/// with the integral by composite Gauss-Legendre quadrature.
double duhamel_residual(const Matrix& a, const Matrix& b, double t, int quad_points);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

}  // namespace lightcone

#endif
