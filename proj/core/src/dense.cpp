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

#include "lightcone/dense.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "lightcone/error.hpp"

namespace lightcone {

namespace {

constexpr Complex kI(0, 1);

using Index = Eigen::Index;

Index bit_of(int site, int n) {
    return Index{1} << (n - 1 - site);
}

void check_sites(std::span<const int> sites, int n, const char* what) {
    for (int s : sites) {
        if (s < 0 || s >= n) {
            throw InputError(std::string(what) + ": site " + std::to_string(s) + " out of range for " +
                             std::to_string(n) + " qubits");
        }
    }
}

int square_qubits(const Matrix& a, const char* what) {
    if (a.rows() != a.cols()) {
        throw InputError(std::string(what) + ": operator is not square");
    }
    return qubits_for_dimension(a.rows());
}

// (a + XaX + YaY + ZaZ) / 4 on one site, in place.
void twirl_site(Matrix& a, int site, int n) {
    Index bit = bit_of(site, n);
    Index dim = a.rows();
    for (Index j0 = 0; j0 < dim; j0++) {
        if (j0 & bit) {
            continue;
        }
        Index j1 = j0 | bit;
        for (Index i0 = 0; i0 < dim; i0++) {
            if (i0 & bit) {
                continue;
            }
            Index i1 = i0 | bit;
            Complex avg = (a(i0, j0) + a(i1, j1)) * 0.5;
            a(i0, j0) = avg;
            a(i1, j1) = avg;
            a(i0, j1) = 0;
            a(i1, j0) = 0;
        }
    }
}

// u acting on `site` from the left: a <- (u on site) a.
void apply_left(Matrix& a, const Eigen::Matrix2cd& u, int site, int n) {
    Index bit = bit_of(site, n);
    Eigen::RowVectorXcd x(a.cols());
    for (Index i0 = 0; i0 < a.rows(); i0++) {
        if (i0 & bit) {
            continue;
        }
        Index i1 = i0 | bit;
        x = a.row(i0);
        a.row(i0) = u(0, 0) * x + u(0, 1) * a.row(i1);
        a.row(i1) = u(1, 0) * x + u(1, 1) * a.row(i1);
    }
}

// a <- a (u on site).
void apply_right(Matrix& a, const Eigen::Matrix2cd& u, int site, int n) {
    Index bit = bit_of(site, n);
    Vector x(a.rows());
    for (Index j0 = 0; j0 < a.cols(); j0++) {
        if (j0 & bit) {
            continue;
        }
        Index j1 = j0 | bit;
        x = a.col(j0);
        a.col(j0) = u(0, 0) * x + u(1, 0) * a.col(j1);
        a.col(j1) = u(0, 1) * x + u(1, 1) * a.col(j1);
    }
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Largest singular value via the smaller Gram matrix.
double largest_singular_value(const Matrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Matrix gram = m.rows() >= m.cols() ? Matrix(m.adjoint() * m) : Matrix(m * m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericError("op_norm: eigensolver failed");
    }
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double hermitian_spectral_radius(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericError("op_norm: eigensolver failed");
    }
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

int qubits_for_dimension(Eigen::Index dim) {
    if (dim < 1 || (dim & (dim - 1)) != 0) {
        throw InputError("dimension " + std::to_string(dim) + " is not a power of two");
    }
    return std::countr_zero(static_cast<std::uint64_t>(dim));
}

// ---------------------------------------------------------------------------

void HamiltonianSpec::validate() const {
    if (n < 1) {
        throw InputError("hamiltonian: n must be at least 1");
    }
    if (!links.empty() && links.size() != terms.size()) {
        throw InputError("hamiltonian: links must be empty or match the number of terms");
    }
    for (std::size_t k = 0; k < terms.size(); k++) {
        const PauliTerm& term = terms[k];
        if (term.string.size() != static_cast<std::size_t>(n)) {
            throw InputError("hamiltonian: term " + std::to_string(k) + " has length " +
                             std::to_string(term.string.size()) + ", expected " + std::to_string(n));
        }
        if (!std::isfinite(term.coeff)) {
            throw InputError("hamiltonian: term " + std::to_string(k) + " has a non-finite coefficient");
        }
        if (links.empty()) {
            continue;
        }
        auto support = term.string.support();
        if (support.size() > 2) {
            throw InputError("hamiltonian: graph-linked term " + std::to_string(k) + " acts on more than two sites");
        }
        const TermLink& link = links[k];
        for (std::size_t s : support) {
            int site = static_cast<int>(s);
            if (site != link.u && (!link.v || site != *link.v)) {
                throw InputError("hamiltonian: term " + std::to_string(k) + " acts outside its linked edge");
            }
        }
    }
}

HamiltonianSpec hamiltonian_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("hamiltonian json: ") + e.what());
    }
    HamiltonianSpec spec;
    try {
        spec.n = j.at("n").get<int>();
        if (spec.n < 1) {
            throw InputError("hamiltonian json: n must be at least 1");
        }
        for (const auto& t : j.at("terms")) {
            const auto& c = t.at("coeff");
            if (!c.is_number()) {
                throw InputError("hamiltonian json: coefficients must be real numbers");
            }
            PauliTerm term{c.get<double>(), PauliString(static_cast<std::size_t>(spec.n))};
            for (const auto& p : t.at("paulis")) {
                int site = p.at("site").get<int>();
                std::string op = p.at("op").get<std::string>();
                if (site < 0 || site >= spec.n) {
                    throw InputError("hamiltonian json: site " + std::to_string(site) + " out of range");
                }
                if (op.size() != 1 || op[0] == 'I' || op[0] == '_') {
                    throw InputError("hamiltonian json: op must be one of X, Y, Z");
                }
                if (term.string[static_cast<std::size_t>(site)] != Pauli::I) {
                    throw InputError("hamiltonian json: site " + std::to_string(site) + " repeated in a term");
                }
                term.string.set(static_cast<std::size_t>(site), pauli_from_char(op[0]));
            }
            spec.terms.push_back(std::move(term));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("hamiltonian json: ") + e.what());
    }
    spec.validate();
    return spec;
}

std::string hamiltonian_to_json(const HamiltonianSpec& spec) {
    nlohmann::json j;
    j["n"] = spec.n;
    j["terms"] = nlohmann::json::array();
    for (const PauliTerm& t : spec.terms) {
        nlohmann::json paulis = nlohmann::json::array();
        for (std::size_t s : t.string.support()) {
            paulis.push_back({{"site", s}, {"op", std::string(1, pauli_char(t.string[s]))}});
        }
        j["terms"].push_back({{"coeff", t.coeff}, {"paulis", paulis}});
    }
    return j.dump();
}

// ---------------------------------------------------------------------------

DenseOperator::DenseOperator(Matrix m, std::string label) : m_(std::move(m)), label_(std::move(label)) {
    qubits_ = square_qubits(m_, "DenseOperator");
    if (!m_.allFinite()) {
        throw InputError("DenseOperator: entries must be finite");
    }
}

bool DenseOperator::is_hermitian(double tol) const {
    return max_abs(m_ - m_.adjoint()) <= tol;
}

bool DenseOperator::is_unitary(double tol) const {
    return max_abs(m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols())) <= tol;
}

void DenseOperator::require_hermitian(std::string_view what, double tol) const {
    if (!is_hermitian(tol)) {
        throw InputError(std::string(what) + ": operator is not Hermitian");
    }
}

void DenseOperator::require_unitary(std::string_view what, double tol) const {
    if (!is_unitary(tol)) {
        throw InputError(std::string(what) + ": operator is not unitary");
    }
}

DenseOperator DenseOperator::identity(int n) {
    Index dim = Index{1} << n;
    return DenseOperator(Matrix::Identity(dim, dim), "I");
}

StateVector::StateVector(Vector amplitudes) : v_(std::move(amplitudes)) {
    qubits_ = qubits_for_dimension(v_.size());
    if (!v_.allFinite()) {
        throw InputError("StateVector: amplitudes must be finite");
    }
    if (std::abs(v_.norm() - 1.0) > 1e-10) {
        throw InputError("StateVector: amplitudes are not normalized");
    }
}

StateVector StateVector::basis(int n, Eigen::Index index) {
    Index dim = Index{1} << n;
    if (index < 0 || index >= dim) {
        throw InputError("StateVector::basis: index out of range");
    }
    Vector v = Vector::Zero(dim);
    v(index) = 1;
    return StateVector(std::move(v));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); i++) {
        for (Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace {

// P|j> = phase(j) |j xor flip>.
struct PauliAction {
    Index flip = 0;
    Index sign_mask = 0;
    Complex base{1, 0};

    explicit PauliAction(const PauliString& p) {
        int n = static_cast<int>(p.size());
        for (int s = 0; s < n; s++) {
            Index bit = bit_of(s, n);
            switch (p[static_cast<std::size_t>(s)]) {
                case Pauli::I:
                    break;
                case Pauli::X:
                    flip |= bit;
                    break;
                case Pauli::Y:
                    flip |= bit;
                    sign_mask |= bit;
                    base *= kI;
                    break;
                case Pauli::Z:
                    sign_mask |= bit;
                    break;
            }
        }
    }

    Complex phase(Index j) const {
        return (std::popcount(static_cast<std::uint64_t>(j & sign_mask)) & 1) ? -base : base;
    }
};

}  // namespace

Matrix pauli_string_matrix(const PauliString& p) {
    Index dim = Index{1} << p.size();
    Matrix m = Matrix::Zero(dim, dim);
    PauliAction act(p);
    for (Index j = 0; j < dim; j++) {
        m(j ^ act.flip, j) = act.phase(j);
    }
    return m;
}

Matrix embed_site(const Matrix& op, int site, int n) {
    if (op.rows() != 2 || op.cols() != 2) {
        throw InputError("embed_site: operator must be 2x2");
    }
    int sites[1] = {site};
    check_sites(sites, n, "embed_site");
    Index dim = Index{1} << n;
    Matrix m = Matrix::Identity(dim, dim);
    apply_left(m, op, site, n);
    return m;
}

DenseOperator build_hamiltonian(const HamiltonianSpec& spec, int qubit_cap) {
    if (spec.n > qubit_cap) {
        throw ResourceError("build_hamiltonian: " + std::to_string(spec.n) + " qubits exceed the cap of " +
                            std::to_string(qubit_cap));
    }
    spec.validate();
    Index dim = Index{1} << spec.n;
    Matrix h = Matrix::Zero(dim, dim);
    for (const PauliTerm& term : spec.terms) {
        PauliAction act(term.string);
        for (Index j = 0; j < dim; j++) {
            h(j ^ act.flip, j) += term.coeff * act.phase(j);
        }
    }
    return DenseOperator(std::move(h), "H");
}

// ---------------------------------------------------------------------------

double op_norm(const Matrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    if (m.rows() == m.cols()) {
        double scale = max_abs(m);
        if (scale == 0) {
            return 0.0;
        }
        if (max_abs(m - m.adjoint()) <= 1e-14 * scale) {
            return hermitian_spectral_radius(m);
        }
        if (max_abs(m + m.adjoint()) <= 1e-14 * scale) {
            return hermitian_spectral_radius(Matrix(kI * m));
        }
    }
    return largest_singular_value(m);
}

double frob_norm(const Matrix& m) {
    if (m.rows() == 0) {
        return 0.0;
    }
    return m.norm() / std::sqrt(static_cast<double>(m.rows()));
}

Complex inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InputError("inner: dimension mismatch");
    }
    return a.conjugate().cwiseProduct(b).sum() / static_cast<double>(a.rows());
}

CommutatorNorms commutator_norms(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw InputError("commutator_norms: dimension mismatch");
    }
    Matrix c = a * b - b * a;
    return {op_norm(c), frob_norm(c)};
}

Matrix conjugate_site(const Matrix& a, const Eigen::Matrix2cd& u, int site) {
    int n = square_qubits(a, "conjugate_site");
    int sites[1] = {site};
    check_sites(sites, n, "conjugate_site");
    Matrix out = a;
    apply_left(out, u, site, n);
    apply_right(out, u.adjoint(), site, n);
    return out;
}

CommutatorNorms commutator_norms_with_pauli(const Matrix& a, const PauliString& p) {
    int n = square_qubits(a, "commutator_norms_with_pauli");
    if (p.size() != static_cast<std::size_t>(n)) {
        throw InputError("commutator_norms_with_pauli: Pauli string length does not match the operator");
    }
    const double r = 1 / std::numbers::sqrt2;
    Eigen::Matrix2cd had;
    had << r, r, r, -r;
    Eigen::Matrix2cd sdg;
    sdg << 1, 0, 0, -kI;

    Eigen::Matrix2cd v = had * sdg;
    auto rotation = [&](Pauli q) -> Eigen::Matrix2cd {
        if (q == Pauli::X) {
            return had;
        }
        if (q == Pauli::Y) {
            return v;
        }
        return Eigen::Matrix2cd::Identity();
    };
    Index dim = a.rows();
    Index half = dim / 2;
    Matrix x, y;
    std::vector<std::size_t> support = p.support();
    if (support.empty()) {
        return {0, 0};
    }
    if (support.size() == 1) {
        // One site: read the four blocks straight from `a` and rotate them.
        int site = static_cast<int>(support[0]);
        Index bit = bit_of(site, n);
        std::vector<Index> lo, hi;
        for (Index i = 0; i < dim; i++) {
            if (!(i & bit)) {
                lo.push_back(i);
                hi.push_back(i | bit);
            }
        }
        const std::vector<Index>* idx[2] = {&lo, &hi};
        Eigen::Matrix2cd u = rotation(p[support[0]]);
        x = Matrix::Zero(half, half);
        y = Matrix::Zero(half, half);
        for (int c = 0; c < 2; c++) {
            for (int d = 0; d < 2; d++) {
                Matrix block = a(*idx[c], *idx[d]);
                x += (u(0, c) * std::conj(u(1, d))) * block;
                y += (u(1, c) * std::conj(u(0, d))) * block;
            }
        }
    } else {
        // Rotate every non-identity factor to Z; the string becomes diagonal
        // with eigenvalue given by the parity of the masked bits.
        Matrix rot = a;
        Index mask = 0;
        for (int s = 0; s < n; s++) {
            Pauli q = p[static_cast<std::size_t>(s)];
            if (q == Pauli::I) {
                continue;
            }
            mask |= bit_of(s, n);
            Eigen::Matrix2cd u = rotation(q);
            apply_left(rot, u, s, n);
            apply_right(rot, u.adjoint(), s, n);
        }
        std::vector<Index> even, odd;
        for (Index i = 0; i < dim; i++) {
            (std::popcount(static_cast<std::uint64_t>(i & mask)) & 1 ? odd : even).push_back(i);
        }
        x = rot(even, odd);
        y = rot(odd, even);
    }
    // The commutator is 2 * [[0, -x], [y, 0]] in the rotated basis.
    double sx = largest_singular_value(x);
    double scale2 = x.cwiseAbs2().maxCoeff();
    bool hermitian = (y - x.adjoint()).cwiseAbs2().maxCoeff() <= 1e-28 * std::max(scale2, 1e-300);
    double sy = hermitian ? sx : largest_singular_value(y);
    double frob = std::sqrt(4 * (x.squaredNorm() + y.squaredNorm()) / static_cast<double>(dim));
    return {2 * std::max(sx, sy), frob};
}

Matrix super_project(const Matrix& a, std::span<const int> sites) {
    int n = square_qubits(a, "super_project");
    check_sites(sites, n, "super_project");
    std::vector<char> keep(static_cast<std::size_t>(n), 0);
    for (int s : sites) {
        keep[static_cast<std::size_t>(s)] = 1;
    }
    Matrix out = a;
    for (int s = 0; s < n; s++) {
        if (!keep[static_cast<std::size_t>(s)]) {
            twirl_site(out, s, n);
        }
    }
    return out;
}

Matrix project_nontrivial(const Matrix& a, std::span<const int> sites) {
    int n = square_qubits(a, "project_nontrivial");
    check_sites(sites, n, "project_nontrivial");
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (int s : sites) {
        in[static_cast<std::size_t>(s)] = 1;
    }
    std::vector<int> complement;
    for (int s = 0; s < n; s++) {
        if (!in[static_cast<std::size_t>(s)]) {
            complement.push_back(s);
        }
    }
    return a - super_project(a, complement);
}

std::vector<Complex> pauli_decompose(const Matrix& a) {
    int n = square_qubits(a, "pauli_decompose");
    if (n > 6) {
        throw ResourceError("pauli_decompose: limited to 6 qubits, got " + std::to_string(n));
    }
    Matrix m = a;
    Index dim = a.rows();
    for (int s = 0; s < n; s++) {
        Index bit = bit_of(s, n);
        for (Index i0 = 0; i0 < dim; i0++) {
            if (i0 & bit) {
                continue;
            }
            for (Index j0 = 0; j0 < dim; j0++) {
                if (j0 & bit) {
                    continue;
                }
                Index i1 = i0 | bit, j1 = j0 | bit;
                Complex a00 = m(i0, j0), a01 = m(i0, j1), a10 = m(i1, j0), a11 = m(i1, j1);
                m(i0, j0) = (a00 + a11) * 0.5;         // I
                m(i0, j1) = (a01 + a10) * 0.5;         // X
                m(i1, j0) = kI * (a01 - a10) * 0.5;    // Y
                m(i1, j1) = (a00 - a11) * 0.5;         // Z
            }
        }
    }
    std::vector<Complex> out(static_cast<std::size_t>(dim * dim));
    for (Index i = 0; i < dim; i++) {
        for (Index j = 0; j < dim; j++) {
            std::size_t idx = 0;
            for (int b = 0; b < n; b++) {
                std::size_t sym = 2 * static_cast<std::size_t>((i >> b) & 1) + static_cast<std::size_t>((j >> b) & 1);
                idx += sym << (2 * b);
            }
            out[idx] = m(i, j);
        }
    }
    return out;
}

Matrix pauli_recompose(const std::vector<Complex>& coeffs, int n) {
    if (n < 0 || n > 6) {
        throw ResourceError("pauli_recompose: limited to 6 qubits");
    }
    Index dim = Index{1} << n;
    if (coeffs.size() != static_cast<std::size_t>(dim * dim)) {
        throw InputError("pauli_recompose: expected 4^n coefficients");
    }
    Matrix m(dim, dim);
    for (Index i = 0; i < dim; i++) {
        for (Index j = 0; j < dim; j++) {
            std::size_t idx = 0;
            for (int b = 0; b < n; b++) {
                std::size_t sym = 2 * static_cast<std::size_t>((i >> b) & 1) + static_cast<std::size_t>((j >> b) & 1);
                idx += sym << (2 * b);
            }
            m(i, j) = coeffs[idx];
        }
    }
    for (int s = 0; s < n; s++) {
        Index bit = bit_of(s, n);
        for (Index i0 = 0; i0 < dim; i0++) {
            if (i0 & bit) {
                continue;
            }
            for (Index j0 = 0; j0 < dim; j0++) {
                if (j0 & bit) {
                    continue;
                }
                Index i1 = i0 | bit, j1 = j0 | bit;
                Complex ci = m(i0, j0), cx = m(i0, j1), cy = m(i1, j0), cz = m(i1, j1);
                m(i0, j0) = ci + cz;
                m(i1, j1) = ci - cz;
                m(i0, j1) = cx - kI * cy;
                m(i1, j0) = cx + kI * cy;
            }
        }
    }
    return m;
}

namespace {

double total_weight(const Matrix& a, const char* what) {
    double w = a.squaredNorm();
    if (w == 0) {
        throw InputError(std::string(what) + ": zero operator");
    }
    return w;
}

bool use_pauli_basis(WeightMethod method, int n) {
    if (method == WeightMethod::PauliBasis) {
        return true;
    }
    return method == WeightMethod::Automatic && n <= 6;
}

}  // namespace

double projector_weight(const Matrix& a, std::span<const int> sites, WeightMethod method) {
    int n = square_qubits(a, "projector_weight");
    check_sites(sites, n, "projector_weight");
    double total = total_weight(a, "projector_weight");
    if (use_pauli_basis(method, n)) {
        auto coeffs = pauli_decompose(a);
        std::size_t mask = 0;
        for (int s : sites) {
            mask |= std::size_t{3} << (2 * (n - 1 - s));
        }
        double in = 0, all = 0;
        for (std::size_t k = 0; k < coeffs.size(); k++) {
            double w = std::norm(coeffs[k]);
            all += w;
            if (k & mask) {
                in += w;
            }
        }
        return in / all;
    }
    // P_S = 1 - Pbar_{S^c}, and Pbar_{S^c} twirls exactly the sites in S.
    Matrix rest = a;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int s : sites) {
        if (!seen[static_cast<std::size_t>(s)]) {
            seen[static_cast<std::size_t>(s)] = 1;
            twirl_site(rest, s, n);
        }
    }
    return std::clamp(1.0 - rest.squaredNorm() / total, 0.0, 1.0);
}

std::vector<double> rightmost_weights(const Matrix& a) {
    int n = square_qubits(a, "rightmost_weights");
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    double total = a.squaredNorm();
    if (total == 0) {
        return out;
    }
    // below[r + 1] = |Pbar_{<= r} a|^2 for r = -1 .. n-1.
    std::vector<double> below(static_cast<std::size_t>(n) + 1);
    Matrix cur = a;
    below[static_cast<std::size_t>(n)] = total;
    for (int s = n - 1; s >= 0; s--) {
        twirl_site(cur, s, n);
        below[static_cast<std::size_t>(s)] = cur.squaredNorm();
    }
    for (int r = 0; r < n; r++) {
        double w = (below[static_cast<std::size_t>(r) + 1] - below[static_cast<std::size_t>(r)]) / total;
        out[static_cast<std::size_t>(r)] = std::max(0.0, w);
    }
    return out;
}

OperatorSize operator_size(const Matrix& a, WeightMethod method) {
    int n = square_qubits(a, "operator_size");
    double total = total_weight(a, "operator_size");
    OperatorSize out;
    if (use_pauli_basis(method, n)) {
        auto coeffs = pauli_decompose(a);
        double s = 0, all = 0;
        for (std::size_t k = 0; k < coeffs.size(); k++) {
            double w = std::norm(coeffs[k]);
            int weight = 0;
            for (int b = 0; b < n; b++) {
                weight += ((k >> (2 * b)) & 3) != 0;
            }
            s += weight * w;
            all += w;
        }
        out.size = s / all;
    } else {
        for (int j = 0; j < n; j++) {
            int site[1] = {j};
            out.size += projector_weight(a, site, WeightMethod::PartialTrace);
        }
    }
    double acc = 0;
    for (int j = 0; j < n; j++) {
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
            Eigen::Matrix2cd sigma = pauli_matrix(p);
            Matrix left = a, right = a;
            apply_left(left, sigma, j, n);
            apply_right(right, sigma, j, n);
            acc += (right - left).squaredNorm();
        }
    }
    out.commutator_form = acc / 8.0 / total;
    return out;
}

// ---------------------------------------------------------------------------

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) {
        throw InputError("gauss_legendre: need at least one node");
    }
    std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; i++) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; iter++) {
            double p0 = 1, p1 = 0;
            for (int k = 1; k <= n; k++) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        // Re-evaluate the derivative at the converged node.
        double p0 = 1, p1 = 0;
        for (int k = 1; k <= n; k++) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1);
        std::size_t lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
        x[lo] = -z;
        x[hi] = z;
        w[lo] = w[hi] = 2 / ((1 - z * z) * dp * dp);
    }
    return {x, w};
}

double duhamel_residual(const Matrix& a, const Matrix& b, double t, int quad_points) {
    if (quad_points < 2) {
        throw InputError("duhamel_residual: quad_points must be at least 2");
    }
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw InputError("duhamel_residual: A and B must be square with equal dimensions");
    }
    if (!std::isfinite(t)) {
        throw InputError("duhamel_residual: t must be finite");
    }
    int per_panel = quad_points < 4 ? quad_points : 4;
    int panels = quad_points < 4 ? 1 : (quad_points + 3) / 4;
    auto [nodes, weights] = gauss_legendre(per_panel);

    Matrix sum = a + b;
    Matrix integral = Matrix::Zero(a.rows(), a.cols());
    double width = t / panels;
    for (int p = 0; p < panels; p++) {
        double mid = (p + 0.5) * width;
        for (int k = 0; k < per_panel; k++) {
            double s = mid + 0.5 * width * nodes[static_cast<std::size_t>(k)];
            Matrix left = (sum * (t - s)).exp();
            Matrix right = (a * s).exp();
            integral += (0.5 * width * weights[static_cast<std::size_t>(k)]) * (left * b * right);
        }
    }
    Matrix residual = Matrix((sum * t).exp()) - Matrix((a * t).exp()) - integral;
    return max_abs(residual);
}

}  // namespace lightcone
