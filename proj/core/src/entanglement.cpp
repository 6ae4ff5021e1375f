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
#include <random>

#include "lightcone/error.hpp"
#include "lightcone/protocols.hpp"

namespace lightcone {

namespace {

Eigen::Index bit_of(Eigen::Index index, int n, int site) {
    return (index >> (n - 1 - site)) & 1;
}

// Checks that `sites` are distinct and inside [0, n).
void check_sites(std::span<const int> sites, int n, const char* what) {
    std::vector<int> s(sites.begin(), sites.end());
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
        throw InputError(std::string(what) + ": repeated site");
    }
    if (!s.empty() && (s.front() < 0 || s.back() >= n)) {
        throw InputError(std::string(what) + ": site out of range");
    }
}

// Index of the basis state restricted to `sites`, in listed order.
Eigen::Index sub_index(Eigen::Index index, int n, std::span<const int> sites) {
    Eigen::Index out = 0;
    for (int s : sites) {
        out = (out << 1) | bit_of(index, n, s);
    }
    return out;
}

std::vector<int> complement(std::span<const int> sites, int n) {
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (int s : sites) {
        in[static_cast<std::size_t>(s)] = 1;
    }
    std::vector<int> out;
    for (int s = 0; s < n; s++) {
        if (!in[static_cast<std::size_t>(s)]) {
            out.push_back(s);
        }
    }
    return out;
}

// Eigenvalues of the reduced density matrix on `region`.
Eigen::VectorXd reduced_spectrum(const Vector& psi, int n, std::span<const int> region) {
    std::vector<int> rest = complement(region, n);
    Eigen::Index rows = Eigen::Index{1} << region.size();
    Eigen::Index cols = Eigen::Index{1} << rest.size();
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < psi.size(); i++) {
        m(sub_index(i, n, region), sub_index(i, n, rest)) = psi(i);
    }
    Matrix rho = rows <= cols ? Matrix(m * m.adjoint()) : Matrix(m.adjoint() * m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericError("renyi_entropy: eigenvalue solve failed");
    }
    return es.eigenvalues();
}

// Pauli string applied to a vector by bit manipulation.
Vector apply_pauli(const PauliString& p, const Vector& v) {
    int n = static_cast<int>(p.size());
    Vector out = Vector::Zero(v.size());
    Eigen::Index flip = 0;
    for (int s = 0; s < n; s++) {
        Pauli q = p[static_cast<std::size_t>(s)];
        if (q == Pauli::X || q == Pauli::Y) {
            flip |= Eigen::Index{1} << (n - 1 - s);
        }
    }
    for (Eigen::Index i = 0; i < v.size(); i++) {
        Complex phase = 1;
        for (int s = 0; s < n; s++) {
            Pauli q = p[static_cast<std::size_t>(s)];
            bool b = bit_of(i, n, s);
            if (q == Pauli::Z && b) {
                phase = -phase;
            } else if (q == Pauli::Y) {
                phase *= b ? Complex(0, -1) : Complex(0, 1);
            }
        }
        out(i ^ flip) = phase * v(i);
    }
    return out;
}

// Largest |eigenvalue| of a Hermitian operator given by its action, by Lanczos
// with full reorthogonalization.
template <class Apply>
double hermitian_norm(Apply apply, Eigen::Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector q(dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        q(i) = Complex(normal(rng), normal(rng));
    }
    q /= q.norm();
    Eigen::Index cap = std::min<Eigen::Index>(dim, 600);
    Matrix basis(dim, cap);
    std::vector<double> alpha, beta;
    double scale = 0;
    double best = 0;
    for (Eigen::Index m = 0; m < cap; m++) {
        basis.col(m) = q;
        Vector w = apply(q);
        double a = std::real(q.dot(w));
        alpha.push_back(a);
        // Two passes of classical Gram-Schmidt against the whole basis.
        for (int pass = 0; pass < 2; pass++) {
            Vector c = basis.leftCols(m + 1).adjoint() * w;
            w -= basis.leftCols(m + 1) * c;
        }
        double b = w.norm();
        scale = std::max(scale, std::abs(a) + b);
        Eigen::Index k = m + 1;
        bool exhausted = b <= 1e-13 * std::max(scale, 1e-300) || k == cap;
        if (k % 8 == 0 || exhausted) {
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
            for (Eigen::Index j = 0; j < k; j++) {
                t(j, j) = alpha[static_cast<std::size_t>(j)];
                if (j + 1 < k) {
                    t(j, j + 1) = t(j + 1, j) = beta[static_cast<std::size_t>(j)];
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            Eigen::Index idx = std::abs(es.eigenvalues()(0)) >= std::abs(es.eigenvalues()(k - 1)) ? 0 : k - 1;
            best = std::abs(es.eigenvalues()(idx));
            double residual = b * std::abs(es.eigenvectors()(k - 1, idx));
            if (exhausted) {
                if (b > 1e-13 * std::max(scale, 1e-300) && residual > 1e-9 * std::max(best, 1e-300)) {
                    throw NumericError("low_growth_entangler: Lanczos did not converge");
                }
                return best;
            }
            if (residual <= 1e-12 * std::max(best, 1e-300)) {
                return best;
            }
        }
        beta.push_back(b);
        q = w / b;
    }
    return best;
}

void check_entangler(int d, double epsilon) {
    if (d < 2 || (d & (d - 1)) != 0) {
        throw InputError("low_growth_entangler: D must be a power of two, at least 2");
    }
    if (d > 64) {
        throw ResourceError("low_growth_entangler: D = " + std::to_string(d) + " exceeds the limit of 64");
    }
    if (!(epsilon >= 0 && epsilon <= 1)) {
        throw InputError("low_growth_entangler: epsilon must lie in [0, 1]");
    }
}

struct EntanglerParts {
    Matrix v;             // d^2 x 2, columns |00> and |diag>
    Eigen::Matrix2cd k;   // U_2 - I
};

EntanglerParts entangler_parts(int d, double epsilon) {
    Eigen::Index dim = Eigen::Index{d} * d;
    EntanglerParts p;
    p.v = Matrix::Zero(dim, 2);
    p.v(0, 0) = 1;
    for (Eigen::Index j = 1; j < d; j++) {
        p.v(j * d + j, 1) = 1 / std::sqrt(static_cast<double>(d - 1));
    }
    double c = std::sqrt(1 - epsilon), s = std::sqrt(epsilon);
    p.k << c - 1, -s, s, c - 1;
    return p;
}

}  // namespace

double renyi_entropy(const StateVector& psi, std::span<const int> region, int alpha) {
    if (alpha != 1 && alpha != 2) {
        throw InputError("renyi_entropy: alpha must be 1 or 2");
    }
    int n = psi.qubits();
    check_sites(region, n, "renyi_entropy");
    if (region.empty() || static_cast<int>(region.size()) == n) {
        return 0.0;
    }
    Eigen::VectorXd p = reduced_spectrum(psi.amplitudes(), n, region);
    if (alpha == 2) {
        double purity = p.squaredNorm();
        return -std::log(purity);
    }
    double s = 0;
    for (double x : p) {
        if (x > 1e-300) {
            s -= x * std::log(x);
        }
    }
    return std::max(s, 0.0);
}

std::vector<int> operator_support(const Matrix& a, double tol) {
    int n = qubits_for_dimension(a.rows());
    if (a.cols() != a.rows()) {
        throw InputError("operator_support: matrix is not square");
    }
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    std::vector<int> out;
    for (int s = 0; s < n; s++) {
        std::vector<int> others = complement(std::span<const int>(&s, 1), n);
        Matrix twirled = super_project(a, others);
        if ((a - twirled).cwiseAbs().maxCoeff() > tol * scale) {
            out.push_back(s);
        }
    }
    return out;
}

double connected_correlation(const StateVector& psi, const DenseOperator& a, const DenseOperator& b) {
    if (a.dimension() != psi.amplitudes().size() || b.dimension() != psi.amplitudes().size()) {
        throw InputError("connected_correlation: dimension mismatch");
    }
    a.require_hermitian("connected_correlation: A");
    b.require_hermitian("connected_correlation: B");
    if (op_norm(a.matrix()) > 1 + 1e-10 || op_norm(b.matrix()) > 1 + 1e-10) {
        throw InputError("connected_correlation: operators must have norm at most one");
    }
    std::vector<int> sa = operator_support(a.matrix()), sb = operator_support(b.matrix());
    for (int s : sa) {
        if (std::find(sb.begin(), sb.end(), s) != sb.end()) {
            throw InputError("connected_correlation: supports of A and B overlap at site " + std::to_string(s));
        }
    }
    const Vector& v = psi.amplitudes();
    Vector av = a.matrix() * v, bv = b.matrix() * v;
    double ab = std::real(av.dot(bv));
    double ea = std::real(v.dot(av)), eb = std::real(v.dot(bv));
    return ab - ea * eb;
}

GrowthCheck entanglement_growth_check(const DenseOperator& u, std::span<const int> a_sites,
                                      std::span<const int> b_sites, const StateVector& psi_a,
                                      const StateVector& psi_b) {
    u.require_unitary("entanglement_growth_check");
    int n = u.qubits();
    if (a_sites.empty() || b_sites.empty()) {
        throw InputError("entanglement_growth_check: both regions must be non-empty");
    }
    std::vector<int> all(a_sites.begin(), a_sites.end());
    all.insert(all.end(), b_sites.begin(), b_sites.end());
    check_sites(all, n, "entanglement_growth_check");
    if (static_cast<int>(all.size()) != n) {
        throw InputError("entanglement_growth_check: regions must cover every site");
    }
    if (psi_a.qubits() != static_cast<int>(a_sites.size()) || psi_b.qubits() != static_cast<int>(b_sites.size())) {
        throw InputError("entanglement_growth_check: state sizes do not match the regions");
    }
    Eigen::Index dim = u.dimension();
    std::vector<Eigen::Index> ia(static_cast<std::size_t>(dim)), ib(static_cast<std::size_t>(dim));
    Vector product(dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        ia[static_cast<std::size_t>(i)] = sub_index(i, n, a_sites);
        ib[static_cast<std::size_t>(i)] = sub_index(i, n, b_sites);
        product(i) = psi_a.amplitudes()(ia[static_cast<std::size_t>(i)]) *
                     psi_b.amplitudes()(ib[static_cast<std::size_t>(i)]);
    }
    Matrix a = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        for (Eigen::Index j = 0; j < dim; j++) {
            if (ib[static_cast<std::size_t>(i)] == ib[static_cast<std::size_t>(j)]) {
                a(i, j) = psi_a.amplitudes()(ia[static_cast<std::size_t>(i)]) *
                          std::conj(psi_a.amplitudes()(ia[static_cast<std::size_t>(j)]));
            }
        }
    }
    Matrix moved = u.matrix() * a * u.matrix().adjoint();
    GrowthCheck out;
    out.lhs = op_norm(project_nontrivial(moved, b_sites));
    Vector evolved = u.matrix() * product;
    double s2 = renyi_entropy(StateVector(evolved / evolved.norm()), a_sites, 2);
    out.rhs = 1 - std::exp(-s2 / 2);
    return out;
}

Matrix low_growth_unitary(int d, double epsilon) {
    check_entangler(d, epsilon);
    EntanglerParts p = entangler_parts(d, epsilon);
    Eigen::Index dim = p.v.rows();
    return Matrix::Identity(dim, dim) + p.v * p.k * p.v.adjoint();
}

LowGrowthEntangler low_growth_entangler(int d, double epsilon) {
    check_entangler(d, epsilon);
    EntanglerParts p = entangler_parts(d, epsilon);
    int k = qubits_for_dimension(d);
    int n = 2 * k;
    Eigen::Index dd = d;
    Eigen::Index dim = dd * dd;

    LowGrowthEntangler out;
    out.unitary_distance = op_norm(Matrix(p.k));
    Vector state = p.v.col(0) + p.v * (p.k.col(0));
    std::vector<int> a_sites;
    for (int s = 0; s < k; s++) {
        a_sites.push_back(s);
    }
    out.s1 = renyi_entropy(StateVector(state / state.norm()), a_sites, 1);

    std::vector<PauliString> probes;
    constexpr Pauli kNon[3] = {Pauli::X, Pauli::Y, Pauli::Z};
    for (int i = 0; i < k; i++) {
        for (Pauli a : kNon) {
            probes.push_back(PauliString::single(static_cast<std::size_t>(n), static_cast<std::size_t>(i), a));
            for (int j = i + 1; j < k; j++) {
                for (Pauli b : kNon) {
                    PauliString s = PauliString::single(static_cast<std::size_t>(n), static_cast<std::size_t>(i), a);
                    s.set(static_cast<std::size_t>(j), b);
                    probes.push_back(s);
                }
            }
        }
    }
    out.probes = static_cast<int>(probes.size());

    // U A U^dag - A = V K W^dag + W K^dag V^dag + V K G K^dag V^dag with
    // W = A V and G = V^dag W, since U = I + V K V^dag.
    for (const PauliString& probe : probes) {
        Matrix w(dim, 2);
        w.col(0) = apply_pauli(probe, p.v.col(0));
        w.col(1) = apply_pauli(probe, p.v.col(1));
        Eigen::Matrix2cd g = p.v.adjoint() * w;
        Eigen::Matrix2cd kgk = p.k * g * p.k.adjoint();
        Matrix left1 = p.v * p.k, left2 = w * p.k.adjoint(), left3 = p.v * kgk;

        // Partial trace over B of the three rank-two terms, divided by D.
        Matrix m = Matrix::Zero(dd, dd);
        auto accumulate = [&](const Matrix& l, const Matrix& r) {
            Matrix lb(dd, 2), rb(dd, 2);
            for (Eigen::Index b = 0; b < dd; b++) {
                for (Eigen::Index x = 0; x < dd; x++) {
                    lb.row(x) = l.row(x * dd + b);
                    rb.row(x) = r.row(x * dd + b);
                }
                m += lb * rb.adjoint();
            }
        };
        accumulate(left1, w);
        accumulate(left2, p.v);
        accumulate(left3, p.v);
        m /= static_cast<double>(dd);

        auto apply = [&](const Vector& x) {
            Eigen::Vector2cd vx = p.v.adjoint() * x;
            Eigen::Vector2cd wx = w.adjoint() * x;
            Vector y = left1 * wx + left2 * vx + left3 * vx;
            // (M (x) I_B) x, with x viewed as a D x D matrix indexed (a, b).
            Eigen::Map<const Matrix> xm(x.data(), dd, dd);  // column-major: xm(b, a)
            Matrix mx = xm * m.transpose();
            Eigen::Map<const Vector> flat(mx.data(), dim);
            return Vector(y - flat);
        };
        out.max_growth = std::max(out.max_growth, hermitian_norm(apply, dim, 0x5eedULL));
    }
    return out;
}

}  // namespace lightcone
