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

#include "lightcone/dynamics.hpp"

#include <cmath>

#include "lightcone/error.hpp"

namespace lightcone {

Propagator::Propagator(const DenseOperator& h) {
    h.require_hermitian("Propagator");
    Matrix sym = (h.matrix() + h.matrix().adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success) {
        throw NumericError("Propagator: eigendecomposition failed");
    }
    v_ = es.eigenvectors();
    energies_ = es.eigenvalues();
}

Matrix Propagator::unitary(double t) const {
    Vector phases(energies_.size());
    for (Eigen::Index k = 0; k < energies_.size(); k++) {
        phases(k) = std::polar(1.0, -energies_(k) * t);
    }
    return v_ * phases.asDiagonal() * v_.adjoint();
}

Matrix Propagator::heisenberg(const Matrix& a, double t) const {
    return HeisenbergTrajectory(*this, a).at(t);
}

Vector Propagator::schrodinger(const Vector& psi, double t) const {
    Vector c = v_.adjoint() * psi;
    for (Eigen::Index k = 0; k < c.size(); k++) {
        c(k) *= std::polar(1.0, -energies_(k) * t);
    }
    return v_ * c;
}

HeisenbergTrajectory::HeisenbergTrajectory(const Propagator& p, const Matrix& a) : p_(p) {
    if (a.rows() != p.eigenvectors().rows() || a.cols() != a.rows()) {
        throw InputError("evolve_operator: dimension mismatch between H and A");
    }
    rotated_ = p.eigenvectors().adjoint() * a * p.eigenvectors();
}

Matrix HeisenbergTrajectory::at(double t) const {
    const Eigen::VectorXd& e = p_.energies();
    Eigen::Index dim = e.size();
    Vector left(dim), right(dim);
    for (Eigen::Index k = 0; k < dim; k++) {
        left(k) = std::polar(1.0, e(k) * t);
        right(k) = std::conj(left(k));
    }
    Matrix m = left.asDiagonal() * rotated_ * right.asDiagonal();
    return p_.eigenvectors() * m * p_.eigenvectors().adjoint();
}

DenseOperator evolve_operator(const DenseOperator& h, const DenseOperator& a, double t) {
    if (!std::isfinite(t)) {
        throw InputError("evolve_operator: t must be finite");
    }
    Propagator p(h);
    return DenseOperator(p.heisenberg(a.matrix(), t), a.label());
}

StateVector evolve_state(const DenseOperator& h, const StateVector& psi, double t) {
    if (psi.amplitudes().size() != h.dimension()) {
        throw InputError("evolve_state: dimension mismatch");
    }
    Propagator p(h);
    Vector out = p.schrodinger(psi.amplitudes(), t);
    return StateVector(out / out.norm());
}

// ---------------------------------------------------------------------------

Matrix random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; j++) {
        for (Eigen::Index i = 0; i < rows; i++) {
            double re = normal(rng);
            double im = normal(rng);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

Matrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
    Matrix g = random_gaussian_matrix(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < dim; k++) {
        double mag = std::abs(r(k, k));
        if (mag > 0) {
            q.col(k) *= r(k, k) / mag;
        }
    }
    return q;
}

Matrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
    Matrix g = random_gaussian_matrix(dim, dim, rng);
    return (g + g.adjoint()) * 0.5;
}

Vector random_state(Eigen::Index dim, std::mt19937_64& rng) {
    Vector v = random_gaussian_matrix(dim, 1, rng).col(0);
    return v / v.norm();
}

}  // namespace lightcone
