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


// Independent reference implementations used only by the tests. They favour
// the most literal formula over speed and share no code with the library.

#ifndef LIGHTCONE_TESTS_ORACLES_HPP
#define LIGHTCONE_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "lightcone/graph.hpp"

namespace oracle {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// J_n(x) from its power series. Good for x up to about 20.
inline double bessel_series(int n, double x) {
    double term = std::pow(x / 2, n) / std::tgamma(n + 1.0);
    double sum = term;
    for (int k = 1; k < 200; k++) {
        term *= -(x / 2) * (x / 2) / (k * static_cast<double>(k + n));
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) {
            break;
        }
    }
    return sum;
}

inline Matrix pauli(char c) {
    Matrix m(2, 2);
    switch (c) {
        case 'X':
            m << 0, 1, 1, 0;
            break;
        case 'Y':
            m << 0, Complex(0, -1), Complex(0, 1), 0;
            break;
        case 'Z':
            m << 1, 0, 0, -1;
            break;
        default:
            m << 1, 0, 0, 1;
    }
    return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Kronecker product of single-site Paulis, site 0 leftmost.
inline Matrix pauli_string(const std::string& s) {
    Matrix m = Matrix::Identity(1, 1);
    for (char c : s) {
        m = kron(m, pauli(c));
    }
    return m;
}

inline double op_norm(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

inline Matrix commutator(const Matrix& a, const Matrix& b) {
    return a * b - b * a;
}

/// exp(m) by a long Taylor series after scaling, then squaring.
inline Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& m) {
    double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm > 0.5) {
        norm /= 2;
        squarings++;
    }
    Eigen::MatrixXd a = m / std::pow(2.0, squarings);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    Eigen::MatrixXd sum = term;
    for (int k = 1; k < 40; k++) {
        term = term * a / k;
        sum += term;
    }
    for (int s = 0; s < squarings; s++) {
        sum = sum * sum;
    }
    return sum;
}

struct PathCounts {
    std::vector<double> count;
    std::vector<double> weight;
};

/// Enumerates every edge sequence of length <= max_length by brute force and
/// keeps those satisfying the path rules literally:
///   - e_1 touches A, e_l touches B, consecutive edges share a vertex and differ;
///   - self-avoiding: e_k (k >= 2) avoids A and every vertex of e_1..e_{k-2},
///     and no edge before e_l touches B.
inline PathCounts brute_paths(const lightcone::InteractionGraph& g, const std::set<int>& a, const std::set<int>& b,
                              int max_length, bool self_avoiding) {
    PathCounts out{std::vector<double>(static_cast<std::size_t>(max_length) + 1, 0.0),
                   std::vector<double>(static_cast<std::size_t>(max_length) + 1, 0.0)};
    bool overlap = false;
    for (int v : a) {
        overlap = overlap || b.count(v);
    }
    if (overlap) {
        out.count[0] = out.weight[0] = 1;
    }
    const auto& edges = g.edges();
    auto touches = [](const lightcone::Edge& e, const std::set<int>& s) { return s.count(e.u) || s.count(e.v); };
    auto share = [](const lightcone::Edge& e, const lightcone::Edge& f) {
        return e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v;
    };
    auto valid = [&](const std::vector<std::size_t>& seq) {
        const auto& first = edges[seq.front()];
        if (!touches(first, a) || !touches(edges[seq.back()], b)) {
            return false;
        }
        for (std::size_t k = 1; k < seq.size(); k++) {
            if (seq[k] == seq[k - 1] || !share(edges[seq[k]], edges[seq[k - 1]])) {
                return false;
            }
        }
        if (!self_avoiding) {
            return true;
        }
        if (overlap) {
            return false;
        }
        for (std::size_t k = 0; k + 1 < seq.size(); k++) {
            if (touches(edges[seq[k]], b)) {
                return false;
            }
        }
        for (std::size_t k = 1; k < seq.size(); k++) {
            const auto& e = edges[seq[k]];
            if (touches(e, a)) {
                return false;
            }
            for (std::size_t j = 0; j + 1 < k; j++) {
                if (share(e, edges[seq[j]])) {
                    return false;
                }
            }
        }
        return true;
    };
    std::vector<std::size_t> seq;
    std::function<void()> grow = [&]() {
        if (!seq.empty() && valid(seq)) {
            double w = 1;
            for (std::size_t k : seq) {
                w *= edges[k].norm;
            }
            out.count[seq.size()] += 1;
            out.weight[seq.size()] += w;
        }
        if (static_cast<int>(seq.size()) == max_length) {
            return;
        }
        for (std::size_t k = 0; k < edges.size(); k++) {
            if (!seq.empty() && (k == seq.back() || !share(edges[k], edges[seq.back()]))) {
                continue;
            }
            seq.push_back(k);
            grow();
            seq.pop_back();
        }
    };
    grow();
    return out;
}

/// Minimum of f over a uniform grid on [lo, hi].
inline double grid_min(const std::function<double(double)>& f, double lo, double hi, int points) {
    double best = f(lo);
    for (int i = 1; i <= points; i++) {
        best = std::min(best, f(lo + (hi - lo) * i / points));
    }
    return best;
}

}  // namespace oracle

#endif
