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

#ifndef LIGHTCONE_DYNAMICS_HPP
#define LIGHTCONE_DYNAMICS_HPP

#include <random>
#include <span>
#include <vector>

#include "lightcone/dense.hpp"
#include "lightcone/graph.hpp"

namespace lightcone {

/// Spectral decomposition of a Hermitian H, reused for many times.
class Propagator {
   public:
    explicit Propagator(const DenseOperator& h);

    const Eigen::VectorXd& energies() const { return energies_; }
    const Matrix& eigenvectors() const { return v_; }

    /// e^{-iHt}
    Matrix unitary(double t) const;
    /// e^{iHt} a e^{-iHt}
    Matrix heisenberg(const Matrix& a, double t) const;
    /// e^{-iHt} psi
    Vector schrodinger(const Vector& psi, double t) const;

   private:
    Matrix v_;
    Eigen::VectorXd energies_;
};

/// Heisenberg evolution of one fixed operator at many times. The operator is
/// rotated into the energy basis once; each time then costs two products.
class HeisenbergTrajectory {
   public:
    HeisenbergTrajectory(const Propagator& p, const Matrix& a);
    Matrix at(double t) const;

   private:
    const Propagator& p_;
    Matrix rotated_;
};

DenseOperator evolve_operator(const DenseOperator& h, const DenseOperator& a, double t);
StateVector evolve_state(const DenseOperator& h, const StateVector& psi, double t);

// ---------------------------------------------------------------------------
// Random test objects. All draw from a caller-owned std::mt19937_64.

/// Complex matrix with independent standard complex Gaussian entries.
Matrix random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
/// Haar-random unitary (QR of a Gaussian matrix with the phase fix).
Matrix random_unitary(Eigen::Index dim, std::mt19937_64& rng);
/// (G + G^dag) / 2 for Gaussian G.
Matrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng);
/// Haar-random pure state.
Vector random_state(Eigen::Index dim, std::mt19937_64& rng);

/// Nearest-neighbour chain on n sites: each bond (i, i+1) gets random
/// coefficients on the nine two-site strings with both factors non-identity,
/// rescaled so the bond norm is uniform in [h_max / 2, h_max].
HamiltonianSpec random_chain(int n, double h_max, std::mt19937_64& rng);

struct GraphModel {
    InteractionGraph graph;
    HamiltonianSpec spec;
};

/// Connected random graph on n vertices (spanning tree plus extra edges with
/// probability p) with random two-site terms on every edge, scaled as in
/// random_chain. Vertex i is qubit i and each edge norm is the exact operator
/// norm of its term sum.
GraphModel random_graph_model(int n, double p, double h_max, std::mt19937_64& rng);

/// Operator norm of the sum of terms acting inside each bond (i, i+1) of a
/// nearest-neighbour chain. Two-site terms belong to their bond; an on-site
/// term at site i > 0 is folded into bond i - 1 and site 0 into bond 0.
/// Throws InputError when a term reaches beyond neighbouring sites.
std::vector<double> bond_norms(const HamiltonianSpec& chain);

/// Largest norm among bond terms, taken both with and without on-site fields.
double chain_coupling(const HamiltonianSpec& chain);

/// Terms whose support lies inside [lo, hi], as a spec on hi - lo + 1 sites.
HamiltonianSpec restrict_to_interval(const HamiltonianSpec& spec, int lo, int hi);

struct TruncationError {
    double measured = 0;
    double bound = 0;
};

/// max over single-site Paulis A at site 0 of |A(t) - e^{L_{<=r-1} t} A|,
/// with the chain bound (2h|t|)^r / r! using h = chain_coupling(chain).
TruncationError truncation_error(const HamiltonianSpec& chain, int r, double t);

/// |e^{iH_{ABC} t} - e^{iH_{AB} t} e^{-iH_B t} e^{iH_{BC} t}| for contiguous,
/// disjoint regions with B adjacent to both A and C and A, C not adjacent.
double patching_error(const HamiltonianSpec& chain, std::span<const int> a, std::span<const int> b,
                      std::span<const int> c, double t);

}  // namespace lightcone

#endif
