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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lightcone/bounds.hpp"
#include "lightcone/error.hpp"
#include "lightcone/graph.hpp"
#include "oracles.hpp"

using namespace lightcone;

namespace {

constexpr double kE = std::numbers::e;

InteractionGraph random_graph(int n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::uniform_real_distribution<double> norm(0.2, 1.5);
    std::vector<Edge> edges;
    for (int u = 0; u < n; u++) {
        for (int v = u + 1; v < n; v++) {
            if (v == u + 1 || coin(rng)) {
                edges.push_back({u, v, norm(rng)});
            }
        }
    }
    std::vector<Vertex> verts;
    for (int v = 0; v < n; v++) {
        verts.push_back(v);
    }
    return InteractionGraph(verts, edges);
}

TEST(MatrixExp, SingleEdge) {
    for (double h : {0.5, 1.0, 2.0}) {
        InteractionGraph g({1, 2}, {{1, 2, h}});
        std::vector<Vertex> a{1}, b{2};
        for (double t : {-0.7, 0.1, 1.0, 2.5}) {
            double want = std::expm1(4 * h * std::abs(t)) / 2;
            EXPECT_NEAR(matrix_exp_bound(g, a, b, t), want, 1e-10 * want);
        }
    }
}

TEST(MatrixExp, ZeroAtTimeZero) {
    InteractionGraph g = grid_graph(3, 3);
    std::vector<Vertex> a{0}, b{4, 8};
    EXPECT_EQ(matrix_exp_bound(g, a, b, 0.0), 0.0);
}

TEST(MatrixExp, CompleteGraphClosedForm) {
    for (int n : {3, 5, 9}) {
        double j0 = 0.7;
        InteractionGraph g = complete_graph(n, j0);
        std::vector<Vertex> a{0}, b{1};
        for (double t : {0.05, 0.2, 0.6}) {
            double want = (std::exp(2 * t * (2 * n - 2) * j0) - std::exp(2 * t * (n - 2) * j0)) / n;
            EXPECT_NEAR(matrix_exp_bound(g, a, b, t), want, 1e-10 * want) << n << " " << t;
        }
    }
}

TEST(MatrixExp, UnknownVerticesRejected) {
    InteractionGraph g = path_graph(3);
    std::vector<Vertex> a{0}, bad{5}, empty;
    EXPECT_THROW(matrix_exp_bound(g, a, bad, 1.0), InputError);
    EXPECT_THROW(matrix_exp_bound(g, empty, a, 1.0), InputError);
}

TEST(MatrixExpProperty, AgreesWithTaylorOracle) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; trial++) {
        int n = 3 + static_cast<int>(rng() % 8);
        InteractionGraph g = random_graph(n, 0.35, rng);
        Eigen::MatrixXd h = coupling_matrix(g);
        EXPECT_TRUE(h.isApprox(h.transpose()));
        std::vector<Vertex> a{0}, b{n - 1, n / 2};
        for (double t : {0.1, 0.8, 2.0}) {
            Eigen::MatrixXd e = oracle::expm_taylor(2 * t * h);
            double want = e(0, n - 1) + (n / 2 != n - 1 ? e(0, n / 2) : 0.0);
            EXPECT_NEAR(matrix_exp_bound(g, a, b, t), want, 1e-10 * want);
        }
    }
}

TEST(MatrixExpProperty, BatchMatchesSingle) {
    InteractionGraph g = cycle_graph(7, 0.9);
    std::vector<Vertex> a{0}, b{3};
    std::vector<double> ts{0, 0.1, 0.5, 1.5};
    auto batch = matrix_exp_bound(g, a, b, std::span<const double>(ts));
    for (std::size_t k = 0; k < ts.size(); k++) {
        EXPECT_NEAR(batch[k], matrix_exp_bound(g, a, b, ts[k]), 1e-12 * std::max(1.0, batch[k]));
    }
}

// self-avoiding (converged) <= unrestricted path sum <= matrix exponential.
TEST(BoundOrderingProperty, PathSumsBelowMatrixExp) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 20; trial++) {
        int n = 4 + static_cast<int>(rng() % 4);
        InteractionGraph g = random_graph(n, 0.3, rng);
        std::vector<Vertex> a{0}, b{n - 1};
        for (double t : {0.05, 0.2, 0.5}) {
            PathSum sa = path_sum_bound(g, a, b, t, n - 1, true);
            PathSum un = path_sum_bound(g, a, b, t, 14, false);
            double me = matrix_exp_bound(g, a, b, t);
            EXPECT_EQ(sa.tail_estimate, 0.0);
            EXPECT_LE(sa.partial_sum, un.partial_sum * (1 + 1e-12));
            EXPECT_LE(un.partial_sum, me * (1 + 1e-12));
        }
    }
}

TEST(ChainBound, Values) {
    EXPECT_DOUBLE_EQ(chain_bound(1, 1, 1), 2.0);
    EXPECT_EQ(chain_bound(1.3, 4, 0), 0.0);
    EXPECT_DOUBLE_EQ(chain_bound(1, 2, -1.5), 4.5);
    double big = chain_bound(1, 170, 1);
    EXPECT_TRUE(std::isfinite(big));
    double want = std::exp(170 * std::log(2.0) - std::lgamma(171.0));
    EXPECT_NEAR(big, want, 1e-10 * want);
    // Continuity across the switch to log space.
    for (int r = 18; r <= 24; r++) {
        double direct = std::pow(2 * 1.7, r) / std::tgamma(r + 1.0);
        EXPECT_NEAR(chain_bound(1.7, r, 1), direct, 1e-12 * direct);
    }
}

TEST(BoundedDegree, Values) {
    double c = 1 / (1 - 2 / kE);
    double want = std::pow(4 * 0.1, 3) / 6 * c;
    EXPECT_NEAR(bounded_degree_bound(2, 1, 3, 0.1), want, 1e-14);
    EXPECT_NEAR(bounded_degree_bound(3, 0.5, 2, 0.2), std::pow(4 * 2 * 0.5 * 0.2, 2) / 2 * c, 1e-14);
    EXPECT_EQ(bounded_degree_bound(4, 1, 3, 0), 0.0);
    EXPECT_EQ(bounded_degree_bound(3, 1, 3, 50), 2.0);
    EXPECT_THROW(bounded_degree_bound(1, 1, 3, 1), InputError);
}

TEST(BoundsProperty, ChainBelowBoundedDegree) {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> hs(0.1, 2), ts(0, 3);
    for (int k = 0; k < 2000; k++) {
        double h = hs(rng), t = ts(rng);
        int r = 1 + static_cast<int>(rng() % 30);
        double bd = bounded_degree_bound(2, h, r, t);
        if (bd < 2) {
            EXPECT_LE(chain_bound(h, r, t), bd);
        }
    }
}

TEST(FactorialToExponential, Values) {
    EXPECT_NEAR(factorial_to_exponential(1, 1, 2, 1), std::exp(-2.0) * std::expm1(kE), 1e-14);
    EXPECT_EQ(factorial_to_exponential(1, 1, 2, 0), 0.0);
    EXPECT_THROW(factorial_to_exponential(1, 0, 2, 1), InputError);
    EXPECT_THROW(factorial_to_exponential(1, -1, 2, 1), InputError);
    EXPECT_THROW(factorial_to_exponential(1, 1, 1, 1), InputError);
}

TEST(FactorialToExponentialProperty, Dominates) {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> cs(0.1, 3), mus(0.1, 3), ts(0, 5);
    for (int k = 0; k < 5000; k++) {
        double c = cs(rng), mu = mus(rng), t = ts(rng);
        int r = 2 + static_cast<int>(rng() % 40);
        double lhs = factorial_to_exponential(c, mu, r, t);
        double rhs = std::exp(r * std::log(c * t) - std::lgamma(r + 1.0));
        EXPECT_GE(lhs, rhs * (1 - 1e-12)) << c << " " << mu << " " << r << " " << t;
    }
}

TEST(ExpEnvelope, Values) {
    EXPECT_NEAR(exp_envelope(1, 1, 1, 1, 5, 1), std::exp(-5.0) * (kE - 1), 1e-15);
    EXPECT_EQ(exp_envelope(2, 1, 1, 3, 5, 0), 0.0);
    double mu = 0.4;
    for (int d : {1, 3, 7}) {
        double one = exp_envelope(1.5, mu, 2, 2, d, 1.3);
        double two = exp_envelope(1.5, mu, 2, 2, 2 * d, 1.3);
        EXPECT_NEAR(two, one * std::exp(-mu * d), 1e-14 * one);
    }
    EXPECT_THROW(exp_envelope(0, 1, 1, 1, 1, 1), InputError);
    EXPECT_THROW(exp_envelope(1, 1, 1, 0, 1, 1), InputError);
}

TEST(SingleParticle, Values) {
    EXPECT_LT(single_particle_bound(1, 30, 1), 1e-6);
    EXPECT_EQ(single_particle_bound(1, 3, 100), 1.0);
    double want = std::pow(0.2 * kE / 5, 5) / (1 - std::exp(-2.0));
    EXPECT_NEAR(single_particle_bound(1, 5, 0.1), want, 1e-14 * want);
    EXPECT_THROW(single_particle_bound(1, 0, 1), InputError);
}

TEST(QwMarkov, Values) {
    EXPECT_NEAR(qw_markov_bound(1, 10, 0, 0.5), std::exp(-5.0), 1e-15);
    double want = std::exp(-5 * (1 - 0.4 * std::sinh(0.25) / 0.5));
    EXPECT_NEAR(qw_markov_bound(1, 10, 1, 0.5), want, 1e-14);
    // Beyond x0 = 2ht the optimized bound drops below one.
    for (double t : {0.5, 1.0, 3.0}) {
        int x0 = static_cast<int>(std::ceil(2 * t * 1.05)) + 1;
        EXPECT_LT(qw_markov_bound(1, x0, t), 1.0);
    }
    EXPECT_EQ(qw_markov_bound(1, 1, 10), 1.0);
    EXPECT_THROW(qw_markov_bound(1, 0, 1), InputError);
    EXPECT_THROW(qw_markov_bound(1, 3, 1, 0.0), InputError);
}

TEST(QwMarkovProperty, OptimizedIsMinimum) {
    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> hs(0.2, 2), ts(0, 4), bs(0.01, 50);
    for (int k = 0; k < 300; k++) {
        double h = hs(rng), t = ts(rng);
        int x0 = 1 + static_cast<int>(rng() % 40);
        double best = qw_markov_bound(h, x0, t);
        EXPECT_LE(best, qw_markov_bound(h, x0, t, bs(rng)) * (1 + 1e-8));
        double grid = oracle::grid_min(
            [&](double b) { return std::min(1.0, std::exp(-b * x0 + 4 * h * t * std::sinh(b / 2))); }, 1e-4, 50, 20000);
        EXPECT_LE(best, grid * (1 + 1e-6));
        EXPECT_GE(best, grid * (1 - 1e-3));
    }
}

TEST(Butterfly, DegreeTwo) {
    ButterflyVelocity v = butterfly_velocity_general(2, 1);
    double grid = 2 * oracle::grid_min([](double b) { return (2 + std::exp(-b) + std::exp(b)) / b; }, 0.01, 10, 1000000);
    EXPECT_NEAR(v.v_b, grid, 1e-6 * grid);
    EXPECT_NEAR(v.v_b, 8.94, 0.01);
}

TEST(Butterfly, LinearInH) {
    for (int d : {2, 3, 6}) {
        double one = butterfly_velocity_general(d, 1).v_b;
        EXPECT_NEAR(butterfly_velocity_general(d, 2).v_b, 2 * one, 1e-9 * one);
        EXPECT_NEAR(butterfly_velocity_general(d, 0.25).v_b, one / 4, 1e-9 * one);
    }
    EXPECT_THROW(butterfly_velocity_general(1, 1), InputError);
}

TEST(Butterfly, InteriorMinimizer) {
    for (int d : {2, 3, 4, 8}) {
        ButterflyVelocity v = butterfly_velocity_general(d, 1);
        auto f = [d](double b) { return (d + std::exp(-b) + (d - 1) * std::exp(b)) / b; };
        EXPECT_GT(v.b_star, 0);
        EXPECT_LT(v.b_star, 50);
        // The finite-difference slope changes sign across b_star.
        double step = 1e-2 * v.b_star;
        EXPECT_LT(f(v.b_star) - f(v.b_star - step), 0);
        EXPECT_GT(f(v.b_star + step) - f(v.b_star), 0);
        EXPECT_NEAR(v.v_b, 2 * f(v.b_star), 1e-12 * v.v_b);
    }
}

TEST(Butterfly, OneDimensional) {
    EXPECT_EQ(butterfly_velocity_1d(1), 4.0);
    EXPECT_EQ(butterfly_velocity_1d(0), 0.0);
    for (double h : {0.1, 1.0, 3.0}) {
        EXPECT_LE(butterfly_velocity_1d(h), butterfly_velocity_general(2, h).v_b);
    }
}

// Every family vanishes at t = 0 and grows with t.
TEST(BoundsProperty, ZeroAtOriginAndMonotone) {
    InteractionGraph g = grid_graph(3, 3, 0.8);
    std::vector<Vertex> a{0}, b{8};
    std::vector<std::function<double(double)>> fams = {
        [&](double t) { return matrix_exp_bound(g, a, b, t); },
        [&](double t) { return path_sum_bound(g, a, b, t, 8, false).partial_sum; },
        [&](double t) { return path_sum_bound(g, a, b, t, 8, true).partial_sum; },
        [](double t) { return chain_bound(1, 4, t); },
        [](double t) { return bounded_degree_bound(3, 1, 4, t); },
        [](double t) { return factorial_to_exponential(1, 1, 4, t); },
        [](double t) { return exp_envelope(1, 1, 2, 2, 4, t); },
        [](double t) { return single_particle_bound(1, 4, t); },
    };
    for (std::size_t f = 0; f < fams.size(); f++) {
        EXPECT_EQ(fams[f](0.0), 0.0) << "family " << f;
        double prev = 0;
        for (int k = 1; k <= 200; k++) {
            double v = fams[f](0.02 * k);
            EXPECT_GE(v, prev) << "family " << f << " k " << k;
            prev = v;
        }
    }
    double prev = 0;
    for (int k = 0; k <= 200; k++) {
        double v = qw_markov_bound(1, 6, 0.02 * k);
        EXPECT_GE(v, prev * (1 - 1e-8));
        prev = v;
    }
}

}  // namespace
