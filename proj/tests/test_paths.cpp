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
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "lightcone/bounds.hpp"
#include "lightcone/error.hpp"
#include "lightcone/graph.hpp"
#include "oracles.hpp"

using namespace lightcone;

namespace {

InteractionGraph random_graph(int n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::uniform_real_distribution<double> norm(0.5, 1.5);
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

TEST(Paths, SingleEdge) {
    InteractionGraph g({1, 2}, {{1, 2, 1.0}});
    std::vector<Vertex> a{1}, b{2};
    auto totals = enumerate_paths(g, a, b, 1, false);
    ASSERT_EQ(totals.size(), 2u);
    EXPECT_EQ(totals[1].count, 1);
    EXPECT_DOUBLE_EQ(totals[1].weight, 1.0);
}

TEST(Paths, TriangleLengthTwo) {
    InteractionGraph g = complete_graph(3);
    std::vector<Vertex> a{0}, b{2};
    auto totals = enumerate_paths(g, a, b, 2, false);
    EXPECT_EQ(totals[1].count, 1);
    EXPECT_EQ(totals[2].count, 3);
    EXPECT_DOUBLE_EQ(totals[2].weight, 3.0);
}

TEST(Paths, UniqueSelfAvoidingPathOnChain) {
    InteractionGraph g = path_graph(5);
    std::vector<Vertex> a{0}, b{4};
    auto totals = enumerate_paths(g, a, b, 8, true);
    double all = 0;
    for (std::size_t l = 0; l < totals.size(); l++) {
        all += totals[l].count;
        if (l != 4) {
            EXPECT_EQ(totals[l].count, 0) << "length " << l;
        }
    }
    EXPECT_EQ(totals[4].count, 1);
    EXPECT_EQ(all, 1);
}

TEST(Paths, LengthGuard) {
    InteractionGraph g = path_graph(4);
    std::vector<Vertex> a{0}, b{3};
    EXPECT_THROW(enumerate_paths(g, a, b, 21, true), ResourceError);
    EXPECT_THROW(enumerate_paths(g, a, b, 0, true), InputError);
    PathOptions wide;
    wide.length_guard = 30;
    EXPECT_NO_THROW(enumerate_paths(g, a, b, 21, false, wide));
    try {
        enumerate_paths(g, a, b, 21, true);
    } catch (const ResourceError& e) {
        EXPECT_NE(std::string(e.what()).find("length_guard"), std::string::npos) << e.what();
    }
}

TEST(Paths, ExpansionBudget) {
    InteractionGraph g = complete_graph(9);
    std::vector<Vertex> a{0}, b{8};
    PathOptions tight;
    tight.expansion_budget = 1000;
    EXPECT_THROW(enumerate_paths(g, a, b, 8, true, tight), ResourceError);
}

TEST(Paths, UnknownOrEmptySets) {
    InteractionGraph g = path_graph(3);
    std::vector<Vertex> a{0}, bad{9}, empty;
    EXPECT_THROW(enumerate_paths(g, a, bad, 2, false), InputError);
    EXPECT_THROW(enumerate_paths(g, empty, a, 2, false), InputError);
}

// Both flavours agree with literal brute force on small random graphs.
TEST(PathsProperty, MatchesBruteForce) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; trial++) {
        int n = 3 + static_cast<int>(rng() % 4);
        InteractionGraph g = random_graph(n, 0.4, rng);
        int max_length = 5;
        std::set<int> sa{0}, sb{n - 1};
        if (trial % 3 == 0) {
            sa.insert(1);
        }
        std::vector<Vertex> a(sa.begin(), sa.end()), b(sb.begin(), sb.end());
        for (bool avoid : {false, true}) {
            auto got = enumerate_paths(g, a, b, max_length, avoid);
            auto want = oracle::brute_paths(g, sa, sb, max_length, avoid);
            for (int l = 0; l <= max_length; l++) {
                auto k = static_cast<std::size_t>(l);
                EXPECT_EQ(got[k].count, want.count[k]) << "trial " << trial << " l " << l << " sa " << avoid;
                EXPECT_NEAR(got[k].weight, want.weight[k], 1e-12 * std::max(1.0, want.weight[k]));
            }
        }
    }
}

TEST(PathsProperty, SelfAvoidingNeverExceedsUnrestricted) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 40; trial++) {
        int n = 4 + static_cast<int>(rng() % 5);
        InteractionGraph g = random_graph(n, 0.5, rng);
        std::vector<Vertex> a{0}, b{n - 1};
        auto sa = enumerate_paths(g, a, b, 9, true);
        auto un = enumerate_paths(g, a, b, 9, false);
        for (std::size_t l = 0; l < sa.size(); l++) {
            EXPECT_LE(sa[l].weight, un[l].weight * (1 + 1e-12));
            EXPECT_LE(sa[l].count, un[l].count);
        }
    }
}

TEST(PathsProperty, TreesHaveOneSelfAvoidingPath) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; trial++) {
        int n = 3 + static_cast<int>(rng() % 10);
        std::vector<Edge> edges;
        std::vector<Vertex> verts{0};
        for (int v = 1; v < n; v++) {
            edges.push_back({static_cast<int>(rng() % static_cast<unsigned>(v)), v, 1.0});
            verts.push_back(v);
        }
        InteractionGraph g(verts, edges);
        int u = static_cast<int>(rng() % static_cast<unsigned>(n));
        int v = static_cast<int>(rng() % static_cast<unsigned>(n));
        if (u == v) {
            continue;
        }
        int r = *g.distance(u, v);
        std::vector<Vertex> a{u}, b{v};
        auto totals = enumerate_paths(g, a, b, n - 1, true);
        for (std::size_t l = 0; l < totals.size(); l++) {
            EXPECT_EQ(totals[l].count, static_cast<int>(l) == r ? 1 : 0) << "l " << l << " r " << r;
        }
    }
}

TEST(PathSum, TotalsFeedTheSeries) {
    InteractionGraph g = complete_graph(3);
    std::vector<Vertex> a{0}, b{2};
    double t = 0.3;
    PathSum s = path_sum_bound(g, a, b, t, 2, false);
    EXPECT_NEAR(s.partial_sum, 2 * t + (2 * t) * (2 * t) / 2 * 3, 1e-14);
    EXPECT_GT(s.tail_estimate, 0);
}

TEST(PathSum, ChainSelfAvoiding) {
    InteractionGraph g = path_graph(5);
    std::vector<Vertex> a{0}, b{4};
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        PathSum s = path_sum_bound(g, a, b, t, 4, true);
        EXPECT_NEAR(s.partial_sum, std::pow(2 * t, 4) / 24, 1e-14 * std::pow(2 * t, 4));
        EXPECT_EQ(s.tail_estimate, 0);
    }
}

TEST(PathSum, TooShortGivesZero) {
    InteractionGraph g = path_graph(6);
    std::vector<Vertex> a{0}, b{5};
    EXPECT_EQ(path_sum_bound(g, a, b, 1.0, 3, false).partial_sum, 0);
    EXPECT_EQ(path_sum_bound(g, a, b, 1.0, 3, true).partial_sum, 0);
}

TEST(PathSumProperty, MonotoneInLength) {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 20; trial++) {
        InteractionGraph g = random_graph(6, 0.4, rng);
        std::vector<Vertex> a{0}, b{5};
        for (bool avoid : {false, true}) {
            double prev = 0;
            for (int l = 1; l <= 10; l++) {
                double v = path_sum_bound(g, a, b, 0.7, l, avoid).partial_sum;
                EXPECT_GE(v, prev);
                prev = v;
            }
        }
    }
}

}  // namespace
