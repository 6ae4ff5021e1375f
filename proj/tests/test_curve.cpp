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
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lightcone/bounds.hpp"
#include "lightcone/error.hpp"

using namespace lightcone;

namespace {

constexpr double kE = std::numbers::e;

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; i++) {
        out.push_back(lo + (hi - lo) * i / (n - 1));
    }
    return out;
}

std::vector<int> range(int lo, int hi) {
    std::vector<int> out;
    for (int r = lo; r <= hi; r++) {
        out.push_back(r);
    }
    return out;
}

// Root of f(t) = eps by bisection, assuming f increasing on [lo, hi].
double bisect(const std::function<double(double)>& f, double eps, double lo, double hi) {
    for (int k = 0; k < 200; k++) {
        double mid = (lo + hi) / 2;
        (f(mid) < eps ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

TEST(LightConeFit, ChainBoundVelocity) {
    auto rs = range(10, 30);
    auto ts = grid(0, 10, 4001);
    BoundCurve c = evaluate_curve(BoundFamily::Chain1D, [](int r, double t) { return chain_bound(1, r, t); }, rs, ts);
    LightConeReport rep = light_cone_fit(c, 0.5);
    EXPECT_EQ(rep.fitted_points, 21);
    EXPECT_NEAR(rep.velocity, 2 * kE, 0.15 * 2 * kE);
    // Crossings agree with direct root finding to grid accuracy.
    ASSERT_EQ(rep.crossings.size(), rs.size());
    for (const Crossing& x : rep.crossings) {
        double want = bisect([&](double t) { return chain_bound(1, x.r, t); }, 0.5, 0, 10);
        EXPECT_NEAR(x.t, want, 1e-4) << "r " << x.r;
    }
    // The same velocity from the exact roots.
    double mt = 0, mr = 0, stt = 0, str = 0;
    std::vector<double> roots;
    for (int r : rs) {
        roots.push_back(bisect([&](double t) { return chain_bound(1, r, t); }, 0.5, 0, 10));
        mt += roots.back();
        mr += r;
    }
    mt /= static_cast<double>(rs.size());
    mr /= static_cast<double>(rs.size());
    for (std::size_t k = 0; k < rs.size(); k++) {
        stt += (roots[k] - mt) * (roots[k] - mt);
        str += (roots[k] - mt) * (rs[k] - mr);
    }
    EXPECT_NEAR(rep.velocity, str / stt, 1e-3 * rep.velocity);
}

TEST(LightConeFit, SingleParticleVelocity) {
    auto rs = range(10, 30);
    auto ts = grid(0, 10, 4001);
    for (double h : {0.5, 1.0, 2.0}) {
        BoundCurve c = evaluate_curve(BoundFamily::SingleParticle,
                                      [h](int r, double t) { return single_particle_bound(h, r, t); }, rs, ts);
        LightConeReport rep = light_cone_fit(c, 0.5);
        EXPECT_NEAR(rep.velocity, 2 * kE * h, 0.15 * 2 * kE * h) << h;
    }
}

TEST(LightConeFit, ZeroCurveIsAFitError) {
    auto rs = range(1, 10);
    auto ts = grid(0, 1, 11);
    BoundCurve c = evaluate_curve(BoundFamily::Measured, [](int, double) { return 0.0; }, rs, ts);
    EXPECT_THROW(light_cone_fit(c, 0.5), FitError);
    EXPECT_THROW(light_cone_fit(c, 0.0), InputError);
    EXPECT_THROW(light_cone_fit(c, 1.5), InputError);
}

TEST(LightConeFit, TwoCrossingsAreNotEnough) {
    auto rs = range(1, 2);
    auto ts = grid(0, 5, 51);
    BoundCurve c = evaluate_curve(BoundFamily::Chain1D, [](int r, double t) { return chain_bound(1, r, t); }, rs, ts);
    EXPECT_THROW(light_cone_fit(c, 0.5), FitError);
}

TEST(LightConeFit, UsesTrailingRun) {
    // r = 1..3 cross, r = 4 never does, r = 5..8 cross: only 5..8 are fitted.
    auto rs = range(1, 8);
    auto ts = grid(0, 10, 101);
    BoundCurve c = evaluate_curve(
        BoundFamily::Measured, [](int r, double t) { return r == 4 ? 0.0 : std::min(1.0, t / r); }, rs, ts);
    LightConeReport rep = light_cone_fit(c, 0.5);
    EXPECT_EQ(rep.fitted_points, 4);
    EXPECT_EQ(rep.crossings.size(), 7u);
    EXPECT_NEAR(rep.velocity, 2.0, 1e-12);
    EXPECT_NEAR(rep.residual, 0.0, 1e-12);
}

TEST(Curve, CrossingsNonDecreasingForClosedForms) {
    auto rs = range(1, 25);
    auto ts = grid(0, 12, 1201);
    std::vector<BoundCurve> curves = {
        evaluate_curve(BoundFamily::Chain1D, [](int r, double t) { return chain_bound(1, r, t); }, rs, ts),
        evaluate_curve(BoundFamily::BoundedDegree, [](int r, double t) { return bounded_degree_bound(3, 1, r, t); },
                       rs, ts),
        evaluate_curve(BoundFamily::SingleParticle, [](int r, double t) { return single_particle_bound(1, r, t); },
                       rs, ts),
        evaluate_curve(BoundFamily::QWMarkov, [](int r, double t) { return qw_markov_bound(1, r, t); }, rs, ts),
    };
    for (const BoundCurve& c : curves) {
        EXPECT_EQ(c.validate(1e-9), "") << family_name(c.family);
        LightConeReport rep = light_cone_fit(c, 0.5);
        for (std::size_t k = 1; k < rep.crossings.size(); k++) {
            EXPECT_LE(rep.crossings[k - 1].t, rep.crossings[k].t) << family_name(c.family);
        }
    }
}

TEST(Curve, ValidateFlagsProblems) {
    BoundCurve c;
    c.family = BoundFamily::Chain1D;
    c.grid = {{1, 0.0, 0.0}, {1, 1.0, 0.5}, {1, 2.0, 0.4}};
    EXPECT_NE(c.validate(), "");
    c.family = BoundFamily::Measured;
    EXPECT_EQ(c.validate(), "");
    c.grid.push_back({2, 0.0, -1.0});
    EXPECT_NE(c.validate(), "");
}

TEST(Curve, WorkerCountDoesNotChangeValues) {
    auto rs = range(1, 40);
    auto ts = grid(0, 4, 97);
    auto f = [](int r, double t) { return qw_markov_bound(1.3, r, t); };
    BoundCurve one = evaluate_curve(BoundFamily::QWMarkov, f, rs, ts, 1);
    BoundCurve four = evaluate_curve(BoundFamily::QWMarkov, f, rs, ts, 4);
    EXPECT_EQ(curve_to_csv(one), curve_to_csv(four));
}

TEST(Curve, CsvFormat) {
    std::vector<int> rs{1, 2};
    std::vector<double> ts{0, 0.5};
    BoundCurve c = evaluate_curve(BoundFamily::Chain1D, [](int r, double t) { return chain_bound(1, r, t); }, rs, ts);
    std::istringstream in(curve_to_csv(c));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "family,r,t,value");
    int rows = 0;
    while (std::getline(in, line)) {
        rows++;
        EXPECT_EQ(line.rfind(std::string(family_name(BoundFamily::Chain1D)) + ",", 0), 0u) << line;
    }
    EXPECT_EQ(rows, 4);
    EXPECT_NE(curve_to_csv(c).find(",2,0.5,0.5\n"), std::string::npos);
}

TEST(Curve, FamilyNamesRoundTrip) {
    for (BoundFamily f : {BoundFamily::MatrixExp, BoundFamily::PathSum, BoundFamily::SelfAvoiding,
                          BoundFamily::Chain1D, BoundFamily::BoundedDegree, BoundFamily::ExpEnvelope,
                          BoundFamily::SingleParticle, BoundFamily::QWMarkov, BoundFamily::Measured}) {
        EXPECT_EQ(family_from_name(family_name(f)), f);
    }
    EXPECT_THROW(family_from_name("nope"), InputError);
}

TEST(Curve, ReportJson) {
    auto rs = range(10, 20);
    auto ts = grid(0, 10, 1001);
    BoundCurve c = evaluate_curve(BoundFamily::Chain1D, [](int r, double t) { return chain_bound(1, r, t); }, rs, ts);
    std::string j = report_to_json(light_cone_fit(c, 0.5));
    for (const char* key : {"\"epsilon\"", "\"crossings\"", "\"velocity\"", "\"residual\""}) {
        EXPECT_NE(j.find(key), std::string::npos) << key;
    }
}

TEST(Curve, FormatReal) {
    EXPECT_EQ(format_real(0.1), "0.10000000000000001");
    EXPECT_EQ(format_real(2), "2");
    EXPECT_EQ(std::stod(format_real(1.0 / 3)), 1.0 / 3);
}

}  // namespace
