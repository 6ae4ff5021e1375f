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

#ifndef LIGHTCONE_BOUNDS_HPP
#define LIGHTCONE_BOUNDS_HPP

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lightcone/graph.hpp"

namespace lightcone {

// ---------------------------------------------------------------------------
// Closed-form commutator bounds. Every function takes |t|.

/// The symmetric coupling matrix h: off-diagonal ‖H_uv‖, diagonal the sum of
/// couplings incident on the vertex. Rows follow the graph's dense indices.
Eigen::MatrixXd coupling_matrix(const InteractionGraph& g);

/// sum over u in A, v in B of exp(2|t| h)_uv.
double matrix_exp_bound(const InteractionGraph& g, std::span<const Vertex> a, std::span<const Vertex> b, double t);

/// The same quantity for many times at once, sharing one factorization.
std::vector<double> matrix_exp_bound(const InteractionGraph& g, std::span<const Vertex> a,
                                     std::span<const Vertex> b, std::span<const double> times);

struct PathSum {
    double partial_sum = 0;
    /// Upper bound on every discarded term with length > max_length.
    double tail_estimate = 0;
};

/// sum_{l <= max_length} (2|t|)^l / l! * weight(l), plus a bounded-degree tail.
PathSum path_sum_bound(const InteractionGraph& g, std::span<const Vertex> a, std::span<const Vertex> b, double t,
                       int max_length, bool self_avoiding, const PathOptions& options = {});

/// Evaluates the path sum from precomputed totals (index = length).
PathSum path_sum_from_totals(const InteractionGraph& g, std::span<const Vertex> a,
                             const std::vector<PathTotal>& totals, double t, bool self_avoiding);

/// (2h|t|)^r / r!
double chain_bound(double h, int r, double t);

/// min(2, (4(g-1)h|t|)^r / r! / (1 - 2/e))
double bounded_degree_bound(int g, double h, int r, double t);

/// e^{-μr}(e^{μv|t|} - 1) with v = e^μ c / μ.
double factorial_to_exponential(double c, double mu, int r, double t);

/// c * boundary * e^{-μ d}(e^{μv|t|} - 1)
double exp_envelope(double c, double mu, double v, int boundary, int d, double t);

/// min(1, (2eh|t|/r)^r / (1 - e^{-2}))
double single_particle_bound(double h, int r, double t);

/// Markov bound on the probability of being at least x0 sites away:
/// exp[-b x0 + 4h|t| sinh(b/2)], clipped to 1. With b unset the exponent is
/// minimized over b in (0, 50].
double qw_markov_bound(double h, int x0, double t, std::optional<double> b = std::nullopt);

struct ButterflyVelocity {
    double v_b = 0;
    double b_star = 0;
};

/// 2h min_{b>0} (d + e^{-b} + (d-1)e^b) / b with d the vertex degree.
ButterflyVelocity butterfly_velocity_general(int degree, double h);

/// 4 h_max
double butterfly_velocity_1d(double h_max);

/// Golden-section minimization of a unimodal function on [lo, hi].
struct Minimum {
    double x = 0;
    double value = 0;
};
Minimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double rel_tol);

// ---------------------------------------------------------------------------
// Curves and light-cone extraction.

enum class BoundFamily {
    MatrixExp,
    PathSum,
    SelfAvoiding,
    Chain1D,
    BoundedDegree,
    ExpEnvelope,
    SingleParticle,
    QWMarkov,
    /// A measured quantity rather than a bound, e.g. |ψ(r,t)|.
    Measured,
};

std::string_view family_name(BoundFamily f);
BoundFamily family_from_name(std::string_view name);

struct CurvePoint {
    int r = 0;
    double t = 0;
    double value = 0;
};

struct BoundCurve {
    BoundFamily family = BoundFamily::Chain1D;
    std::vector<CurvePoint> grid;
    std::map<std::string, double> params;

    /// Checks values are finite and non-negative and, except for Measured
    /// curves, non-decreasing in t at every r. Returns a description of the
    /// first violation, or an empty string.
    std::string validate(double tol = 1e-12) const;
};

/// Fills a curve on the r x t product grid, r-major. `workers` threads share
/// the cells; the result does not depend on the worker count.
BoundCurve evaluate_curve(BoundFamily family, const std::function<double(int, double)>& value,
                          std::span<const int> rs, std::span<const double> ts, unsigned workers = 1,
                          std::map<std::string, double> params = {});

/// CSV with header "family,r,t,value" and 17 significant digits.
std::string curve_to_csv(const BoundCurve& c);

struct Crossing {
    int r = 0;
    double t = 0;
};

struct LightConeReport {
    double epsilon = 0;
    std::vector<Crossing> crossings;
    double velocity = 0;
    double intercept = 0;
    /// Root-mean-square residual of r about the fitted line.
    double residual = 0;
    /// Number of crossings used in the fit.
    int fitted_points = 0;
};

/// Earliest threshold crossing per r by linear interpolation in t, then a
/// least-squares fit r = v t + c over the longest run of consecutive r values
/// with crossings that ends at the largest crossing r.
LightConeReport light_cone_fit(const BoundCurve& c, double epsilon);

std::string report_to_json(const LightConeReport& r);

/// Formats a double with 17 significant digits.
std::string format_real(double x);

}  // namespace lightcone

#endif
