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

#include "lightcone/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "lightcone/error.hpp"

namespace lightcone {

namespace {

constexpr std::size_t kEigenVertexLimit = 2000;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw InputError(std::string(what) + " must be finite");
    }
}

void require_non_negative(double x, const char* what) {
    require_finite(x, what);
    if (x < 0) {
        throw InputError(std::string(what) + " must be non-negative");
    }
}

// x^r / r! for x >= 0, in log space once r > 20.
double power_over_factorial(double x, int r) {
    if (r == 0) {
        return 1.0;
    }
    if (x == 0) {
        return 0.0;
    }
    if (r <= 20) {
        double v = 1.0;
        for (int k = 1; k <= r; k++) {
            v *= x / k;
        }
        return v;
    }
    return std::exp(r * std::log(x) - std::lgamma(r + 1.0));
}

// sum_{l > n} x^l / l! without forming e^x - partial sums.
double exponential_tail(double x, int n) {
    if (x == 0) {
        return 0.0;
    }
    if (x > 700) {
        return std::numeric_limits<double>::infinity();
    }
    double term = power_over_factorial(x, n + 1);
    double sum = 0;
    for (int l = n + 1;; l++) {
        sum += term;
        if (l > x && term <= sum * 1e-17) {
            break;
        }
        term *= x / (l + 1);
        if (term == 0) {
            break;
        }
    }
    return sum;
}

std::vector<char> membership(const InteractionGraph& g, std::span<const Vertex> s, const char* what) {
    std::vector<char> in(g.vertex_count(), 0);
    for (std::size_t i : g.resolve(s, what)) {
        in[i] = 1;
    }
    return in;
}

}  // namespace

Eigen::MatrixXd coupling_matrix(const InteractionGraph& g) {
    std::size_t n = g.vertex_count();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < g.edge_count(); k++) {
        auto [x, y] = g.endpoints(k);
        double w = g.edges()[k].norm;
        auto i = static_cast<Eigen::Index>(x), j = static_cast<Eigen::Index>(y);
        h(i, j) += w;
        h(j, i) += w;
        h(i, i) += w;
        h(j, j) += w;
    }
    return h;
}

std::vector<double> matrix_exp_bound(const InteractionGraph& g, std::span<const Vertex> a,
                                     std::span<const Vertex> b, std::span<const double> times) {
    auto ia = g.resolve(a, "A");
    auto ib = g.resolve(b, "B");
    for (double t : times) {
        require_finite(t, "t");
    }
    double overlap = 0;
    for (std::size_t x : ia) {
        overlap += static_cast<double>(std::count(ib.begin(), ib.end(), x));
    }
    std::vector<double> out(times.size(), overlap);
    bool nonzero_time = std::any_of(times.begin(), times.end(), [](double t) { return t != 0; });
    if (!nonzero_time) {
        return out;
    }

    Eigen::MatrixXd h = coupling_matrix(g);
    if (g.vertex_count() <= kEigenVertexLimit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        if (es.info() != Eigen::Success) {
            throw NumericError("matrix_exp_bound: eigendecomposition failed");
        }
        const Eigen::MatrixXd& v = es.eigenvectors();
        Eigen::VectorXd sa = Eigen::VectorXd::Zero(v.cols()), sb = Eigen::VectorXd::Zero(v.cols());
        for (std::size_t x : ia) {
            sa += v.row(static_cast<Eigen::Index>(x)).transpose();
        }
        for (std::size_t y : ib) {
            sb += v.row(static_cast<Eigen::Index>(y)).transpose();
        }
        for (std::size_t k = 0; k < times.size(); k++) {
            double tt = std::abs(times[k]);
            if (tt == 0) {
                continue;
            }
            double s = 0;
            for (Eigen::Index m = 0; m < v.cols(); m++) {
                s += std::exp(2 * tt * es.eigenvalues()(m)) * sa(m) * sb(m);
            }
            out[k] = std::max(0.0, s);
        }
        return out;
    }
    for (std::size_t k = 0; k < times.size(); k++) {
        double tt = std::abs(times[k]);
        if (tt == 0) {
            continue;
        }
        Eigen::MatrixXd e = (2 * tt * h).exp();
        double s = 0;
        for (std::size_t x : ia) {
            for (std::size_t y : ib) {
                s += e(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
            }
        }
        out[k] = s;
    }
    return out;
}

double matrix_exp_bound(const InteractionGraph& g, std::span<const Vertex> a, std::span<const Vertex> b, double t) {
    return matrix_exp_bound(g, a, b, std::span<const double>(&t, 1))[0];
}

PathSum path_sum_from_totals(const InteractionGraph& g, std::span<const Vertex> a,
                             const std::vector<PathTotal>& totals, double t, bool self_avoiding) {
    require_finite(t, "t");
    double x = 2 * std::abs(t);
    PathSum out;
    double coef = 1;
    for (std::size_t l = 0; l < totals.size(); l++) {
        if (l > 0) {
            coef *= x / static_cast<double>(l);
        }
        out.partial_sum += coef * totals[l].weight;
    }
    int max_length = static_cast<int>(totals.size()) - 1;

    // Self-avoiding paths pin down distinct vertices at both ends and at every
    // junction, so none is longer than |V| - 1.
    if (self_avoiding && max_length >= static_cast<int>(g.vertex_count()) - 1) {
        return out;
    }
    // Every edge touches at most 2(g-1) others: a length-l path weighs at most
    // n_A h^l (2g-2)^{l-1}, with n_A the number of edges touching A.
    double k = 2.0 * (static_cast<double>(g.max_degree()) - 1.0);
    if (k <= 0) {
        return out;  // isolated edges only: nothing longer than one edge
    }
    auto in_a = membership(g, a, "A");
    double first = 0;
    for (std::size_t e = 0; e < g.edge_count(); e++) {
        auto [p, q] = g.endpoints(e);
        if (in_a[p] || in_a[q]) {
            first += 1;
        }
    }
    out.tail_estimate = first / k * exponential_tail(x * g.max_norm() * k, max_length);
    return out;
}

PathSum path_sum_bound(const InteractionGraph& g, std::span<const Vertex> a, std::span<const Vertex> b, double t,
                       int max_length, bool self_avoiding, const PathOptions& options) {
    auto totals = enumerate_paths(g, a, b, max_length, self_avoiding, options);
    return path_sum_from_totals(g, a, totals, t, self_avoiding);
}

double chain_bound(double h, int r, double t) {
    require_non_negative(h, "h");
    require_finite(t, "t");
    if (r < 0) {
        throw InputError("chain_bound: r must be non-negative");
    }
    return power_over_factorial(2 * h * std::abs(t), r);
}

double bounded_degree_bound(int g, double h, int r, double t) {
    if (g < 2) {
        throw InputError("bounded_degree_bound: degree g must be at least 2");
    }
    require_non_negative(h, "h");
    require_finite(t, "t");
    if (r < 0) {
        throw InputError("bounded_degree_bound: r must be non-negative");
    }
    double x = 4.0 * (g - 1) * h * std::abs(t);
    double v = power_over_factorial(x, r) / (1.0 - 2.0 / std::numbers::e);
    return std::min(2.0, v);
}

double factorial_to_exponential(double c, double mu, int r, double t) {
    if (!(mu > 0) || !std::isfinite(mu)) {
        throw InputError("factorial_to_exponential: mu must be positive");
    }
    if (!(c > 0) || !std::isfinite(c)) {
        throw InputError("factorial_to_exponential: c must be positive");
    }
    if (r <= 1) {
        throw InputError("factorial_to_exponential: r must exceed 1");
    }
    require_finite(t, "t");
    double v = std::exp(mu) * c / mu;
    return std::exp(-mu * r) * std::expm1(mu * v * std::abs(t));
}

double exp_envelope(double c, double mu, double v, int boundary, int d, double t) {
    for (double x : {c, mu, v}) {
        if (!(x > 0) || !std::isfinite(x)) {
            throw InputError("exp_envelope: c, mu and v must be positive");
        }
    }
    if (boundary < 1 || d < 1) {
        throw InputError("exp_envelope: boundary and distance must be positive");
    }
    require_finite(t, "t");
    return c * boundary * std::exp(-mu * d) * std::expm1(mu * v * std::abs(t));
}

double single_particle_bound(double h, int r, double t) {
    require_non_negative(h, "h");
    require_finite(t, "t");
    if (r < 1) {
        throw InputError("single_particle_bound: r must be at least 1");
    }
    double x = 2 * std::numbers::e * h * std::abs(t) / r;
    if (x == 0) {
        return 0.0;
    }
    double scale = 1.0 - std::exp(-2.0);
    double v = r > 20 ? std::exp(r * std::log(x) - std::log(scale)) : std::pow(x, r) / scale;
    return std::min(1.0, v);
}

double qw_markov_bound(double h, int x0, double t, std::optional<double> b) {
    require_non_negative(h, "h");
    require_finite(t, "t");
    if (x0 < 1) {
        throw InputError("qw_markov_bound: x0 must be at least 1");
    }
    double ht = 4 * h * std::abs(t);
    auto exponent = [&](double bb) { return -bb * x0 + ht * std::sinh(bb / 2); };
    double e;
    if (b) {
        if (!(*b > 0) || !std::isfinite(*b)) {
            throw InputError("qw_markov_bound: b must be positive");
        }
        e = exponent(*b);
    } else {
        e = golden_section_minimize(exponent, 0.0, 50.0, 1e-8).value;
        e = std::min(e, exponent(50.0));
    }
    return std::min(1.0, std::exp(e));
}

Minimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int iter = 0; iter < 400; iter++) {
        if (b - a <= rel_tol * std::max(std::abs(c) + std::abs(d), 1e-300) / 2) {
            break;
        }
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? Minimum{c, fc} : Minimum{d, fd};
}

ButterflyVelocity butterfly_velocity_general(int degree, double h) {
    if (degree < 2) {
        throw InputError("butterfly_velocity_general: degree must be at least 2");
    }
    require_non_negative(h, "h");
    double d = degree;
    auto f = [d](double b) { return (d + std::exp(-b) + (d - 1) * std::exp(b)) / b; };
    // b^2 f'(b) is increasing in b, so f has a single interior minimum.
    Minimum m = golden_section_minimize(f, 1e-6, 20.0, 1e-10);
    return {2 * h * m.value, m.x};
}

double butterfly_velocity_1d(double h_max) {
    require_non_negative(h_max, "h_max");
    return 4 * h_max;
}

}  // namespace lightcone
