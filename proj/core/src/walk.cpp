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


#include "lightcone/walk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "lightcone/error.hpp"
#include "lightcone/parallel.hpp"

namespace lightcone {

namespace {

using Amplitudes = std::vector<std::complex<double>>;

void check_walk_args(double h, double t, int r_max, const char* what) {
    if (!(h >= 0) || !std::isfinite(h)) {
        throw InputError(std::string(what) + ": h must be finite and non-negative");
    }
    if (!(t >= 0) || !std::isfinite(t)) {
        throw InputError(std::string(what) + ": t must be finite and non-negative");
    }
    int need = walk_min_range(h, t);
    if (r_max < need) {
        throw InputError(std::string(what) + ": r_max = " + std::to_string(r_max) + " is below ceil(2ht) + 20 = " +
                         std::to_string(need));
    }
}

std::complex<double> i_power(int r) {
    switch (((r % 4) + 4) % 4) {
        case 0:
            return {1, 0};
        case 1:
            return {0, 1};
        case 2:
            return {-1, 0};
        default:
            return {0, -1};
    }
}

struct BudgetExceeded {};

}  // namespace

std::complex<double> WalkState::at(int r) const {
    if (r < -r_max || r > r_max) {
        return {0, 0};
    }
    return amplitudes[static_cast<std::size_t>(r + r_max)];
}

double WalkState::probability() const {
    double p = 0;
    for (const auto& a : amplitudes) {
        p += std::norm(a);
    }
    return p;
}

std::vector<double> bessel_j(int order, double x) {
    if (order < 0) {
        throw InputError("bessel_j: order must be non-negative");
    }
    if (!(x >= 0) || !std::isfinite(x)) {
        throw InputError("bessel_j: x must be finite and non-negative");
    }
    std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
    if (x == 0) {
        out[0] = 1;
        return out;
    }
    double top = std::max<double>(order, std::ceil(x));
    int start = static_cast<int>(top + 30 + std::ceil(std::sqrt(160 * std::max(top, 1.0))));
    start += start % 2;
    std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
    j[static_cast<std::size_t>(start)] = 1e-30;
    for (int k = start; k >= 1; k--) {
        auto uk = static_cast<std::size_t>(k);
        j[uk - 1] = 2.0 * k / x * j[uk] - j[uk + 1];
        if (std::abs(j[uk - 1]) > 1e250) {
            for (std::size_t m = uk - 1; m < j.size(); m++) {
                j[m] *= 1e-250;
            }
        }
    }
    double norm = j[0];
    for (int k = 2; k <= start; k += 2) {
        norm += 2 * j[static_cast<std::size_t>(k)];
    }
    for (int k = 0; k <= order; k++) {
        out[static_cast<std::size_t>(k)] = j[static_cast<std::size_t>(k)] / norm;
    }
    return out;
}

int walk_min_range(double h, double t) {
    return static_cast<int>(std::ceil(2 * h * std::abs(t))) + 20;
}

WalkState walk_exact(double h, double t, int r_max) {
    check_walk_args(h, t, r_max, "walk_exact");
    std::vector<double> j = bessel_j(r_max, 2 * h * t);
    WalkState s{h, t, r_max, Amplitudes(2 * static_cast<std::size_t>(r_max) + 1)};
    for (int r = 0; r <= r_max; r++) {
        // J_{-r} = (-1)^r J_r makes psi(-r) = psi(r).
        std::complex<double> v = i_power(r) * j[static_cast<std::size_t>(r)];
        s.amplitudes[static_cast<std::size_t>(r_max + r)] = v;
        s.amplitudes[static_cast<std::size_t>(r_max - r)] = v;
    }
    return s;
}

WalkState walk_ode(double h, double t, int r_max, const StepControl& control) {
    check_walk_args(h, t, r_max, "walk_ode");
    if (!(control.abs_tol > 0) || !(control.rel_tol >= 0)) {
        throw InputError("walk_ode: tolerances must be positive");
    }
    std::size_t size = 2 * static_cast<std::size_t>(r_max) + 1;
    Amplitudes psi(size, {0, 0});
    psi[static_cast<std::size_t>(r_max)] = 1;
    WalkState s{h, t, r_max, psi};
    if (t == 0 || h == 0) {
        return s;
    }
    std::uint64_t calls = 0;
    const std::complex<double> ih(0, h);
    auto rhs = [&](const Amplitudes& x, Amplitudes& dx, double) {
        if (++calls > control.max_evaluations) {
            throw BudgetExceeded{};
        }
        for (std::size_t k = 0; k < size; k++) {
            std::complex<double> sum = 0;
            if (k > 0) {
                sum += x[k - 1];
            }
            if (k + 1 < size) {
                sum += x[k + 1];
            }
            dx[k] = ih * sum;
        }
    };
    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled(control.abs_tol, control.rel_tol, ode::runge_kutta_fehlberg78<Amplitudes>());
    try {
        ode::integrate_adaptive(stepper, rhs, s.amplitudes, 0.0, t, std::min(t, 0.01 / h));
    } catch (const BudgetExceeded&) {
        throw NumericError("walk_ode: tolerance not reached within " + std::to_string(control.max_evaluations) +
                           " right-hand-side evaluations");
    } catch (const ode::odeint_error& e) {
        throw NumericError(std::string("walk_ode: ") + e.what());
    }
    return s;
}

std::vector<GapRow> walk_bound_gap(double h, double t, int r_max) {
    WalkState s = walk_exact(h, t, r_max);
    std::vector<GapRow> rows(static_cast<std::size_t>(r_max) + 1);
    double tail = 0;
    for (int r = r_max; r >= 0; r--) {
        GapRow& row = rows[static_cast<std::size_t>(r)];
        row.r = r;
        row.abs_psi = std::abs(s.at(r));
        tail += std::norm(s.at(r));
        row.tail = tail;
        row.bound313 = r == 0 ? 1.0 : single_particle_bound(h, r, t);
        row.qw_tail_bound = r == 0 ? 1.0 : qw_markov_bound(h, r, t);
    }
    return rows;
}

std::string gap_table_to_csv(const std::vector<GapRow>& rows) {
    std::ostringstream out;
    out << "r,abs_psi,bound313,qw_tail_bound\n";
    for (const GapRow& row : rows) {
        out << row.r << ',' << format_real(row.abs_psi) << ',' << format_real(row.bound313) << ','
            << format_real(row.qw_tail_bound) << '\n';
    }
    return out.str();
}

BoundCurve walk_amplitude_curve(double h, std::span<const int> rs, std::span<const double> ts, unsigned workers) {
    if (rs.empty() || ts.empty()) {
        throw InputError("walk_amplitude_curve: empty grid");
    }
    int r_top = 0;
    for (int r : rs) {
        if (r < 0) {
            throw InputError("walk_amplitude_curve: r must be non-negative");
        }
        r_top = std::max(r_top, r);
    }
    double t_top = 0;
    for (double t : ts) {
        if (!(t >= 0) || !std::isfinite(t)) {
            throw InputError("walk_amplitude_curve: t must be finite and non-negative");
        }
        t_top = std::max(t_top, t);
    }
    int r_max = std::max(r_top, walk_min_range(h, t_top));
    std::vector<std::vector<double>> by_time(ts.size());
    parallel_for(ts.size(), workers, [&](std::size_t k) {
        WalkState s = walk_exact(h, ts[k], r_max);
        for (int r : rs) {
            by_time[k].push_back(std::abs(s.at(r)));
        }
    });
    BoundCurve c;
    c.family = BoundFamily::Measured;
    c.params = {{"h", h}};
    for (std::size_t i = 0; i < rs.size(); i++) {
        for (std::size_t k = 0; k < ts.size(); k++) {
            c.grid.push_back({rs[i], ts[k], by_time[k][i]});
        }
    }
    return c;
}

}  // namespace lightcone
