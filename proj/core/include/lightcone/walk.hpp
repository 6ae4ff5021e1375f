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

#ifndef LIGHTCONE_WALK_HPP
#define LIGHTCONE_WALK_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lightcone/bounds.hpp"

namespace lightcone {

// A single particle hopping on the integers, H = -h sum_r (|r><r+1| + h.c.),
// started at the origin. Sites beyond +-r_max are cut off.

struct WalkState {
    double h = 0;
    double t = 0;
    int r_max = 0;
    /// Entry r + r_max holds psi(r, t).
    std::vector<std::complex<double>> amplitudes;

    std::complex<double> at(int r) const;
    double probability() const;
};

/// J_0(x) ... J_{order}(x) for x >= 0 by backward recurrence, normalized with
/// J_0 + 2 sum_k J_{2k} = 1.
std::vector<double> bessel_j(int order, double x);

/// Smallest r_max accepted for (h, t): ceil(2h|t|) + 20.
int walk_min_range(double h, double t);

/// psi(r, t) = i^r J_r(2ht). Throws InputError if r_max < walk_min_range.
WalkState walk_exact(double h, double t, int r_max);

struct StepControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    /// Right-hand-side evaluations allowed before giving up.
    std::uint64_t max_evaluations = 20'000'000;
};

/// Integrates the truncated Schrodinger equation with an adaptive
/// Runge-Kutta-Fehlberg 7(8) stepper. Throws NumericError when the budget runs
/// out or the step size collapses.
WalkState walk_ode(double h, double t, int r_max, const StepControl& control = {});

struct GapRow {
    int r = 0;
    double abs_psi = 0;
    /// 1 at r = 0, single_particle_bound otherwise.
    double bound313 = 0;
    /// sum_{x >= r} |psi(x)|^2
    double tail = 0;
    /// 1 at r = 0, qw_markov_bound(h, r, t) otherwise.
    double qw_tail_bound = 0;
};

/// One row for each r in [0, r_max], from walk_exact.
std::vector<GapRow> walk_bound_gap(double h, double t, int r_max);

/// CSV "r,abs_psi,bound313,qw_tail_bound".
std::string gap_table_to_csv(const std::vector<GapRow>& rows);

/// |psi(r, t)| on a grid as a Measured curve, ready for light_cone_fit.
BoundCurve walk_amplitude_curve(double h, std::span<const int> rs, std::span<const double> ts, unsigned workers = 1);

}  // namespace lightcone

#endif
