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


#ifndef LIGHTCONE_CIRCUIT_HPP
#define LIGHTCONE_CIRCUIT_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lightcone/pauli.hpp"

namespace lightcone {

/// Philox4x32-10 counter-based generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// A stream of 32-bit draws for one (seed, a, b, c) tuple. The fourth counter
/// word numbers the blocks of four outputs.
class PhiloxStream {
   public:
    PhiloxStream(std::uint64_t seed, std::uint32_t a, std::uint32_t b, std::uint32_t c);
    std::uint32_t next();
    /// Uniform on [0, n) by rejection, so every value is exactly equally likely.
    std::uint32_t below(std::uint32_t n);

   private:
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
};

struct PauliPair {
    Pauli left = Pauli::I;
    Pauli right = Pauli::I;
    bool operator==(const PauliPair&) const = default;
};

/// One Haar-random two-site gate acting on a Pauli pair: (I, I) is kept and
/// anything else goes to one of the 15 non-identity pairs with equal odds.
PauliPair spread_step(PauliPair in, PhiloxStream& rng);

/// Index 0..14 of a non-identity pair, ordered IX, IY, IZ, XI, XX, ..., ZZ.
int pair_index(PauliPair p);

struct SpreadConfig {
    int length = 0;
    int depth = 0;
    int initial_site = 0;
    int samples = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct SpreadStats {
    SpreadConfig config;
    /// Per step 0..T, over samples. The front is the rightmost non-identity site.
    std::vector<double> mean_front;
    std::vector<double> std_front;
    std::vector<double> mean_support;
    /// Support sizes at the final step; entry k counts samples with |support| = k.
    std::vector<std::uint64_t> support_histogram;
    /// Leftmost and rightmost occupied site, indexed [sample][step].
    std::vector<std::vector<int>> left_edge;
    std::vector<std::vector<int>> right_edge;
    /// Mean over samples of the least-squares front slope on steps [T/2, T].
    double v_b = 0;
    double stderr_v_b = 0;
    /// One-sided 99% upper confidence limit, v_b + t_{0.99, n-1} stderr.
    double v_b_upper99 = 0;
};

/// Brickwork circuit on sites 0..L-1 started from X on initial_site. Layer 1
/// gates (0,1), (2,3), ...; layer 2 gates (1,2), (3,4), ...; and so on with
/// open boundaries. Requires L >= 2T + 2, the initial site at least T sites
/// from either end, and at least two samples. Results depend only on the
/// config, not on the worker count.
SpreadStats run_spread(const SpreadConfig& config);

struct ConeViolation {
    int sample = 0;
    int step = 0;
};

/// The first sample and step whose support leaves [x0 - step, x0 + step], or
/// nothing when every trajectory stays inside the cone.
std::optional<ConeViolation> strict_cone_check(const SpreadStats& stats);

/// CSV "step,mean_front,std_front,mean_support".
std::string spread_to_csv(const SpreadStats& stats);
/// {"v_b":..., "stderr":..., "samples":..., "seed":...}
std::string spread_summary_json(const SpreadStats& stats);

}  // namespace lightcone

#endif
