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


#include "lightcone/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "lightcone/bounds.hpp"
#include "lightcone/error.hpp"
#include "lightcone/parallel.hpp"

namespace lightcone {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

struct SampleResult {
    std::vector<int> left;
    std::vector<int> right;
    std::vector<int> support;
};

SampleResult run_sample(const SpreadConfig& cfg, int sample) {
    int L = cfg.length;
    std::vector<Pauli> ops(static_cast<std::size_t>(L), Pauli::I);
    ops[static_cast<std::size_t>(cfg.initial_site)] = Pauli::X;
    int left = cfg.initial_site, right = cfg.initial_site, support = 1;
    SampleResult out;
    out.left.push_back(left);
    out.right.push_back(right);
    out.support.push_back(support);
    for (int step = 1; step <= cfg.depth; step++) {
        int offset = step % 2 == 1 ? 0 : 1;
        // First gate whose right site reaches the occupied range.
        int s = std::max(offset, left - 1);
        if ((s - offset) % 2 != 0) {
            s--;
        }
        s = std::max(s, offset);
        for (; s <= right && s + 1 < L; s += 2) {
            auto a = static_cast<std::size_t>(s);
            PauliPair in{ops[a], ops[a + 1]};
            if (in.left == Pauli::I && in.right == Pauli::I) {
                continue;
            }
            auto gate = static_cast<std::uint32_t>((s - offset) / 2);
            PhiloxStream rng(cfg.seed, static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(step), gate);
            PauliPair next = spread_step(in, rng);
            support += (next.left != Pauli::I) - (in.left != Pauli::I);
            support += (next.right != Pauli::I) - (in.right != Pauli::I);
            ops[a] = next.left;
            ops[a + 1] = next.right;
        }
        int lo = std::max(0, left - 1), hi = std::min(L - 1, right + 1);
        while (ops[static_cast<std::size_t>(lo)] == Pauli::I) {
            lo++;
        }
        while (ops[static_cast<std::size_t>(hi)] == Pauli::I) {
            hi--;
        }
        left = lo;
        right = hi;
        out.left.push_back(left);
        out.right.push_back(right);
        out.support.push_back(support);
    }
    return out;
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; round++) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
        std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
        auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint32_t a, std::uint32_t b, std::uint32_t c)
    : counter_{a, b, c, 0}, key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

std::uint32_t PhiloxStream::next() {
    if (used_ == 4) {
        block_ = philox4x32(counter_, key_);
        counter_[3]++;
        used_ = 0;
    }
    return block_[static_cast<std::size_t>(used_++)];
}

std::uint32_t PhiloxStream::below(std::uint32_t n) {
    if (n == 0) {
        throw InputError("PhiloxStream::below: n must be positive");
    }
    // Largest multiple of n that fits in 32 bits.
    std::uint64_t limit = (std::uint64_t{1} << 32) / n * n;
    for (;;) {
        std::uint32_t x = next();
        if (x < limit) {
            return x % n;
        }
    }
}

int pair_index(PauliPair p) {
    int code = 4 * static_cast<int>(p.left) + static_cast<int>(p.right);
    if (code == 0) {
        throw InputError("pair_index: (I, I) has no index");
    }
    return code - 1;
}

PauliPair spread_step(PauliPair in, PhiloxStream& rng) {
    if (in.left == Pauli::I && in.right == Pauli::I) {
        return in;
    }
    int code = static_cast<int>(rng.below(15)) + 1;
    return {static_cast<Pauli>(code / 4), static_cast<Pauli>(code % 4)};
}

SpreadStats run_spread(const SpreadConfig& cfg) {
    if (cfg.depth < 1 || cfg.length < 2) {
        throw InputError("run_spread: need T >= 1 and L >= 2");
    }
    if (cfg.length < 2 * cfg.depth + 2) {
        throw InputError("run_spread: L = " + std::to_string(cfg.length) + " is below 2T + 2 = " +
                         std::to_string(2 * cfg.depth + 2));
    }
    if (cfg.initial_site < cfg.depth || cfg.initial_site > cfg.length - 1 - cfg.depth) {
        throw InputError("run_spread: the initial site must be at least T sites from both ends");
    }
    if (cfg.samples < 2) {
        throw InputError("run_spread: need at least two samples");
    }
    auto n = static_cast<std::size_t>(cfg.samples);
    std::vector<SampleResult> results(n);
    parallel_for(n, cfg.workers, [&](std::size_t i) { results[i] = run_sample(cfg, static_cast<int>(i)); });

    SpreadStats stats;
    stats.config = cfg;
    auto steps = static_cast<std::size_t>(cfg.depth) + 1;
    stats.mean_front.assign(steps, 0.0);
    stats.std_front.assign(steps, 0.0);
    stats.mean_support.assign(steps, 0.0);
    stats.support_histogram.assign(static_cast<std::size_t>(cfg.length) + 1, 0);
    for (std::size_t k = 0; k < steps; k++) {
        double sum = 0, sum_support = 0;
        for (const SampleResult& r : results) {
            sum += r.right[k];
            sum_support += r.support[k];
        }
        double mean = sum / static_cast<double>(n);
        double ss = 0;
        for (const SampleResult& r : results) {
            ss += (r.right[k] - mean) * (r.right[k] - mean);
        }
        stats.mean_front[k] = mean;
        stats.std_front[k] = std::sqrt(ss / static_cast<double>(n - 1));
        stats.mean_support[k] = sum_support / static_cast<double>(n);
    }
    for (SampleResult& r : results) {
        stats.support_histogram[static_cast<std::size_t>(r.support.back())]++;
        stats.left_edge.push_back(std::move(r.left));
        stats.right_edge.push_back(std::move(r.right));
    }

    int first = cfg.depth / 2;
    if (cfg.depth - first < 1) {
        stats.v_b = stats.stderr_v_b = stats.v_b_upper99 = std::numeric_limits<double>::quiet_NaN();
        return stats;
    }
    std::vector<double> xs;
    for (int k = first; k <= cfg.depth; k++) {
        xs.push_back(k);
    }
    std::vector<double> slopes(n);
    for (std::size_t i = 0; i < n; i++) {
        std::vector<double> ys;
        for (int k = first; k <= cfg.depth; k++) {
            ys.push_back(stats.right_edge[i][static_cast<std::size_t>(k)]);
        }
        slopes[i] = slope(xs, ys);
    }
    double mean = 0;
    for (double s : slopes) {
        mean += s;
    }
    mean /= static_cast<double>(n);
    double ss = 0;
    for (double s : slopes) {
        ss += (s - mean) * (s - mean);
    }
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    stats.v_b = mean;
    stats.stderr_v_b = sd / std::sqrt(static_cast<double>(n));
    boost::math::students_t dist(static_cast<double>(n - 1));
    stats.v_b_upper99 = mean + boost::math::quantile(dist, 0.99) * stats.stderr_v_b;
    return stats;
}

std::optional<ConeViolation> strict_cone_check(const SpreadStats& stats) {
    int x0 = stats.config.initial_site;
    for (std::size_t i = 0; i < stats.right_edge.size(); i++) {
        const auto& lo = stats.left_edge[i];
        const auto& hi = stats.right_edge[i];
        for (std::size_t k = 0; k < hi.size(); k++) {
            int step = static_cast<int>(k);
            if (hi[k] > x0 + step || lo[k] < x0 - step) {
                return ConeViolation{static_cast<int>(i), step};
            }
        }
    }
    return std::nullopt;
}

std::string spread_to_csv(const SpreadStats& stats) {
    std::ostringstream out;
    out << "step,mean_front,std_front,mean_support\n";
    for (std::size_t k = 0; k < stats.mean_front.size(); k++) {
        out << k << ',' << format_real(stats.mean_front[k]) << ',' << format_real(stats.std_front[k]) << ','
            << format_real(stats.mean_support[k]) << '\n';
    }
    return out.str();
}

std::string spread_summary_json(const SpreadStats& stats) {
    nlohmann::json j;
    j["v_b"] = stats.v_b;
    j["stderr"] = stats.stderr_v_b;
    j["samples"] = stats.config.samples;
    j["seed"] = stats.config.seed;
    return j.dump(2);
}

}  // namespace lightcone
