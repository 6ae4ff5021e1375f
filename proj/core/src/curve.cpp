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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "lightcone/bounds.hpp"
#include "lightcone/error.hpp"
#include "lightcone/parallel.hpp"

namespace lightcone {

namespace {

constexpr std::array<std::pair<BoundFamily, std::string_view>, 9> kFamilyNames{{
    {BoundFamily::MatrixExp, "matrix_exp"},
    {BoundFamily::PathSum, "path_sum"},
    {BoundFamily::SelfAvoiding, "self_avoiding"},
    {BoundFamily::Chain1D, "chain_1d"},
    {BoundFamily::BoundedDegree, "bounded_degree"},
    {BoundFamily::ExpEnvelope, "exp_envelope"},
    {BoundFamily::SingleParticle, "single_particle"},
    {BoundFamily::QWMarkov, "qw_markov"},
    {BoundFamily::Measured, "measured"},
}};

}  // namespace

std::string_view family_name(BoundFamily f) {
    for (const auto& [fam, name] : kFamilyNames) {
        if (fam == f) {
            return name;
        }
    }
    return "unknown";
}

BoundFamily family_from_name(std::string_view name) {
    for (const auto& [fam, n] : kFamilyNames) {
        if (n == name) {
            return fam;
        }
    }
    throw InputError("unknown bound family '" + std::string(name) + "'");
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string BoundCurve::validate(double tol) const {
    std::map<int, std::vector<std::pair<double, double>>> rows;
    for (const CurvePoint& p : grid) {
        if (!std::isfinite(p.value) || p.value < 0) {
            return "value at r=" + std::to_string(p.r) + ", t=" + format_real(p.t) + " is negative or not finite";
        }
        rows[p.r].emplace_back(p.t, p.value);
    }
    if (family == BoundFamily::Measured) {
        return {};
    }
    for (auto& [r, pts] : rows) {
        std::sort(pts.begin(), pts.end());
        for (std::size_t i = 1; i < pts.size(); i++) {
            if (pts[i].second < pts[i - 1].second - tol * std::max(1.0, std::abs(pts[i - 1].second))) {
                return "value decreases in t at r=" + std::to_string(r) + " between t=" + format_real(pts[i - 1].first) +
                       " and t=" + format_real(pts[i].first);
            }
        }
    }
    return {};
}

BoundCurve evaluate_curve(BoundFamily family, const std::function<double(int, double)>& value,
                          std::span<const int> rs, std::span<const double> ts, unsigned workers,
                          std::map<std::string, double> params) {
    BoundCurve c;
    c.family = family;
    c.params = std::move(params);
    c.grid.resize(rs.size() * ts.size());
    parallel_for(c.grid.size(), workers, [&](std::size_t k) {
        int r = rs[k / ts.size()];
        double t = ts[k % ts.size()];
        c.grid[k] = {r, t, value(r, t)};
    });
    return c;
}

std::string curve_to_csv(const BoundCurve& c) {
    std::ostringstream out;
    out << "family,r,t,value\n";
    std::string_view name = family_name(c.family);
    for (const CurvePoint& p : c.grid) {
        out << name << ',' << p.r << ',' << format_real(p.t) << ',' << format_real(p.value) << '\n';
    }
    return out.str();
}

LightConeReport light_cone_fit(const BoundCurve& c, double epsilon) {
    if (!(epsilon > 0 && epsilon <= 1)) {
        throw InputError("light_cone_fit: epsilon must lie in (0, 1]");
    }
    std::map<int, std::vector<std::pair<double, double>>> rows;
    for (const CurvePoint& p : c.grid) {
        rows[p.r].emplace_back(p.t, p.value);
    }
    LightConeReport rep;
    rep.epsilon = epsilon;
    std::vector<int> all_r;
    std::map<int, double> crossing;
    for (auto& [r, pts] : rows) {
        all_r.push_back(r);
        std::sort(pts.begin(), pts.end());
        for (std::size_t i = 0; i < pts.size(); i++) {
            if (pts[i].second < epsilon) {
                continue;
            }
            double t = pts[i].first;
            if (i > 0) {
                auto [t0, v0] = pts[i - 1];
                auto [t1, v1] = pts[i];
                t = t0 + (epsilon - v0) / (v1 - v0) * (t1 - t0);
            }
            crossing[r] = t;
            rep.crossings.push_back({r, t});
            break;
        }
    }

    // Longest run of consecutive r values with crossings ending at the
    // largest crossing r.
    auto last = std::find_if(all_r.rbegin(), all_r.rend(), [&](int r) { return crossing.count(r) > 0; });
    std::vector<std::pair<double, double>> pts;  // (t, r)
    for (auto it = last; it != all_r.rend() && crossing.count(*it); ++it) {
        pts.emplace_back(crossing[*it], *it);
    }
    if (pts.size() < 3) {
        throw FitError("light_cone_fit: only " + std::to_string(pts.size()) +
                       " distances with crossings, need at least 3");
    }
    double n = static_cast<double>(pts.size());
    double st = 0, sr = 0;
    for (auto [t, r] : pts) {
        st += t;
        sr += r;
    }
    double mt = st / n, mr = sr / n;
    double stt = 0, str = 0;
    for (auto [t, r] : pts) {
        stt += (t - mt) * (t - mt);
        str += (t - mt) * (r - mr);
    }
    if (!(stt > 0)) {
        throw FitError("light_cone_fit: all crossing times coincide");
    }
    rep.velocity = str / stt;
    rep.intercept = mr - rep.velocity * mt;
    double ss = 0;
    for (auto [t, r] : pts) {
        double e = r - (rep.velocity * t + rep.intercept);
        ss += e * e;
    }
    rep.residual = std::sqrt(ss / n);
    rep.fitted_points = static_cast<int>(pts.size());
    return rep;
}

std::string report_to_json(const LightConeReport& r) {
    nlohmann::json j;
    j["epsilon"] = r.epsilon;
    j["crossings"] = nlohmann::json::array();
    for (const Crossing& c : r.crossings) {
        j["crossings"].push_back({{"r", c.r}, {"t", c.t}});
    }
    j["velocity"] = r.velocity;
    j["intercept"] = r.intercept;
    j["residual"] = r.residual;
    j["fitted_points"] = r.fitted_points;
    return j.dump(2);
}

}  // namespace lightcone
