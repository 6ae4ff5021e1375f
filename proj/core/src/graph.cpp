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

#include "lightcone/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "lightcone/error.hpp"

namespace lightcone {

InteractionGraph::InteractionGraph(std::vector<Vertex> vertices, std::vector<Edge> edges, std::string name)
    : vertices_(std::move(vertices)), name_(std::move(name)) {
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
        throw InputError("graph: duplicate vertex id");
    }
    std::set<std::pair<Vertex, Vertex>> seen;
    edges_.reserve(edges.size());
    for (Edge e : edges) {
        if (e.u == e.v) {
            throw InputError("graph: self-loop on vertex " + std::to_string(e.u));
        }
        if (!contains(e.u) || !contains(e.v)) {
            throw InputError("graph: edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") has an undeclared endpoint");
        }
        if (!std::isfinite(e.norm) || e.norm < 0) {
            throw InputError("graph: coupling norm must be finite and non-negative");
        }
        if (e.norm == 0) {
            throw InputError("graph: zero coupling on edge (" + std::to_string(e.u) + "," +
                             std::to_string(e.v) + "); delete the edge instead");
        }
        if (e.u > e.v) {
            std::swap(e.u, e.v);
        }
        if (!seen.emplace(e.u, e.v).second) {
            throw InputError("graph: duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
        }
        edges_.push_back(e);
    }

    std::size_t n = vertices_.size();
    incident_.assign(n, {});
    for (std::size_t k = 0; k < edges_.size(); k++) {
        ends_.emplace_back(index_of(edges_[k].u), index_of(edges_[k].v));
        incident_[ends_[k].first].push_back(k);
        incident_[ends_[k].second].push_back(k);
    }

    dist_.assign(n * n, -1);
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < n; s++) {
        int* row = &dist_[s * n];
        row[s] = 0;
        queue.assign(1, s);
        while (!queue.empty()) {
            std::size_t x = queue.front();
            queue.pop_front();
            for (std::size_t k : incident_[x]) {
                std::size_t y = ends_[k].first == x ? ends_[k].second : ends_[k].first;
                if (row[y] < 0) {
                    row[y] = row[x] + 1;
                    queue.push_back(y);
                }
            }
        }
    }
}

bool InteractionGraph::contains(Vertex v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::size_t InteractionGraph::index_of(Vertex v) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || *it != v) {
        throw InputError("graph: unknown vertex " + std::to_string(v));
    }
    return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t InteractionGraph::max_degree() const {
    std::size_t g = 0;
    for (const auto& inc : incident_) {
        g = std::max(g, inc.size());
    }
    return g;
}

double InteractionGraph::max_norm() const {
    double h = 0;
    for (const Edge& e : edges_) {
        h = std::max(h, e.norm);
    }
    return h;
}

std::optional<int> InteractionGraph::distance(Vertex u, Vertex v) const {
    int d = dist_[index_of(u) * vertices_.size() + index_of(v)];
    if (d < 0) {
        return std::nullopt;
    }
    return d;
}

std::vector<std::size_t> InteractionGraph::resolve(std::span<const Vertex> s, std::string_view what) const {
    if (s.empty()) {
        throw InputError("graph: vertex set " + std::string(what) + " is empty");
    }
    std::vector<std::size_t> out;
    out.reserve(s.size());
    for (Vertex v : s) {
        out.push_back(index_of(v));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<int> InteractionGraph::set_distance(std::span<const Vertex> a, std::span<const Vertex> b) const {
    auto ia = resolve(a, "A");
    auto ib = resolve(b, "B");
    int best = -1;
    std::size_t n = vertices_.size();
    for (std::size_t x : ia) {
        for (std::size_t y : ib) {
            int d = dist_[x * n + y];
            if (d >= 0 && (best < 0 || d < best)) {
                best = d;
            }
        }
    }
    if (best < 0) {
        return std::nullopt;
    }
    return best;
}

std::size_t InteractionGraph::boundary_size(std::span<const Vertex> s) const {
    auto idx = resolve(s, "S");
    std::vector<char> in(vertices_.size(), 0);
    for (std::size_t i : idx) {
        in[i] = 1;
    }
    std::size_t count = 0;
    for (const auto& [x, y] : ends_) {
        if (in[x] != in[y]) {
            count++;
        }
    }
    return count;
}

namespace {

std::vector<Vertex> iota_vertices(int n) {
    std::vector<Vertex> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; i++) {
        v[static_cast<std::size_t>(i)] = i;
    }
    return v;
}

void require_count(int n, int minimum, const char* what) {
    if (n < minimum) {
        throw InputError(std::string(what) + ": need at least " + std::to_string(minimum) + " vertices");
    }
}

}  // namespace

InteractionGraph path_graph(int n, double norm) {
    require_count(n, 1, "path_graph");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; i++) {
        edges.push_back({i, i + 1, norm});
    }
    return InteractionGraph(iota_vertices(n), std::move(edges), "path" + std::to_string(n));
}

InteractionGraph cycle_graph(int n, double norm) {
    require_count(n, 3, "cycle_graph");
    std::vector<Edge> edges;
    for (int i = 0; i < n; i++) {
        edges.push_back({i, (i + 1) % n, norm});
    }
    return InteractionGraph(iota_vertices(n), std::move(edges), "cycle" + std::to_string(n));
}

InteractionGraph grid_graph(int nx, int ny, double norm) {
    if (nx < 1 || ny < 1) {
        throw InputError("grid_graph: dimensions must be positive");
    }
    std::vector<Edge> edges;
    for (int y = 0; y < ny; y++) {
        for (int x = 0; x < nx; x++) {
            int v = y * nx + x;
            if (x + 1 < nx) {
                edges.push_back({v, v + 1, norm});
            }
            if (y + 1 < ny) {
                edges.push_back({v, v + nx, norm});
            }
        }
    }
    return InteractionGraph(iota_vertices(nx * ny), std::move(edges),
                            "grid" + std::to_string(nx) + "x" + std::to_string(ny));
}

InteractionGraph complete_graph(int n, double norm) {
    require_count(n, 2, "complete_graph");
    std::vector<Edge> edges;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            edges.push_back({i, j, norm});
        }
    }
    return InteractionGraph(iota_vertices(n), std::move(edges), "complete" + std::to_string(n));
}

InteractionGraph graph_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("graph json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges")) {
        throw InputError("graph json: expected an object with \"vertices\" and \"edges\"");
    }
    try {
        std::vector<Vertex> vertices = j.at("vertices").get<std::vector<Vertex>>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            edges.push_back({e.at("u").get<Vertex>(), e.at("v").get<Vertex>(), e.at("norm").get<double>()});
        }
        std::string name = j.value("name", std::string{});
        return InteractionGraph(std::move(vertices), std::move(edges), std::move(name));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("graph json: ") + e.what());
    }
}

std::string graph_to_json(const InteractionGraph& g) {
    nlohmann::json j;
    j["vertices"] = g.vertices();
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : g.edges()) {
        j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"norm", e.norm}});
    }
    if (!g.name().empty()) {
        j["name"] = g.name();
    }
    return j.dump();
}

}  // namespace lightcone
