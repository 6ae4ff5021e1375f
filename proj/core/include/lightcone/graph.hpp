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

#ifndef LIGHTCONE_GRAPH_HPP
#define LIGHTCONE_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lightcone {

using Vertex = int;

/// An undirected coupling between two distinct vertices. Stored with u < v.
struct Edge {
    Vertex u;
    Vertex v;
    double norm;

    bool touches(Vertex w) const { return u == w || v == w; }
    bool operator==(const Edge&) const = default;
};

/// Immutable interaction graph with a cached shortest-path metric.
///
/// Vertex identifiers are arbitrary integers. Internally every vertex also
/// has a dense index in [0, vertex_count()) following ascending id order,
/// and edges keep the order in which they were given after normalization
/// (u < v). Distances for all pairs are computed once by breadth-first
/// search at construction, so the object can be shared freely across threads.
class InteractionGraph {
   public:
    InteractionGraph() = default;
    InteractionGraph(std::vector<Vertex> vertices, std::vector<Edge> edges, std::string name = {});

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::string& name() const { return name_; }

    bool contains(Vertex v) const;
    /// Dense index of v. Throws InputError for unknown ids.
    std::size_t index_of(Vertex v) const;

    /// Indices into edges() of the edges touching the vertex with dense index i.
    const std::vector<std::size_t>& incident_edges(std::size_t i) const { return incident_[i]; }
    /// Dense indices of the endpoints of edge k.
    std::pair<std::size_t, std::size_t> endpoints(std::size_t k) const { return ends_[k]; }
    std::size_t degree(Vertex v) const { return incident_[index_of(v)].size(); }
    std::size_t max_degree() const;
    double max_norm() const;

    /// Shortest-path edge count, or nullopt when u and v are disconnected.
    std::optional<int> distance(Vertex u, Vertex v) const;
    /// min over u in A, v in B of distance(u, v).
    std::optional<int> set_distance(std::span<const Vertex> a, std::span<const Vertex> b) const;

    /// Number of edges with exactly one endpoint in s.
    std::size_t boundary_size(std::span<const Vertex> s) const;

    /// Converts a list of ids into sorted unique dense indices. Throws on empty
    /// lists or unknown ids; `what` names the argument in the message.
    std::vector<std::size_t> resolve(std::span<const Vertex> s, std::string_view what) const;

   private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::string name_;
    std::vector<std::vector<std::size_t>> incident_;
    std::vector<std::pair<std::size_t, std::size_t>> ends_;
    std::vector<int> dist_;  // row-major n*n, -1 = unreachable
};

InteractionGraph path_graph(int n, double norm = 1.0);
InteractionGraph cycle_graph(int n, double norm = 1.0);
InteractionGraph grid_graph(int nx, int ny, double norm = 1.0);
InteractionGraph complete_graph(int n, double norm = 1.0);

/// Parses {"vertices":[ids], "edges":[{"u":id,"v":id,"norm":real}]}.
InteractionGraph graph_from_json(std::string_view text);
std::string graph_to_json(const InteractionGraph& g);

/// Per-length totals produced by enumerate_paths. Counts are stored as
/// doubles because unrestricted walks outgrow 64-bit integers quickly.
struct PathTotal {
    double count = 0;
    double weight = 0;
};

struct PathOptions {
    /// Largest accepted max_length.
    int length_guard = 20;
    /// Maximum number of edge extensions explored by the self-avoiding search.
    std::uint64_t expansion_budget = 50'000'000;
};

/// Totals of edge paths from A to B for every length 0..max_length.
///
/// A path of length l is a sequence of edges whose first edge touches A, last
/// edge touches B, and consecutive edges share a vertex without being equal.
/// Length 0 contributes (1, 1) when A and B overlap. With self_avoiding set,
/// edges i and j must also be vertex-disjoint whenever |i - j| > 1, where A
/// and B act as edges 0 and l + 1.
std::vector<PathTotal> enumerate_paths(const InteractionGraph& g, std::span<const Vertex> a,
                                       std::span<const Vertex> b, int max_length,
                                       bool self_avoiding, const PathOptions& options = {});

}  // namespace lightcone

#endif
