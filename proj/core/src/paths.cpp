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

#include <string>
#include <vector>

#include "lightcone/error.hpp"
#include "lightcone/graph.hpp"

namespace lightcone {

namespace {

struct EdgeAdjacency {
    std::vector<std::vector<std::size_t>> next;  // edges sharing a vertex, excluding self
    std::size_t total = 0;
};

EdgeAdjacency build_adjacency(const InteractionGraph& g) {
    EdgeAdjacency adj;
    adj.next.resize(g.edge_count());
    for (std::size_t k = 0; k < g.edge_count(); k++) {
        auto [x, y] = g.endpoints(k);
        for (std::size_t end : {x, y}) {
            for (std::size_t j : g.incident_edges(end)) {
                if (j != k) {
                    adj.next[k].push_back(j);
                }
            }
        }
        adj.total += adj.next[k].size();
    }
    return adj;
}

class BudgetMeter {
   public:
    explicit BudgetMeter(std::uint64_t budget) : budget_(budget) {}
    void spend(std::uint64_t n) {
        used_ += n;
        if (used_ > budget_) {
            throw ResourceError("enumerate_paths: node-expansion budget expansion_budget=" +
                                std::to_string(budget_) + " exceeded");
        }
    }

   private:
    std::uint64_t budget_;
    std::uint64_t used_ = 0;
};

// Transfer over edges: w[e] holds the summed weight of all admissible
// sequences of the current length that end on e.
void unrestricted(const InteractionGraph& g, const std::vector<char>& in_a, const std::vector<char>& in_b,
                  int max_length, BudgetMeter& meter, std::vector<PathTotal>& out) {
    EdgeAdjacency adj = build_adjacency(g);
    std::size_t m = g.edge_count();
    std::vector<double> w(m, 0), c(m, 0), w2(m), c2(m);
    std::vector<char> ends_b(m, 0);
    for (std::size_t k = 0; k < m; k++) {
        auto [x, y] = g.endpoints(k);
        if (in_a[x] || in_a[y]) {
            w[k] = g.edges()[k].norm;
            c[k] = 1;
        }
        ends_b[k] = in_b[x] || in_b[y];
    }
    for (int len = 1; len <= max_length; len++) {
        for (std::size_t k = 0; k < m; k++) {
            if (ends_b[k]) {
                out[static_cast<std::size_t>(len)].count += c[k];
                out[static_cast<std::size_t>(len)].weight += w[k];
            }
        }
        if (len == max_length) {
            break;
        }
        meter.spend(adj.total + m);
        for (std::size_t k = 0; k < m; k++) {
            double sw = 0, sc = 0;
            for (std::size_t j : adj.next[k]) {
                sw += w[j];
                sc += c[j];
            }
            w2[k] = sw * g.edges()[k].norm;
            c2[k] = sc;
        }
        w.swap(w2);
        c.swap(c2);
    }
}

class SelfAvoidingSearch {
   public:
    SelfAvoidingSearch(const InteractionGraph& g, const std::vector<char>& in_a, const std::vector<char>& in_b,
                       int max_length, BudgetMeter& meter, std::vector<PathTotal>& out)
        : g_(g), adj_(build_adjacency(g)), in_b_(in_b), max_length_(max_length), meter_(meter), out_(out),
          blocked_(g.vertex_count(), 0) {
        for (std::size_t v = 0; v < g.vertex_count(); v++) {
            if (in_a[v]) {
                block(v);
            }
        }
        for (std::size_t k = 0; k < g.edge_count(); k++) {
            auto [x, y] = g.endpoints(k);
            if (in_a[x] || in_a[y]) {
                first_.push_back(k);
            }
        }
    }

    void run() {
        for (std::size_t k : first_) {
            meter_.spend(1);
            extend(k, 1, g_.edges()[k].norm);
        }
    }

   private:
    // blocked_ holds the vertices of A and of every edge before `last`.
    void extend(std::size_t last, int len, double weight) {
        auto [x, y] = g_.endpoints(last);
        if (blocked_b_ == 0 && (in_b_[x] || in_b_[y])) {
            out_[static_cast<std::size_t>(len)].count += 1;
            out_[static_cast<std::size_t>(len)].weight += weight;
        }
        if (len == max_length_) {
            return;
        }
        std::vector<std::size_t> candidates;
        for (std::size_t j : adj_.next[last]) {
            auto [p, q] = g_.endpoints(j);
            if (!blocked_[p] && !blocked_[q]) {
                candidates.push_back(j);
            }
        }
        block(x);
        block(y);
        // Once a target vertex is blocked, no extension can be recorded.
        if (blocked_b_ == 0) {
            for (std::size_t j : candidates) {
                meter_.spend(1);
                extend(j, len + 1, weight * g_.edges()[j].norm);
            }
        }
        unblock(x);
        unblock(y);
    }

    void block(std::size_t v) {
        if (blocked_[v]++ == 0 && in_b_[v]) {
            blocked_b_++;
        }
    }
    void unblock(std::size_t v) {
        if (--blocked_[v] == 0 && in_b_[v]) {
            blocked_b_--;
        }
    }

    const InteractionGraph& g_;
    EdgeAdjacency adj_;
    const std::vector<char>& in_b_;
    int max_length_;
    BudgetMeter& meter_;
    std::vector<PathTotal>& out_;
    std::vector<int> blocked_;
    int blocked_b_ = 0;
    std::vector<std::size_t> first_;
};

}  // namespace

std::vector<PathTotal> enumerate_paths(const InteractionGraph& g, std::span<const Vertex> a,
                                       std::span<const Vertex> b, int max_length, bool self_avoiding,
                                       const PathOptions& options) {
    if (max_length < 1) {
        throw InputError("enumerate_paths: max_length must be at least 1");
    }
    if (max_length > options.length_guard) {
        throw ResourceError("enumerate_paths: max_length " + std::to_string(max_length) +
                            " exceeds the explosion guard length_guard=" + std::to_string(options.length_guard));
    }
    std::vector<char> in_a(g.vertex_count(), 0), in_b(g.vertex_count(), 0);
    for (std::size_t i : g.resolve(a, "A")) {
        in_a[i] = 1;
    }
    bool overlap = false;
    for (std::size_t i : g.resolve(b, "B")) {
        in_b[i] = 1;
        overlap = overlap || in_a[i];
    }

    std::vector<PathTotal> out(static_cast<std::size_t>(max_length) + 1);
    if (overlap) {
        out[0] = {1, 1};
    }
    BudgetMeter meter(options.expansion_budget);
    if (!self_avoiding) {
        unrestricted(g, in_a, in_b, max_length, meter, out);
    } else if (!overlap) {
        // Overlapping A and B already violate the disjointness of edges 0 and
        // l + 1 for every l >= 1.
        SelfAvoidingSearch(g, in_a, in_b, max_length, meter, out).run();
    }
    return out;
}

}  // namespace lightcone
