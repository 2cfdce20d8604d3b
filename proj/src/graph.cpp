#include "prefattach/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace prefattach {

Graph::Graph(std::size_t vertex_count)
    : adjacency_(vertex_count), degrees_(vertex_count, 0) {}

bool Graph::has_edge(VertexId u, VertexId v) const {
    if (u >= vertex_count() || v >= vertex_count()) {
        return false;
    }
    // Scan the shorter list.
    const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
    const VertexId other = &a == &adjacency_[u] ? v : u;
    return std::find(a.begin(), a.end(), other) != a.end();
}

void Graph::add_edge(VertexId u, VertexId v) {
    if (u >= vertex_count() || v >= vertex_count()) {
        throw std::invalid_argument("edge endpoint out of range");
    }
    if (u == v) {
        throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
    }
    if (has_edge(u, v)) {
        throw std::invalid_argument("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
    }
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
    ++degrees_[u];
    ++degrees_[v];
    ++edge_count_;
}

VertexId Graph::add_newborn(std::span<const VertexId> targets) {
    const auto existing = vertex_count();
    for (std::size_t a = 0; a < targets.size(); ++a) {
        if (targets[a] >= existing) {
            throw std::invalid_argument("target " + std::to_string(targets[a]) +
                                        " is not an existing vertex");
        }
        for (std::size_t b = a + 1; b < targets.size(); ++b) {
            if (targets[a] == targets[b]) {
                throw std::invalid_argument("duplicate target " + std::to_string(targets[a]));
            }
        }
    }
    const auto newborn = static_cast<VertexId>(existing);
    adjacency_.emplace_back(targets.begin(), targets.end());
    degrees_.push_back(static_cast<std::uint32_t>(targets.size()));
    for (VertexId t : targets) {
        adjacency_[t].push_back(newborn);
        ++degrees_[t];
    }
    edge_count_ += targets.size();
    return newborn;
}

std::vector<std::pair<VertexId, VertexId>> Graph::edge_list() const {
    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(edge_count_);
    for (VertexId u = 0; u < vertex_count(); ++u) {
        for (VertexId v : adjacency_[u]) {
            if (u < v) {
                edges.emplace_back(u, v);
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

Graph complete_graph(std::size_t k) {
    if (k == 0) {
        throw std::invalid_argument("complete_graph needs at least one vertex");
    }
    Graph g(k);
    for (VertexId u = 0; u < k; ++u) {
        for (VertexId v = u + 1; v < k; ++v) {
            g.add_edge(u, v);
        }
    }
    return g;
}

Graph wheel_minus_arc(std::size_t t, WheelCenter center) {
    if (t < 4) {
        throw std::invalid_argument("wheel_minus_arc needs t >= 4");
    }
    Graph g = complete_graph(2);
    const VertexId hub = center == WheelCenter::FirstBorn ? 0 : 1;
    for (VertexId i = 2; i < t; ++i) {
        const VertexId previous = i - 1;
        const VertexId targets[2] = {hub, previous == hub ? VertexId{0} : previous};
        g.add_newborn(targets);
    }
    return g;
}

double WeightedProjection::weight(VertexId i, VertexId j) const {
    if (i == j) {
        return 0.0;
    }
    if (i > j) {
        std::swap(i, j);
    }
    auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{i, j},
                               [](const ProjectionEntry& e, const std::pair<VertexId, VertexId>& key) {
                                   return std::pair{e.i, e.j} < key;
                               });
    if (it != entries.end() && it->i == i && it->j == j) {
        return it->weight();
    }
    return 0.0;
}

WeightedProjection jaccard_projection(const Graph& g) {
    if (g.vertex_count() < 2) {
        throw std::invalid_argument("jaccard_projection needs at least two vertices");
    }
    // A pair has a nonzero index iff it shares a neighbor, so count shared
    // neighbors through every vertex's neighbor pairs.
    std::unordered_map<std::uint64_t, std::uint32_t> shared;
    for (VertexId w = 0; w < g.vertex_count(); ++w) {
        const auto nbrs = g.neighbors(w);
        for (std::size_t a = 0; a < nbrs.size(); ++a) {
            for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
                auto x = nbrs[a];
                auto y = nbrs[b];
                if (x > y) {
                    std::swap(x, y);
                }
                ++shared[(static_cast<std::uint64_t>(x) << 32) | y];
            }
        }
    }
    WeightedProjection projection;
    projection.vertex_count = g.vertex_count();
    projection.entries.reserve(shared.size());
    for (const auto& [key, count] : shared) {
        const auto i = static_cast<VertexId>(key >> 32);
        const auto j = static_cast<VertexId>(key & 0xffffffffu);
        projection.entries.push_back({i, j, count, g.degree(i) + g.degree(j) - count});
    }
    std::sort(projection.entries.begin(), projection.entries.end(),
              [](const ProjectionEntry& a, const ProjectionEntry& b) {
                  return std::pair{a.i, a.j} < std::pair{b.i, b.j};
              });
    return projection;
}

void write_edge_list(std::ostream& out, const Graph& g) {
    for (const auto& [u, v] : g.edge_list()) {
        out << u << ' ' << v << '\n';
    }
}

void write_projection_csv(std::ostream& out, const WeightedProjection& projection) {
    out << "i,j,weight\n";
    char buffer[64];
    for (const auto& entry : projection.entries) {
        std::snprintf(buffer, sizeof buffer, "%.15g", entry.weight());
        out << entry.i << ',' << entry.j << ',' << buffer << '\n';
    }
}

}  // namespace prefattach
