#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace prefattach {

// Vertex ids are birth order, starting at 0.
using VertexId = std::uint32_t;

// Simple undirected graph (no loops, no parallel edges) with degree
// bookkeeping. Grows by appending vertices.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t vertex_count);

    std::size_t vertex_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }
    std::uint32_t degree(VertexId v) const { return degrees_.at(v); }
    std::uint64_t degree_total() const noexcept { return 2 * static_cast<std::uint64_t>(edge_count_); }

    // Neighbors in insertion order.
    std::span<const VertexId> neighbors(VertexId v) const { return adjacency_.at(v); }
    bool has_edge(VertexId u, VertexId v) const;

    // Throws std::invalid_argument on loops, duplicates or unknown ids.
    void add_edge(VertexId u, VertexId v);

    // Appends a vertex linked to every target; returns its id. Targets must
    // be distinct existing vertices.
    VertexId add_newborn(std::span<const VertexId> targets);

    // Every edge once as (u, v) with u < v, sorted lexicographically.
    std::vector<std::pair<VertexId, VertexId>> edge_list() const;

    friend bool operator==(const Graph& lhs, const Graph& rhs) = default;

private:
    std::vector<std::vector<VertexId>> adjacency_;
    std::vector<std::uint32_t> degrees_;
    std::size_t edge_count_ = 0;
};

// K_k on ids 0..k-1.
Graph complete_graph(std::size_t k);

// Which vertex of the initial K2 becomes the hub of the wheel.
enum class WheelCenter { FirstBorn, SecondBorn };

// Wheel graph on t vertices with one rim edge missing, grown with m = 2 from
// K2 by linking each newborn to the hub and to the previous newborn.
// FirstBorn: newborn i >= 2 links to {0, i-1}; hub is vertex 0.
// SecondBorn: newborn 2 links to {0, 1}, newborn i >= 3 to {1, i-1}; hub is
// vertex 1 and vertex 0 is a degree-2 rim end.
Graph wheel_minus_arc(std::size_t t, WheelCenter center = WheelCenter::FirstBorn);

// Jaccard index of the open neighborhoods of i < j, stored as the exact
// ratio shared / combined.
struct ProjectionEntry {
    VertexId i = 0;
    VertexId j = 0;
    std::uint32_t shared = 0;
    std::uint32_t combined = 0;

    double weight() const noexcept {
        return combined == 0 ? 0.0 : static_cast<double>(shared) / combined;
    }
};

// Only pairs with a nonzero weight are stored, sorted by (i, j).
struct WeightedProjection {
    std::size_t vertex_count = 0;
    std::vector<ProjectionEntry> entries;

    // Symmetric lookup; 0 for absent pairs and for i == j.
    double weight(VertexId i, VertexId j) const;
};

WeightedProjection jaccard_projection(const Graph& g);

// "u v" per line, u < v, sorted.
void write_edge_list(std::ostream& out, const Graph& g);

// "i,j,weight" CSV, rows sorted by (i, j), zero weights omitted.
void write_projection_csv(std::ostream& out, const WeightedProjection& projection);

}  // namespace prefattach
