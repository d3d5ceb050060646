/**
 * @file domain.hpp
 * @brief Discrete domains: connected graphs and 4-connected grids
 *
 * A domain is an undirected, loop-free, connected graph stored in
 * compressed adjacency form. Grids are the special case where
 * (i,j)~(i',j') iff |i-i'| + |j-j'| = 1, matching the 5-point stencil.
 */

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gvflow/field.hpp"

namespace gvflow {

using VertexId = int;
using Edge = std::pair<VertexId, VertexId>;

class DomainGraph {
public:
    /// Builds from an undirected edge list. Duplicate edges are merged.
    /// Throws std::invalid_argument on self-loops, out-of-range ids,
    /// an empty vertex set, or a disconnected graph.
    static DomainGraph from_edges(int vertex_count, std::span<const Edge> edges);

    /// Builds from per-vertex neighbor lists, which must be symmetric.
    static DomainGraph from_adjacency(const std::vector<std::vector<VertexId>>& adjacency);

    int vertex_count() const { return static_cast<int>(offsets_.size()) - 1; }
    std::size_t edge_count() const { return targets_.size() / 2; }
    bool contains(VertexId v) const { return v >= 0 && v < vertex_count(); }
    bool adjacent(VertexId a, VertexId b) const;

    std::span<const VertexId> neighbors(VertexId v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }

    /// Every edge once, as (smaller id, larger id), in ascending order.
    std::vector<Edge> edges() const;

protected:
    DomainGraph() = default;
    void assign(const std::vector<std::vector<VertexId>>& adjacency);

private:
    std::vector<std::size_t> offsets_;
    std::vector<VertexId> targets_;
};

/// Rectangular grid with fixed 4-neighbor connectivity; vertex id = row*cols + col.
class GridDomain : public DomainGraph {
public:
    GridDomain(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    VertexId vertex(int row, int col) const { return row * cols_ + col; }
    VertexId vertex(CellIndex c) const { return vertex(c.row, c.col); }
    CellIndex cell(VertexId v) const { return {v / cols_, v % cols_}; }
    bool contains_cell(CellIndex c) const {
        return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_;
    }

private:
    int rows_;
    int cols_;
};

/// Throws std::invalid_argument when either dimension is < 1.
GridDomain build_grid(int rows, int cols);

/// Shortest-path length (edge count) between a and b.
int graph_distance(const DomainGraph& domain, VertexId a, VertexId b);

/// Breadth-first distances from `source` to every vertex.
std::vector<int> distances_from(const DomainGraph& domain, VertexId source);

} // namespace gvflow
