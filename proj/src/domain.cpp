/**
 * @file domain.cpp
 * @brief Graph construction, connectivity validation and BFS distances
 */

#include "gvflow/domain.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gvflow {

namespace {

void require_vertex(const DomainGraph& g, VertexId v) {
    if (!g.contains(v)) {
        throw std::invalid_argument("vertex id " + std::to_string(v) + " out of range [0, " +
                                    std::to_string(g.vertex_count()) + ")");
    }
}

} // namespace

DomainGraph DomainGraph::from_edges(int vertex_count, std::span<const Edge> edges) {
    if (vertex_count < 1) {
        throw std::invalid_argument("domain must have at least one vertex");
    }
    std::vector<std::vector<VertexId>> adjacency(static_cast<std::size_t>(vertex_count));
    for (const auto& [a, b] : edges) {
        if (a < 0 || a >= vertex_count || b < 0 || b >= vertex_count) {
            throw std::invalid_argument("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                        ") references a missing vertex");
        }
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    }
    DomainGraph g;
    g.assign(adjacency);
    return g;
}

DomainGraph DomainGraph::from_adjacency(const std::vector<std::vector<VertexId>>& adjacency) {
    const int n = static_cast<int>(adjacency.size());
    for (int a = 0; a < n; ++a) {
        for (VertexId b : adjacency[a]) {
            if (b < 0 || b >= n) {
                throw std::invalid_argument("adjacency references a missing vertex");
            }
            const auto& back = adjacency[b];
            if (std::find(back.begin(), back.end(), a) == back.end()) {
                throw std::invalid_argument("adjacency is not symmetric: " + std::to_string(a) +
                                            "~" + std::to_string(b));
            }
        }
    }
    if (n < 1) {
        throw std::invalid_argument("domain must have at least one vertex");
    }
    DomainGraph g;
    g.assign(adjacency);
    return g;
}

void DomainGraph::assign(const std::vector<std::vector<VertexId>>& adjacency) {
    const std::size_t n = adjacency.size();
    offsets_.assign(n + 1, 0);
    targets_.clear();
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<VertexId> row = adjacency[v];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        for (VertexId w : row) {
            if (w == static_cast<VertexId>(v)) {
                throw std::invalid_argument("self-loop at vertex " + std::to_string(v));
            }
            targets_.push_back(w);
        }
        offsets_[v + 1] = targets_.size();
    }

    // connectivity: every vertex reachable from 0
    const auto dist = distances_from(*this, 0);
    if (std::any_of(dist.begin(), dist.end(), [](int d) { return d < 0; })) {
        throw std::invalid_argument("domain graph is disconnected");
    }
}

bool DomainGraph::adjacent(VertexId a, VertexId b) const {
    if (!contains(a) || !contains(b)) return false;
    const auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<Edge> DomainGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (VertexId a = 0; a < vertex_count(); ++a) {
        for (VertexId b : neighbors(a)) {
            if (a < b) out.emplace_back(a, b);
        }
    }
    return out;
}

GridDomain::GridDomain(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("grid dimensions must be positive, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    }
    std::vector<std::vector<VertexId>> adjacency(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            auto& nb = adjacency[vertex(r, c)];
            if (r > 0) nb.push_back(vertex(r - 1, c));
            if (c > 0) nb.push_back(vertex(r, c - 1));
            if (c + 1 < cols) nb.push_back(vertex(r, c + 1));
            if (r + 1 < rows) nb.push_back(vertex(r + 1, c));
        }
    }
    assign(adjacency);
}

GridDomain build_grid(int rows, int cols) { return GridDomain(rows, cols); }

std::vector<int> distances_from(const DomainGraph& domain, VertexId source) {
    require_vertex(domain, source);
    std::vector<int> dist(static_cast<std::size_t>(domain.vertex_count()), -1);
    std::vector<VertexId> queue;
    queue.reserve(dist.size());
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const VertexId v = queue[head];
        for (VertexId w : domain.neighbors(v)) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

int graph_distance(const DomainGraph& domain, VertexId a, VertexId b) {
    require_vertex(domain, a);
    require_vertex(domain, b);
    if (a == b) return 0;
    return distances_from(domain, a)[b];
}

} // namespace gvflow
