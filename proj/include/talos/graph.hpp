#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace talos {

using Edge = std::pair<int, int>;

/// Undirected simple graph stored as a sorted edge list (u < v) plus a CSR
/// adjacency built from both directions. Immutable after construction;
/// mutating operations return a new Graph.
class Graph {
public:
    Graph() = default;

    /// Builds from raw (possibly dirty) pairs: symmetrizes, deduplicates,
    /// drops self-loops. Throws DataError on out-of-range endpoints.
    static Graph from_edges(int node_count, const std::vector<Edge>& pairs);

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    std::span<const int> neighbors(int u) const;
    int degree(int u) const;
    int max_degree() const;
    bool has_edge(int u, int v) const;

    /// Removes listed edges; every listed edge must exist.
    Graph remove_edges(const std::vector<Edge>& to_remove) const;
    /// Adds listed edges; every listed pair must be a non-edge, no self-loops.
    Graph add_edges(const std::vector<Edge>& to_add) const;

    /// Connected components as sorted node lists, ordered by smallest
    /// contained node index.
    std::vector<std::vector<int>> connected_components() const;

    bool operator==(const Graph&) const = default;

private:
    void build_csr();

    int node_count_ = 0;
    std::vector<Edge> edges_;        // canonical: u < v, sorted
    std::vector<int> offsets_;       // CSR, size node_count_+1
    std::vector<int> adjacency_;     // sorted neighbor lists
};

inline Edge canonical_edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

}  // namespace talos
