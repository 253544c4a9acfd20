#include "talos/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include "talos/errors.hpp"

namespace talos {

Graph Graph::from_edges(int node_count, const std::vector<Edge>& pairs) {
    if (node_count < 0) throw DataError("negative node count");
    std::set<Edge> canon;
    for (const auto& [u, v] : pairs) {
        if (u < 0 || v < 0 || u >= node_count || v >= node_count)
            throw DataError("edge endpoint out of range: (" + std::to_string(u) + ", " +
                            std::to_string(v) + ") with node_count " + std::to_string(node_count));
        if (u == v) continue;  // self-loop dropped
        canon.insert(canonical_edge(u, v));
    }
    Graph g;
    g.node_count_ = node_count;
    g.edges_.assign(canon.begin(), canon.end());
    g.build_csr();
    return g;
}

void Graph::build_csr() {
    offsets_.assign(node_count_ + 1, 0);
    for (const auto& [u, v] : edges_) {
        ++offsets_[u + 1];
        ++offsets_[v + 1];
    }
    for (int i = 0; i < node_count_; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(2 * edges_.size());
    std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [u, v] : edges_) {
        adjacency_[cursor[u]++] = v;
        adjacency_[cursor[v]++] = u;
    }
    for (int i = 0; i < node_count_; ++i)
        std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
}

std::span<const int> Graph::neighbors(int u) const {
    return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
}

int Graph::degree(int u) const { return offsets_[u + 1] - offsets_[u]; }

int Graph::max_degree() const {
    int d = 0;
    for (int u = 0; u < node_count_; ++u) d = std::max(d, degree(u));
    return d;
}

bool Graph::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= node_count_ || v >= node_count_ || u == v) return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

Graph Graph::remove_edges(const std::vector<Edge>& to_remove) const {
    std::set<Edge> gone;
    for (const auto& [u, v] : to_remove) {
        Edge e = canonical_edge(u, v);
        if (!std::binary_search(edges_.begin(), edges_.end(), e))
            throw DataError("cannot remove absent edge (" + std::to_string(e.first) + ", " +
                            std::to_string(e.second) + ")");
        gone.insert(e);
    }
    Graph g;
    g.node_count_ = node_count_;
    g.edges_.reserve(edges_.size() - gone.size());
    for (const auto& e : edges_)
        if (!gone.count(e)) g.edges_.push_back(e);
    g.build_csr();
    return g;
}

Graph Graph::add_edges(const std::vector<Edge>& to_add) const {
    std::set<Edge> fresh;
    for (const auto& [u, v] : to_add) {
        if (u == v) throw DataError("cannot add self-loop at node " + std::to_string(u));
        if (u < 0 || v < 0 || u >= node_count_ || v >= node_count_)
            throw DataError("edge endpoint out of range in add_edges");
        Edge e = canonical_edge(u, v);
        if (std::binary_search(edges_.begin(), edges_.end(), e) || fresh.count(e))
            throw DataError("cannot add existing edge (" + std::to_string(e.first) + ", " +
                            std::to_string(e.second) + ")");
        fresh.insert(e);
    }
    Graph g;
    g.node_count_ = node_count_;
    g.edges_ = edges_;
    g.edges_.insert(g.edges_.end(), fresh.begin(), fresh.end());
    std::sort(g.edges_.begin(), g.edges_.end());
    g.build_csr();
    return g;
}

std::vector<std::vector<int>> Graph::connected_components() const {
    std::vector<std::vector<int>> comps;
    std::vector<char> seen(node_count_, 0);
    for (int s = 0; s < node_count_; ++s) {
        if (seen[s]) continue;
        std::vector<int> comp;
        std::queue<int> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            comp.push_back(u);
            for (int v : neighbors(u))
                if (!seen[v]) {
                    seen[v] = 1;
                    q.push(v);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

}  // namespace talos
