#include "talos/similarity.hpp"

#include <algorithm>
#include <set>

#include "talos/errors.hpp"

namespace talos {

double jaccard_pair(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    if (a.size() != b.size()) throw DataError("jaccard_pair: dimension mismatch");
    int inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        bool x = a[i] != 0, y = b[i] != 0;
        inter += x && y;
        uni += x || y;
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

double jaccard_pair(const FeatureMatrix& f, int i, int j) {
    int uni = f.union_count(i, j);
    return uni == 0 ? 0.0 : static_cast<double>(f.intersection_count(i, j)) / uni;
}

DenseMatrix jaccard_matrix(const FeatureMatrix& f) {
    int n = f.node_count();
    DenseMatrix j = DenseMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double v = jaccard_pair(f, a, b);
            j(a, b) = v;
            j(b, a) = v;
        }
    return j;
}

PurifyOutcome jaccard_threshold_purify(const Dataset& d, double threshold) {
    if (threshold < 0 || threshold > 1)
        throw ConfigError("jaccard threshold must be in [0, 1]");
    PurifyOutcome out;
    for (const auto& [u, v] : d.graph.edges())
        if (jaccard_pair(d.features, u, v) < threshold) out.removed.emplace_back(u, v);
    out.graph = d.graph.remove_edges(out.removed);
    return out;
}

std::vector<Edge> jaccard_lowest_k(const Dataset& d, int k) {
    if (k < 0 || k > d.graph.edge_count())
        throw DataError("jaccard_lowest_k: k out of range");
    std::vector<std::pair<double, Edge>> keyed;
    keyed.reserve(d.graph.edge_count());
    for (const auto& e : d.graph.edges())
        keyed.emplace_back(jaccard_pair(d.features, e.first, e.second), e);
    std::sort(keyed.begin(), keyed.end());
    std::vector<Edge> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(keyed[i].second);
    return out;
}

PurifyOutcome second_order_augment(const Dataset& d, double threshold) {
    if (threshold < 0 || threshold > 1)
        throw ConfigError("similarity threshold must be in [0, 1]");
    const Graph& g = d.graph;
    int n = g.node_count();

    // dissimilar pairs with at least one 2-hop path, ascending (i, j)
    std::vector<Edge> pairs;
    for (int i = 0; i < n; ++i) {
        std::set<int> two_hop;
        for (int k : g.neighbors(i))
            for (int j : g.neighbors(k))
                if (j > i) two_hop.insert(j);
        for (int j : two_hop)
            if (jaccard_pair(d.features, i, j) < threshold) pairs.emplace_back(i, j);
    }

    std::set<Edge> surviving(g.edges().begin(), g.edges().end());
    auto alive = [&](int a, int b) { return surviving.count(canonical_edge(a, b)) > 0; };

    PurifyOutcome out;
    for (const auto& [i, j] : pairs) {
        for (int k : g.neighbors(i)) {
            if (k == j) continue;
            if (!alive(i, k) || !alive(j, k)) continue;
            Edge victim = jaccard_pair(d.features, j, k) < jaccard_pair(d.features, i, k)
                              ? canonical_edge(j, k)
                              : canonical_edge(i, k);  // tie removes e_ik
            surviving.erase(victim);
            out.removed.push_back(victim);
        }
    }
    out.graph = Graph::from_edges(n, {surviving.begin(), surviving.end()});
    return out;
}

}  // namespace talos
