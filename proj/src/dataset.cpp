#include "talos/dataset.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <string>

#include "talos/errors.hpp"

namespace talos {

FeatureMatrix::FeatureMatrix(int node_count, int feature_dim)
    : node_count_(node_count),
      feature_dim_(feature_dim),
      words_per_row_((feature_dim + 63) / 64),
      bits_(static_cast<std::size_t>(node_count) * words_per_row_, 0) {
    if (node_count < 0 || feature_dim < 0) throw DataError("negative feature matrix dimension");
}

bool FeatureMatrix::get(int node, int feature) const {
    return (bits_[static_cast<std::size_t>(node) * words_per_row_ + feature / 64] >>
            (feature % 64)) & 1u;
}

void FeatureMatrix::set(int node, int feature, bool value) {
    auto& w = bits_[static_cast<std::size_t>(node) * words_per_row_ + feature / 64];
    std::uint64_t mask = std::uint64_t{1} << (feature % 64);
    if (value)
        w |= mask;
    else
        w &= ~mask;
}

std::span<const std::uint64_t> FeatureMatrix::row(int node) const {
    return {bits_.data() + static_cast<std::size_t>(node) * words_per_row_,
            static_cast<std::size_t>(words_per_row_)};
}

int FeatureMatrix::row_popcount(int node) const {
    int c = 0;
    for (auto w : row(node)) c += std::popcount(w);
    return c;
}

int FeatureMatrix::intersection_count(int a, int b) const {
    auto ra = row(a), rb = row(b);
    int c = 0;
    for (int w = 0; w < words_per_row_; ++w) c += std::popcount(ra[w] & rb[w]);
    return c;
}

int FeatureMatrix::union_count(int a, int b) const {
    auto ra = row(a), rb = row(b);
    int c = 0;
    for (int w = 0; w < words_per_row_; ++w) c += std::popcount(ra[w] | rb[w]);
    return c;
}

Eigen::MatrixXd FeatureMatrix::to_dense() const {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(node_count_, feature_dim_);
    for (int i = 0; i < node_count_; ++i)
        for (int f = 0; f < feature_dim_; ++f)
            if (get(i, f)) x(i, f) = 1.0;
    return x;
}

SplitMasks make_split(const LabelVector& labels, double train_frac, double val_frac,
                      std::uint64_t seed, bool stratified) {
    int n = static_cast<int>(labels.labels.size());
    if (train_frac < 0 || val_frac < 0 || train_frac + val_frac > 1.0)
        throw ConfigError("invalid split fractions");
    std::mt19937_64 rng(seed);
    SplitMasks m;

    auto assign = [&](std::vector<int>& pool) {
        std::shuffle(pool.begin(), pool.end(), rng);
        int nt = std::max(1, static_cast<int>(pool.size() * train_frac));
        int nv = std::max(1, static_cast<int>(pool.size() * val_frac));
        nt = std::min<int>(nt, static_cast<int>(pool.size()));
        nv = std::min<int>(nv, static_cast<int>(pool.size()) - nt);
        for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
            if (i < nt)
                m.train.push_back(pool[i]);
            else if (i < nt + nv)
                m.val.push_back(pool[i]);
            else
                m.test.push_back(pool[i]);
        }
    };

    if (stratified) {
        std::vector<std::vector<int>> by_class(labels.class_count);
        for (int i = 0; i < n; ++i) by_class[labels.labels[i]].push_back(i);
        for (auto& pool : by_class)
            if (!pool.empty()) assign(pool);
    } else {
        std::vector<int> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        assign(pool);
    }
    std::sort(m.train.begin(), m.train.end());
    std::sort(m.val.begin(), m.val.end());
    std::sort(m.test.begin(), m.test.end());
    return m;
}

void validate_dataset(const Dataset& d) {
    int n = d.graph.node_count();
    if (d.features.node_count() != n)
        throw DataError("feature row count " + std::to_string(d.features.node_count()) +
                        " does not match node count " + std::to_string(n));
    if (static_cast<int>(d.labels.labels.size()) != n)
        throw DataError("label count does not match node count");
    for (int i = 0; i < n; ++i)
        if (d.labels.labels[i] < 0 || d.labels.labels[i] >= d.labels.class_count)
            throw DataError("label out of range at node " + std::to_string(i));
    auto check_mask = [&](const std::vector<int>& mask, const char* name) {
        for (int v : mask)
            if (v < 0 || v >= n) throw DataError(std::string("split mask ") + name + " out of range");
    };
    check_mask(d.split.train, "train");
    check_mask(d.split.val, "val");
    check_mask(d.split.test, "test");
}

Dataset largest_connected_component(const Dataset& d) {
    if (d.graph.node_count() == 0) return Dataset{};
    auto comps = d.graph.connected_components();
    // components come ordered by smallest contained index, so the first
    // maximal-size one realizes the tie-break
    const std::vector<int>* best = &comps[0];
    for (const auto& c : comps)
        if (c.size() > best->size()) best = &c;

    std::vector<int> old_to_new(d.graph.node_count(), -1);
    for (int i = 0; i < static_cast<int>(best->size()); ++i) old_to_new[(*best)[i]] = i;

    int n = static_cast<int>(best->size());
    std::vector<Edge> edges;
    for (const auto& [u, v] : d.graph.edges())
        if (old_to_new[u] >= 0 && old_to_new[v] >= 0)
            edges.emplace_back(old_to_new[u], old_to_new[v]);

    Dataset out;
    out.graph = Graph::from_edges(n, edges);
    out.features = FeatureMatrix(n, d.features.feature_dim());
    out.labels.class_count = d.labels.class_count;
    out.labels.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        int old = (*best)[i];
        out.labels.labels[i] = d.labels.labels[old];
        for (int f = 0; f < d.features.feature_dim(); ++f)
            if (d.features.get(old, f)) out.features.set(i, f, true);
    }
    auto remap = [&](const std::vector<int>& mask) {
        std::vector<int> out_mask;
        for (int v : mask)
            if (old_to_new[v] >= 0) out_mask.push_back(old_to_new[v]);
        std::sort(out_mask.begin(), out_mask.end());
        return out_mask;
    };
    out.split.train = remap(d.split.train);
    out.split.val = remap(d.split.val);
    out.split.test = remap(d.split.test);
    return out;
}

Dataset with_graph(const Dataset& d, Graph g) {
    Dataset out = d;
    out.graph = std::move(g);
    return out;
}

double measure_edge_homophily(const Dataset& d) {
    if (d.graph.edge_count() == 0)
        throw DataError("edge homophily undefined on a graph with no edges");
    int same = 0;
    for (const auto& [u, v] : d.graph.edges())
        if (d.labels.labels[u] == d.labels.labels[v]) ++same;
    return static_cast<double>(same) / d.graph.edge_count();
}

}  // namespace talos
