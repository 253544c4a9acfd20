#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "talos/graph.hpp"

namespace talos {

/// Binary node features, one bitset row per node.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(int node_count, int feature_dim);

    int node_count() const { return node_count_; }
    int feature_dim() const { return feature_dim_; }

    bool get(int node, int feature) const;
    void set(int node, int feature, bool value);

    std::span<const std::uint64_t> row(int node) const;
    int row_popcount(int node) const;
    int intersection_count(int a, int b) const;
    int union_count(int a, int b) const;

    Eigen::MatrixXd to_dense() const;

    bool operator==(const FeatureMatrix&) const = default;

private:
    int node_count_ = 0;
    int feature_dim_ = 0;
    int words_per_row_ = 0;
    std::vector<std::uint64_t> bits_;
};

struct LabelVector {
    std::vector<int> labels;
    int class_count = 0;

    bool operator==(const LabelVector&) const = default;
};

struct SplitMasks {
    std::vector<int> train, val, test;  // disjoint, sorted node indices

    bool operator==(const SplitMasks&) const = default;
};

struct Dataset {
    Graph graph;
    FeatureMatrix features;
    LabelVector labels;
    SplitMasks split;

    bool operator==(const Dataset&) const = default;
};

/// Seeded split with the given train/val fractions (remainder is test).
/// Stratified per class by default so small classes keep train coverage.
SplitMasks make_split(const LabelVector& labels, double train_frac, double val_frac,
                      std::uint64_t seed, bool stratified = true);

/// Throws DataError if any cross-component dimension disagrees.
void validate_dataset(const Dataset& d);

/// Induced subgraph on the largest component, nodes reindexed in ascending
/// original order. Ties go to the component containing the smallest original
/// index. Empty graph maps to an empty Dataset.
Dataset largest_connected_component(const Dataset& d);

Dataset with_graph(const Dataset& d, Graph g);

/// Fraction of edges whose endpoints share a label. Zero edges is an error.
double measure_edge_homophily(const Dataset& d);

}  // namespace talos
