#pragma once

#include <cstdint>
#include <vector>

#include "talos/dataset.hpp"
#include "talos/dense.hpp"

namespace talos {

/// |x_i AND x_j| / |x_i OR x_j|; 0 when both vectors are all-zero.
double jaccard_pair(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);
double jaccard_pair(const FeatureMatrix& f, int i, int j);

/// Full n x n Jaccard matrix via bitset popcounts. Diagonal is 1 for nodes
/// with at least one feature bit and 0 for all-zero rows.
DenseMatrix jaccard_matrix(const FeatureMatrix& f);

struct PurifyOutcome {
    Graph graph;
    std::vector<Edge> removed;  // in removal order
};

/// GCN-Jaccard style baseline: drops every edge with similarity strictly
/// below the threshold.
PurifyOutcome jaccard_threshold_purify(const Dataset& d, double threshold);

/// Calibration helper: the k edges with the smallest (J, u, v) key. Used to
/// compare baselines at a fixed removal budget.
std::vector<Edge> jaccard_lowest_k(const Dataset& d, int k);

/// Second-order augmentation: for every pair (i, j) with a common neighbor
/// and J_ij below the threshold, walks the intermediates k in ascending
/// order and removes whichever of e_ik, e_jk has the lower similarity
/// (tie removes e_ik). Pairs are processed in ascending (i, j) order and
/// already-removed edges are skipped, so the outcome is deterministic.
PurifyOutcome second_order_augment(const Dataset& d, double threshold);

}  // namespace talos
