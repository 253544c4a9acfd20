#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "talos/dataset.hpp"
#include "talos/dense.hpp"

namespace talos {

struct PurifyConfig {
    double alpha = 0.0;          // information retention rate, must be < 1/rho(A)
    int removal_count = 0;
    ResolventConfig resolvent;   // resolvent.alpha is kept in sync at use time
};

struct EdgeScore {
    int u, v;       // u < v
    double score;   // [MJM]_{uv}; smallest = most suspicious
};

/// One entry per edge, sorted ascending by (score, u, v).
struct EdgeScoreTable {
    std::vector<EdgeScore> entries;

    void save_csv(const std::filesystem::path& path,
                  const std::vector<std::string>& header = {}) const;
    static EdgeScoreTable load_csv(const std::filesystem::path& path);
};

/// <A^k, J>: k-hop path counts weighted by Jaccard similarity.
double homophily_order_k(const Dataset& d, int k);

/// <(I - alpha*A)^{-1}, J>, the discounted sum over all hop orders.
double global_homophily(const Dataset& d, const PurifyConfig& cfg);

/// Scores every edge (u, v) by [MJM]_{uv}. M and J*M are formed once; the
/// per-edge value is a row-column dot product, so the full dense MJM is
/// never materialized.
EdgeScoreTable edge_scores(const Dataset& d, const PurifyConfig& cfg);

struct DeltaHom {
    double recomputed;      // Hom(G \ e) - Hom(G) by full recomputation
    double identity_value;  // -alpha ([M'JM]_{kl} + [M'JM]_{lk}); equals recomputed exactly
};

DeltaHom exact_delta_hom(const Dataset& d, Edge edge, const PurifyConfig& cfg);

struct PurifyResult {
    Dataset dataset;
    std::vector<EdgeScore> removed;  // ascending score prefix of the table
};

/// Batch purification: scores once, removes the removal_count lowest-scoring
/// edges in one shot.
PurifyResult purify(const Dataset& d, const PurifyConfig& cfg);

/// safety / rho_hat with rho_hat = min(power iteration estimate,
/// spectral bound or max degree). Edgeless graphs get the 0.9 default.
double select_alpha(const Graph& g, double safety = 0.95);

using ValAccuracyFn = std::function<double(const Dataset&)>;

/// Evaluates the purified dataset at each candidate removal count (one score
/// table, prefix reuse) and returns the candidate maximizing validation
/// accuracy; ties go to the smallest candidate.
int sweep_removal_count(const Dataset& d, const PurifyConfig& cfg,
                        const std::vector<int>& candidates, const ValAccuracyFn& evaluator);

/// Default candidate grid for automatic removal-count selection:
/// {0, 1%, 2%, 5%, 10%, 20%} of the edge count, deduplicated.
std::vector<int> auto_removal_grid(int edge_count);

}  // namespace talos
