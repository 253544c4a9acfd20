#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "talos/dataset.hpp"
#include "talos/defense.hpp"

namespace talos {

struct AttackRecord {
    std::vector<Edge> injected;
    std::vector<Edge> removed;  // empty for the injection-only attacks here
    int budget = 0;
    std::uint64_t seed = 0;
    std::string method;

    void save_json(const std::filesystem::path& path, const std::string& config_echo = {}) const;
    static AttackRecord load_json(const std::filesystem::path& path);
};

struct AttackResult {
    Dataset dataset;
    AttackRecord record;
};

/// Lower median of the Jaccard similarities over existing edges.
double median_edge_jaccard(const Dataset& d);

/// Adds `budget` edges sampled uniformly among non-adjacent different-label
/// pairs whose similarity is below the median edge Jaccard.
AttackResult inject_heterophilic(const Dataset& d, int budget, std::uint64_t seed);

/// Second-order attack: for each target a, connects one of a's neighbors b to
/// a dissimilar different-label node c that is adjacent to neither a nor b.
/// The targets' own edges are never touched. Round-robin until the budget is
/// spent. Eligibility (different label, similarity to the target below the
/// median edge Jaccard) is this artifact's concretization; the motivating
/// description leaves it open.
AttackResult inject_indirect(const Dataset& d, const std::vector<int>& targets, int budget,
                             std::uint64_t seed);

/// Adaptive adversary against the defense objective itself: each step samples
/// up to candidate_pool non-edges and adds the one whose insertion yields the
/// smallest resulting global homophily (exact, via a rank-2 resolvent update).
AttackResult greedy_homophily_attack(const Dataset& d, int budget, const PurifyConfig& cfg,
                                     int candidate_pool, std::uint64_t seed);

/// Noise baseline: uniformly random non-edges, labels ignored.
AttackResult random_flip(const Dataset& d, int budget, std::uint64_t seed);

}  // namespace talos
