#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "talos/attack.hpp"
#include "talos/defense.hpp"

namespace talos {

struct ScoreSplit {
    std::vector<double> attack_scores;
    std::vector<double> clean_scores;
};

/// Joins an EdgeScoreTable with the injected-edge ground truth.
ScoreSplit split_scores(const EdgeScoreTable& table, const AttackRecord& record);

/// Exact two-sample Kolmogorov-Smirnov statistic over the merged support.
double ks_statistic(const ScoreSplit& s);

/// 1 minus the overlap mass of the two normalized equal-width histograms on
/// the shared min-max range. All-equal scores give 0 by convention.
double separation_rate(const ScoreSplit& s, int bins = 50);

struct RecoveryPR {
    double precision = 0.0;
    double recall = 0.0;
    bool empty_removed = false;
};

RecoveryPR recovery_pr(const std::vector<Edge>& removed, const AttackRecord& record);

/// CSV with bin edges and density-normalized counts for both distributions.
void export_histograms(const ScoreSplit& s, int bins, const std::filesystem::path& path,
                       const std::vector<std::string>& header = {});

}  // namespace talos
