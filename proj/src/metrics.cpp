#include "talos/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "talos/errors.hpp"

namespace talos {
namespace {

std::pair<std::vector<double>, std::vector<double>> histogram_masses(const ScoreSplit& s,
                                                                     int bins) {
    double lo = std::min(*std::min_element(s.attack_scores.begin(), s.attack_scores.end()),
                         *std::min_element(s.clean_scores.begin(), s.clean_scores.end()));
    double hi = std::max(*std::max_element(s.attack_scores.begin(), s.attack_scores.end()),
                         *std::max_element(s.clean_scores.begin(), s.clean_scores.end()));
    std::vector<double> a(bins, 0.0), c(bins, 0.0);
    if (hi <= lo) return {a, c};  // degenerate range
    auto fill = [&](const std::vector<double>& xs, std::vector<double>& h) {
        for (double x : xs) {
            int b = static_cast<int>((x - lo) / (hi - lo) * bins);
            b = std::clamp(b, 0, bins - 1);
            h[b] += 1.0 / xs.size();
        }
    };
    fill(s.attack_scores, a);
    fill(s.clean_scores, c);
    return {a, c};
}

void require_nonempty(const ScoreSplit& s, const char* who) {
    if (s.attack_scores.empty() || s.clean_scores.empty())
        throw DataError(std::string(who) + ": both score lists must be non-empty");
}

}  // namespace

ScoreSplit split_scores(const EdgeScoreTable& table, const AttackRecord& record) {
    std::set<Edge> injected;
    for (const auto& [u, v] : record.injected) injected.insert(canonical_edge(u, v));
    ScoreSplit s;
    for (const auto& e : table.entries) {
        if (injected.count(canonical_edge(e.u, e.v)))
            s.attack_scores.push_back(e.score);
        else
            s.clean_scores.push_back(e.score);
    }
    return s;
}

double ks_statistic(const ScoreSplit& s) {
    require_nonempty(s, "ks_statistic");
    std::vector<double> a = s.attack_scores, c = s.clean_scores;
    std::sort(a.begin(), a.end());
    std::sort(c.begin(), c.end());
    double ks = 0.0;
    std::size_t ia = 0, ic = 0;
    while (ia < a.size() || ic < c.size()) {
        double t = ia < a.size() && (ic >= c.size() || a[ia] <= c[ic]) ? a[ia] : c[ic];
        while (ia < a.size() && a[ia] <= t) ++ia;
        while (ic < c.size() && c[ic] <= t) ++ic;
        ks = std::max(ks, std::abs(static_cast<double>(ia) / a.size() -
                                   static_cast<double>(ic) / c.size()));
    }
    return ks;
}

double separation_rate(const ScoreSplit& s, int bins) {
    require_nonempty(s, "separation_rate");
    if (bins < 2) throw ConfigError("separation_rate: bins must be >= 2");
    auto [a, c] = histogram_masses(s, bins);
    double total_a = 0.0;
    for (double m : a) total_a += m;
    if (total_a == 0.0) return 0.0;  // degenerate range convention
    double overlap = 0.0;
    for (int b = 0; b < bins; ++b) overlap += std::min(a[b], c[b]);
    return 1.0 - overlap / total_a;
}

RecoveryPR recovery_pr(const std::vector<Edge>& removed, const AttackRecord& record) {
    if (record.injected.empty()) throw DataError("recovery_pr: empty attack record");
    std::set<Edge> injected;
    for (const auto& [u, v] : record.injected) injected.insert(canonical_edge(u, v));
    int hits = 0;
    for (const auto& [u, v] : removed)
        if (injected.count(canonical_edge(u, v))) ++hits;
    RecoveryPR pr;
    pr.empty_removed = removed.empty();
    pr.precision = removed.empty() ? 0.0 : static_cast<double>(hits) / removed.size();
    pr.recall = static_cast<double>(hits) / injected.size();
    return pr;
}

void export_histograms(const ScoreSplit& s, int bins, const std::filesystem::path& path,
                       const std::vector<std::string>& header) {
    require_nonempty(s, "export_histograms");
    if (bins < 2) throw ConfigError("export_histograms: bins must be >= 2");
    double lo = std::min(*std::min_element(s.attack_scores.begin(), s.attack_scores.end()),
                         *std::min_element(s.clean_scores.begin(), s.clean_scores.end()));
    double hi = std::max(*std::max_element(s.attack_scores.begin(), s.attack_scores.end()),
                         *std::max_element(s.clean_scores.begin(), s.clean_scores.end()));
    auto [a, c] = histogram_masses(s, bins);
    double width = hi > lo ? (hi - lo) / bins : 1.0;

    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& h : header) out << "# " << h << "\n";
    out << "bin_lo,bin_hi,attack_density,clean_density\n";
    out.precision(17);
    for (int b = 0; b < bins; ++b)
        out << lo + b * width << "," << lo + (b + 1) * width << "," << a[b] / width << ","
            << c[b] / width << "\n";
}

}  // namespace talos
