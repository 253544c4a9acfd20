#include "talos/attack.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

#include "talos/errors.hpp"
#include "talos/similarity.hpp"

namespace talos {

void AttackRecord::save_json(const std::filesystem::path& path,
                             const std::string& config_echo) const {
    nlohmann::json j;
    j["method"] = method;
    j["budget"] = budget;
    j["seed"] = seed;
    j["injected"] = nlohmann::json::array();
    for (const auto& [u, v] : injected) j["injected"].push_back({u, v});
    j["removed"] = nlohmann::json::array();
    for (const auto& [u, v] : removed) j["removed"].push_back({u, v});
    if (!config_echo.empty()) j["config"] = nlohmann::json::parse(config_echo);
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

AttackRecord AttackRecord::load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    AttackRecord r;
    r.method = j.value("method", "");
    r.budget = j.value("budget", 0);
    r.seed = j.value("seed", std::uint64_t{0});
    for (const auto& p : j.at("injected")) r.injected.emplace_back(p.at(0), p.at(1));
    for (const auto& p : j.value("removed", nlohmann::json::array()))
        r.removed.emplace_back(p.at(0), p.at(1));
    return r;
}

double median_edge_jaccard(const Dataset& d) {
    if (d.graph.edge_count() == 0) throw DataError("median_edge_jaccard: no edges");
    std::vector<double> js;
    js.reserve(d.graph.edge_count());
    for (const auto& [u, v] : d.graph.edges()) js.push_back(jaccard_pair(d.features, u, v));
    std::size_t mid = (js.size() - 1) / 2;  // lower median
    std::nth_element(js.begin(), js.begin() + mid, js.end());
    return js[mid];
}

AttackResult inject_heterophilic(const Dataset& d, int budget, std::uint64_t seed) {
    AttackResult out;
    out.record.method = "heterophilic";
    out.record.budget = budget;
    out.record.seed = seed;
    if (budget == 0) {
        out.dataset = d;
        return out;
    }
    bool multi_class = false;
    for (int y : d.labels.labels)
        if (y != d.labels.labels[0]) multi_class = true;
    if (!multi_class) throw DataError("inject_heterophilic: single-class dataset");

    double median = median_edge_jaccard(d);
    int n = d.graph.node_count();
    std::vector<Edge> eligible;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (d.labels.labels[u] == d.labels.labels[v]) continue;
            if (d.graph.has_edge(u, v)) continue;
            if (jaccard_pair(d.features, u, v) < median) eligible.emplace_back(u, v);
        }
    if (static_cast<int>(eligible.size()) < budget)
        throw DataError("inject_heterophilic: budget " + std::to_string(budget) +
                        " infeasible, maximum is " + std::to_string(eligible.size()));
    std::mt19937_64 rng(seed);
    std::shuffle(eligible.begin(), eligible.end(), rng);
    out.record.injected.assign(eligible.begin(), eligible.begin() + budget);
    std::sort(out.record.injected.begin(), out.record.injected.end());
    out.dataset = with_graph(d, d.graph.add_edges(out.record.injected));
    return out;
}

AttackResult inject_indirect(const Dataset& d, const std::vector<int>& targets, int budget,
                             std::uint64_t seed) {
    AttackResult out;
    out.record.method = "indirect";
    out.record.budget = budget;
    out.record.seed = seed;
    if (budget == 0) {
        out.dataset = d;
        return out;
    }
    if (targets.empty()) throw DataError("inject_indirect: no targets");
    for (int t : targets)
        if (d.graph.degree(t) == 0)
            throw DataError("inject_indirect: target " + std::to_string(t) + " has no neighbors");

    double median = median_edge_jaccard(d);
    int n = d.graph.node_count();
    std::mt19937_64 rng(seed);
    std::set<int> target_set(targets.begin(), targets.end());

    // adjacency as sets so injected edges update eligibility
    std::vector<std::set<int>> adj(n);
    for (const auto& [u, v] : d.graph.edges()) {
        adj[u].insert(v);
        adj[v].insert(u);
    }

    int remaining = budget;
    bool progress = true;
    while (remaining > 0 && progress) {
        progress = false;
        for (int a : targets) {
            if (remaining == 0) break;
            std::vector<Edge> options;  // (b, c) pairs
            for (int b : adj[a]) {
                if (target_set.count(b)) continue;  // no target gains an edge
                for (int c = 0; c < n; ++c) {
                    if (c == a || c == b) continue;
                    if (target_set.count(c)) continue;
                    if (d.labels.labels[c] == d.labels.labels[a]) continue;
                    if (adj[a].count(c) || adj[b].count(c)) continue;
                    if (jaccard_pair(d.features, a, c) < median) options.emplace_back(b, c);
                }
            }
            if (options.empty()) continue;
            std::sort(options.begin(), options.end());
            auto [b, c] = options[std::uniform_int_distribution<std::size_t>(
                0, options.size() - 1)(rng)];
            adj[b].insert(c);
            adj[c].insert(b);
            out.record.injected.push_back(canonical_edge(b, c));
            --remaining;
            progress = true;
        }
    }
    if (remaining == budget)
        throw DataError("inject_indirect: no eligible injection for any target");
    out.record.budget = budget;
    std::sort(out.record.injected.begin(), out.record.injected.end());
    out.dataset = with_graph(d, d.graph.add_edges(out.record.injected));
    return out;
}

AttackResult greedy_homophily_attack(const Dataset& d, int budget, const PurifyConfig& cfg,
                                     int candidate_pool, std::uint64_t seed) {
    if (budget < 1) throw DataError("greedy_homophily_attack: budget must be >= 1");
    if (candidate_pool < 1) throw ConfigError("greedy_homophily_attack: empty candidate pool");
    AttackResult out;
    out.record.method = "greedy";
    out.record.budget = budget;
    out.record.seed = seed;

    std::mt19937_64 rng(seed);
    Graph g = d.graph;
    int n = g.node_count();
    DenseMatrix j = jaccard_matrix(d.features);

    ResolventConfig rcfg = cfg.resolvent;
    rcfg.alpha = cfg.alpha;

    for (int step = 0; step < budget; ++step) {
        std::vector<Edge> non_edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (!g.has_edge(u, v)) non_edges.emplace_back(u, v);
        if (non_edges.empty()) break;
        if (static_cast<int>(non_edges.size()) > candidate_pool) {
            std::shuffle(non_edges.begin(), non_edges.end(), rng);
            non_edges.resize(candidate_pool);
            std::sort(non_edges.begin(), non_edges.end());
        }

        DenseMatrix m = resolvent(g, rcfg);
        DenseMatrix s = m * j * m;

        // Rank-2 resolvent update gives the exact homophily change of adding
        // edge (k, l) without refactoring per candidate:
        //   dHom = alpha * (C11 S_kl + C12 S_kk + C21 S_ll + C22 S_lk)
        //   C = inv(I2 - alpha [[M_lk, M_ll], [M_kk, M_kl]])
        Edge best{-1, -1};
        double best_delta = 0;
        bool have = false;
        double a = cfg.alpha;
        for (const auto& [k, l] : non_edges) {
            double b11 = 1.0 - a * m(l, k), b12 = -a * m(l, l);
            double b21 = -a * m(k, k), b22 = 1.0 - a * m(k, l);
            double det = b11 * b22 - b12 * b21;
            if (det <= 0) continue;  // addition would break convergence
            double c11 = b22 / det, c12 = -b12 / det, c21 = -b21 / det, c22 = b11 / det;
            double delta =
                a * (c11 * s(k, l) + c12 * s(k, k) + c21 * s(l, l) + c22 * s(l, k));
            if (!have || delta < best_delta ||
                (delta == best_delta && canonical_edge(k, l) < best)) {
                best = canonical_edge(k, l);
                best_delta = delta;
                have = true;
            }
        }
        if (!have) break;
        g = g.add_edges({best});
        out.record.injected.push_back(best);
    }
    std::sort(out.record.injected.begin(), out.record.injected.end());
    out.dataset = with_graph(d, g);
    return out;
}

AttackResult random_flip(const Dataset& d, int budget, std::uint64_t seed) {
    AttackResult out;
    out.record.method = "random";
    out.record.budget = budget;
    out.record.seed = seed;
    int n = d.graph.node_count();
    std::vector<Edge> non_edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!d.graph.has_edge(u, v)) non_edges.emplace_back(u, v);
    if (budget > static_cast<int>(non_edges.size()))
        throw DataError("random_flip: budget exceeds available non-edges");
    std::mt19937_64 rng(seed);
    std::shuffle(non_edges.begin(), non_edges.end(), rng);
    out.record.injected.assign(non_edges.begin(), non_edges.begin() + budget);
    std::sort(out.record.injected.begin(), out.record.injected.end());
    out.dataset = with_graph(d, d.graph.add_edges(out.record.injected));
    return out;
}

}  // namespace talos
