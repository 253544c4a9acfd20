#include "talos/defense.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "talos/errors.hpp"
#include "talos/similarity.hpp"

namespace talos {
namespace {

ResolventConfig with_alpha(const PurifyConfig& cfg) {
    ResolventConfig r = cfg.resolvent;
    r.alpha = cfg.alpha;
    return r;
}

void sort_table(std::vector<EdgeScore>& entries) {
    std::sort(entries.begin(), entries.end(), [](const EdgeScore& a, const EdgeScore& b) {
        if (a.score != b.score) return a.score < b.score;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
}

}  // namespace

void EdgeScoreTable::save_csv(const std::filesystem::path& path,
                              const std::vector<std::string>& header) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& h : header) out << "# " << h << "\n";
    out << "u,v,score\n";
    out.precision(17);
    for (const auto& e : entries) out << e.u << "," << e.v << "," << e.score << "\n";
}

EdgeScoreTable EdgeScoreTable::load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    EdgeScoreTable t;
    std::string line;
    bool saw_header = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != "u,v,score")
                throw DataError(path.string() + ": bad score CSV header");
            saw_header = true;
            continue;
        }
        std::istringstream ss(line);
        std::string cu, cv, cs;
        if (!std::getline(ss, cu, ',') || !std::getline(ss, cv, ',') || !std::getline(ss, cs))
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad row");
        t.entries.push_back({std::stoi(cu), std::stoi(cv), std::stod(cs)});
    }
    return t;
}

double homophily_order_k(const Dataset& d, int k) {
    if (k < 0) throw NumericError("homophily_order_k: k must be >= 0");
    int n = d.graph.node_count();
    DenseMatrix j = jaccard_matrix(d.features);
    if (k == 0) return j.trace();
    SparseMatrix a = adjacency_sparse(d.graph);
    DenseMatrix p = DenseMatrix::Identity(n, n);
    for (int i = 0; i < k; ++i) p = a * p;
    return mat_inner(p, j);
}

double global_homophily(const Dataset& d, const PurifyConfig& cfg) {
    DenseMatrix m = resolvent(d.graph, with_alpha(cfg));
    return mat_inner(m, jaccard_matrix(d.features));
}

EdgeScoreTable edge_scores(const Dataset& d, const PurifyConfig& cfg) {
    DenseMatrix m = resolvent(d.graph, with_alpha(cfg));
    DenseMatrix jm = jaccard_matrix(d.features) * m;
    EdgeScoreTable t;
    t.entries.reserve(d.graph.edge_count());
    for (const auto& [u, v] : d.graph.edges()) {
        double s = m.row(u).dot(jm.col(v));  // (M J M)_{uv}
        if (!std::isfinite(s)) throw NumericError("edge_scores: non-finite score");
        t.entries.push_back({u, v, s});
    }
    sort_table(t.entries);
    return t;
}

DeltaHom exact_delta_hom(const Dataset& d, Edge edge, const PurifyConfig& cfg) {
    Edge e = canonical_edge(edge.first, edge.second);
    if (!d.graph.has_edge(e.first, e.second))
        throw DataError("exact_delta_hom: edge (" + std::to_string(e.first) + ", " +
                        std::to_string(e.second) + ") not present");
    DenseMatrix j = jaccard_matrix(d.features);
    DenseMatrix m = resolvent(d.graph, with_alpha(cfg));
    Graph pruned = d.graph.remove_edges({e});
    DenseMatrix m_prime = resolvent(pruned, with_alpha(cfg));

    DeltaHom out;
    out.recomputed = mat_inner(m_prime, j) - mat_inner(m, j);
    // M'JM is not symmetric (M' != M), so the single-entry form only holds
    // after symmetrizing over the two edge orientations.
    out.identity_value = -cfg.alpha * (m_prime.row(e.first).dot(j * m.col(e.second)) +
                                       m_prime.row(e.second).dot(j * m.col(e.first)));
    return out;
}

PurifyResult purify(const Dataset& d, const PurifyConfig& cfg) {
    if (cfg.removal_count < 0 || cfg.removal_count > d.graph.edge_count())
        throw DataError("purify: removal_count " + std::to_string(cfg.removal_count) +
                        " out of range for " + std::to_string(d.graph.edge_count()) + " edges");
    PurifyResult out;
    if (cfg.removal_count == 0) {
        out.dataset = d;
        return out;
    }
    EdgeScoreTable table = edge_scores(d, cfg);
    out.removed.assign(table.entries.begin(), table.entries.begin() + cfg.removal_count);
    std::vector<Edge> gone;
    gone.reserve(out.removed.size());
    for (const auto& e : out.removed) gone.emplace_back(e.u, e.v);
    out.dataset = with_graph(d, d.graph.remove_edges(gone));
    return out;
}

double select_alpha(const Graph& g, double safety) {
    if (safety <= 0 || safety >= 1) throw ConfigError("select_alpha: safety must be in (0, 1)");
    if (g.node_count() == 0) throw DataError("select_alpha: empty graph");
    if (g.edge_count() == 0) return 0.9;  // any alpha converges when A = 0
    double rho_hat = power_iteration_rho(g).value;
    double upper = spectral_bound(g).value_or(static_cast<double>(g.max_degree()));
    rho_hat = std::min(rho_hat, upper);
    if (rho_hat <= 0) return 0.9;
    return safety / rho_hat;
}

int sweep_removal_count(const Dataset& d, const PurifyConfig& cfg,
                        const std::vector<int>& candidates, const ValAccuracyFn& evaluator) {
    if (candidates.empty()) throw ConfigError("sweep_removal_count: empty candidate list");
    if (!std::is_sorted(candidates.begin(), candidates.end()))
        throw ConfigError("sweep_removal_count: candidates must be sorted ascending");
    EdgeScoreTable table = edge_scores(d, cfg);
    int best = candidates.front();
    double best_acc = -1.0;
    for (int nr : candidates) {
        if (nr < 0 || nr > d.graph.edge_count())
            throw DataError("sweep_removal_count: candidate " + std::to_string(nr) +
                            " out of range");
        std::vector<Edge> gone;
        gone.reserve(nr);
        for (int i = 0; i < nr; ++i) gone.emplace_back(table.entries[i].u, table.entries[i].v);
        Dataset purified = with_graph(d, d.graph.remove_edges(gone));
        double acc = evaluator(purified);
        if (acc > best_acc) {  // strict: ties keep the smallest candidate
            best_acc = acc;
            best = nr;
        }
    }
    return best;
}

std::vector<int> auto_removal_grid(int edge_count) {
    std::set<int> grid = {0};
    for (double frac : {0.01, 0.02, 0.05, 0.10, 0.20})
        grid.insert(static_cast<int>(std::ceil(frac * edge_count)));
    return {grid.begin(), grid.end()};
}

}  // namespace talos
