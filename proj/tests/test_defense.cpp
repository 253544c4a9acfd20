#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <tuple>

#include "talos/defense.hpp"
#include "talos/errors.hpp"
#include "talos/sbm.hpp"
#include "talos/similarity.hpp"

using namespace talos;

namespace {

Dataset k2_identical_features() {
    Dataset d;
    d.graph = Graph::from_edges(2, {{0, 1}});
    d.features = FeatureMatrix(2, 2);
    d.features.set(0, 0, true);
    d.features.set(1, 0, true);
    d.labels = {{0, 0}, 1};
    return d;
}

Dataset random_dataset(int n, double p, std::mt19937_64& rng) {
    Dataset d;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unit(rng) < p) edges.emplace_back(u, v);
    d.graph = Graph::from_edges(n, edges);
    d.features = FeatureMatrix(n, 8);
    std::bernoulli_distribution bit(0.5);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 8; ++j)
            if (bit(rng)) d.features.set(i, j, true);
    d.labels.labels.assign(n, 0);
    d.labels.class_count = 1;
    return d;
}

PurifyConfig cfg_for(const Dataset& d, double safety = 0.5) {
    PurifyConfig cfg;
    cfg.alpha = select_alpha(d.graph, safety);
    return cfg;
}

}  // namespace

TEST_CASE("homophily_order_k") {
    SUBCASE("k = 0 counts nodes with nonzero features") {
        Dataset d;
        d.graph = Graph::from_edges(3, {{0, 1}});
        d.features = FeatureMatrix(3, 2);
        d.features.set(0, 0, true);
        d.features.set(1, 1, true);  // node 2 all-zero
        d.labels = {{0, 0, 0}, 1};
        CHECK(homophily_order_k(d, 0) == 2.0);
    }
    SUBCASE("edgeless graph has zero weight at k >= 1") {
        Dataset d;
        d.graph = Graph::from_edges(4, {});
        d.features = FeatureMatrix(4, 2);
        d.labels = {{0, 0, 0, 0}, 1};
        CHECK(homophily_order_k(d, 1) == 0.0);
        CHECK(homophily_order_k(d, 3) == 0.0);
    }
    SUBCASE("K2 with identical features at k = 1") {
        CHECK(homophily_order_k(k2_identical_features(), 1) == 2.0);
    }
}

TEST_CASE("global_homophily") {
    SUBCASE("edgeless graph reduces to the J trace") {
        Dataset d;
        d.graph = Graph::from_edges(3, {});
        d.features = FeatureMatrix(3, 2);
        for (int i = 0; i < 3; ++i) d.features.set(i, 0, true);
        d.labels = {{0, 0, 0}, 1};
        PurifyConfig cfg;
        cfg.alpha = 0.5;
        CHECK(global_homophily(d, cfg) == 3.0);
    }
    SUBCASE("K2 closed form gives 4 at alpha 0.5") {
        PurifyConfig cfg;
        cfg.alpha = 0.5;
        CHECK(global_homophily(k2_identical_features(), cfg) ==
              doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("matches the truncated series on random 15-node graphs") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 5; ++trial) {
            Dataset d = random_dataset(15, 0.3, rng);
            PurifyConfig cfg = cfg_for(d, 0.5);
            double series = 0.0;
            for (int k = 0; k <= 40; ++k)
                series += std::pow(cfg.alpha, k) * homophily_order_k(d, k);
            CHECK(global_homophily(d, cfg) == doctest::Approx(series).epsilon(1e-6));
        }
    }
}

TEST_CASE("edge_scores") {
    SUBCASE("K2 single entry scores 4") {
        PurifyConfig cfg;
        cfg.alpha = 0.5;
        EdgeScoreTable t = edge_scores(k2_identical_features(), cfg);
        REQUIRE(t.entries.size() == 1);
        CHECK(t.entries[0].u == 0);
        CHECK(t.entries[0].v == 1);
        CHECK(t.entries[0].score == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("bridge between feature-disjoint triangles is the unique minimum") {
        Dataset d;
        d.graph = Graph::from_edges(
            6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
        d.features = FeatureMatrix(6, 2);
        for (int i = 0; i < 3; ++i) d.features.set(i, 0, true);
        for (int i = 3; i < 6; ++i) d.features.set(i, 1, true);
        d.labels = {{0, 0, 0, 1, 1, 1}, 2};
        EdgeScoreTable t = edge_scores(d, cfg_for(d));
        REQUIRE(t.entries.size() == 7);
        CHECK(t.entries[0].u == 2);
        CHECK(t.entries[0].v == 3);
        CHECK(t.entries[0].score < t.entries[1].score);
    }
    SUBCASE("table is sorted ascending by (score, u, v)") {
        std::mt19937_64 rng(37);
        Dataset d = random_dataset(20, 0.2, rng);
        EdgeScoreTable t = edge_scores(d, cfg_for(d));
        for (std::size_t i = 1; i < t.entries.size(); ++i) {
            const auto& a = t.entries[i - 1];
            const auto& b = t.entries[i];
            CHECK(std::tie(a.score, a.u, a.v) <= std::tie(b.score, b.u, b.v));
        }
    }
    SUBCASE("invariant under node relabeling") {
        std::mt19937_64 rng(41);
        Dataset d = random_dataset(12, 0.3, rng);
        PurifyConfig cfg = cfg_for(d);
        EdgeScoreTable base = edge_scores(d, cfg);

        std::vector<int> perm(12);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);

        Dataset pd;
        std::vector<Edge> pe;
        for (const auto& [u, v] : d.graph.edges())
            pe.push_back(canonical_edge(perm[u], perm[v]));
        pd.graph = Graph::from_edges(12, pe);
        pd.features = FeatureMatrix(12, 8);
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 8; ++j) pd.features.set(perm[i], j, d.features.get(i, j));
        pd.labels = d.labels;
        EdgeScoreTable permuted = edge_scores(pd, cfg);

        auto lookup = [&](const EdgeScoreTable& t, Edge e) {
            for (const auto& s : t.entries)
                if (Edge{s.u, s.v} == e) return s.score;
            FAIL("edge not found in table");
            return 0.0;
        };
        for (const auto& s : base.entries) {
            double ps = lookup(permuted, canonical_edge(perm[s.u], perm[s.v]));
            CHECK(ps == doctest::Approx(s.score).epsilon(1e-10));
        }
    }
}

TEST_CASE("edge score table csv round trip") {
    std::mt19937_64 rng(43);
    Dataset d = random_dataset(15, 0.3, rng);
    EdgeScoreTable t = edge_scores(d, cfg_for(d));
    auto path = std::filesystem::temp_directory_path() / "talos_scores.csv";
    t.save_csv(path, {"alpha=whatever"});
    EdgeScoreTable back = EdgeScoreTable::load_csv(path);
    REQUIRE(back.entries.size() == t.entries.size());
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        CHECK(back.entries[i].u == t.entries[i].u);
        CHECK(back.entries[i].v == t.entries[i].v);
        CHECK(back.entries[i].score == t.entries[i].score);  // precision 17 is exact
    }
}

TEST_CASE("exact_delta_hom") {
    SUBCASE("K2 hand computation") {
        PurifyConfig cfg;
        cfg.alpha = 0.5;
        DeltaHom dh = exact_delta_hom(k2_identical_features(), {0, 1}, cfg);
        CHECK(dh.recomputed == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(dh.identity_value == doctest::Approx(-2.0).epsilon(1e-12));
    }
    SUBCASE("identity holds for every edge of random 12-node graphs") {
        std::mt19937_64 rng(47);
        for (int trial = 0; trial < 5; ++trial) {
            Dataset d = random_dataset(12, 0.3, rng);
            if (d.graph.edge_count() == 0) continue;
            PurifyConfig cfg = cfg_for(d, 0.9);
            for (const auto& e : d.graph.edges()) {
                DeltaHom dh = exact_delta_hom(d, e, cfg);
                CHECK(dh.recomputed <= 1e-12);  // removal never helps
                double tol = 1e-9 * std::max(1.0, std::abs(dh.recomputed));
                CHECK(std::abs(dh.recomputed - dh.identity_value) < tol);
            }
        }
    }
    SUBCASE("missing edge is an error") {
        PurifyConfig cfg;
        cfg.alpha = 0.5;
        CHECK_THROWS_AS(exact_delta_hom(k2_identical_features(), {0, 0}, cfg), DataError);
    }
}

TEST_CASE("purify") {
    std::mt19937_64 rng(53);
    Dataset d = random_dataset(18, 0.25, rng);
    PurifyConfig cfg = cfg_for(d);

    SUBCASE("removal_count 0 returns the identical dataset") {
        cfg.removal_count = 0;
        CHECK(purify(d, cfg).dataset == d);
    }
    SUBCASE("removal_count |E| empties the graph") {
        cfg.removal_count = d.graph.edge_count();
        PurifyResult r = purify(d, cfg);
        CHECK(r.dataset.graph.edge_count() == 0);
        CHECK(r.dataset.graph.node_count() == d.graph.node_count());
    }
    SUBCASE("removal_count beyond |E| is an error") {
        cfg.removal_count = d.graph.edge_count() + 1;
        CHECK_THROWS_AS(purify(d, cfg), DataError);
    }
    SUBCASE("n_r = 1 removes exactly the table minimum") {
        cfg.removal_count = 1;
        EdgeScoreTable t = edge_scores(d, cfg);
        PurifyResult r = purify(d, cfg);
        REQUIRE(r.removed.size() == 1);
        CHECK(r.removed[0].u == t.entries[0].u);
        CHECK(r.removed[0].v == t.entries[0].v);
        CHECK_FALSE(r.dataset.graph.has_edge(t.entries[0].u, t.entries[0].v));
    }
    SUBCASE("homophily never increases under purification") {
        double before = global_homophily(d, cfg);
        for (int nr : {1, 3, 7}) {
            cfg.removal_count = nr;
            CHECK(global_homophily(purify(d, cfg).dataset, cfg) <= before + 1e-9);
        }
    }
}

TEST_CASE("select_alpha") {
    Graph c4 = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    CHECK(select_alpha(c4, 0.95) == doctest::Approx(0.475).epsilon(1e-9));
    CHECK(select_alpha(Graph::from_edges(5, {})) == 0.9);
    CHECK_THROWS_AS(select_alpha(c4, 1.5), ConfigError);
    CHECK_THROWS_AS(select_alpha(Graph{}, 0.95), DataError);

    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 10; ++trial) {
        Dataset d = random_dataset(20, 0.2, rng);
        if (d.graph.edge_count() == 0) continue;
        double a = select_alpha(d.graph);
        CHECK(a * power_iteration_rho(d.graph).value < 1.0);
    }
}

TEST_CASE("sweep_removal_count") {
    std::mt19937_64 rng(61);
    Dataset d = random_dataset(16, 0.3, rng);
    PurifyConfig cfg = cfg_for(d);

    SUBCASE("single candidate wins by default") {
        auto constant = [](const Dataset&) { return 0.5; };
        CHECK(sweep_removal_count(d, cfg, {4}, constant) == 4);
    }
    SUBCASE("ties go to the smallest candidate") {
        auto constant = [](const Dataset&) { return 0.5; };
        CHECK(sweep_removal_count(d, cfg, {0, 2, 5}, constant) == 0);
    }
    SUBCASE("evaluator preference is respected") {
        auto prefers_sparser = [](const Dataset& x) {
            return 1.0 / (1.0 + x.graph.edge_count());
        };
        CHECK(sweep_removal_count(d, cfg, {0, 1, d.graph.edge_count()}, prefers_sparser) ==
              d.graph.edge_count());
    }
    SUBCASE("empty or unsorted candidates rejected") {
        auto constant = [](const Dataset&) { return 0.5; };
        CHECK_THROWS_AS(sweep_removal_count(d, cfg, {}, constant), ConfigError);
        CHECK_THROWS_AS(sweep_removal_count(d, cfg, {5, 1}, constant), ConfigError);
    }
}

TEST_CASE("auto_removal_grid") {
    auto grid = auto_removal_grid(1000);
    CHECK(grid == std::vector<int>{0, 10, 20, 50, 100, 200});
    CHECK(auto_removal_grid(0) == std::vector<int>{0});
    // duplicates collapse on tiny graphs
    auto tiny = auto_removal_grid(10);
    CHECK(std::is_sorted(tiny.begin(), tiny.end()));
    CHECK(std::adjacent_find(tiny.begin(), tiny.end()) == tiny.end());
}
