#include <doctest.h>

#include <random>

#include "talos/errors.hpp"
#include "talos/sbm.hpp"
#include "talos/similarity.hpp"

using namespace talos;

namespace {

FeatureMatrix random_features(int n, int m, std::mt19937_64& rng) {
    FeatureMatrix f(n, m);
    std::bernoulli_distribution bit(0.5);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            if (bit(rng)) f.set(i, j, true);
    return f;
}

}  // namespace

TEST_CASE("jaccard_pair") {
    CHECK(jaccard_pair({1, 1, 0}, {1, 1, 0}) == 1.0);
    CHECK(jaccard_pair({1, 0, 0}, {0, 1, 1}) == 0.0);
    CHECK(jaccard_pair({1, 1, 0}, {1, 0, 1}) == doctest::Approx(1.0 / 3.0));
    CHECK(jaccard_pair({0, 0}, {0, 0}) == 0.0);  // all-zero convention
    CHECK_THROWS_AS(jaccard_pair({1}, {1, 0}), DataError);
}

TEST_CASE("jaccard_matrix") {
    SUBCASE("identical nonzero rows give the all-ones matrix") {
        FeatureMatrix f(3, 4);
        for (int i = 0; i < 3; ++i) f.set(i, 2, true);
        CHECK(jaccard_matrix(f) == DenseMatrix::Ones(3, 3));
    }
    SUBCASE("all-zero row gets a zero row and column, including diagonal") {
        FeatureMatrix f(3, 4);
        f.set(0, 0, true);
        f.set(2, 0, true);
        DenseMatrix j = jaccard_matrix(f);
        CHECK(j.row(1).cwiseAbs().maxCoeff() == 0.0);
        CHECK(j.col(1).cwiseAbs().maxCoeff() == 0.0);
        CHECK(j(0, 0) == 1.0);
        CHECK(j(2, 2) == 1.0);
        CHECK(j(0, 2) == 1.0);
    }
    SUBCASE("matches the pairwise oracle on random 20x8 matrices") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 20; ++trial) {
            FeatureMatrix f = random_features(20, 8, rng);
            DenseMatrix j = jaccard_matrix(f);
            CHECK((j - j.transpose()).cwiseAbs().maxCoeff() == 0.0);
            for (int a = 0; a < 20; ++a)
                for (int b = 0; b < 20; ++b) {
                    std::vector<std::uint8_t> xa(8), xb(8);
                    for (int k = 0; k < 8; ++k) {
                        xa[k] = f.get(a, k);
                        xb[k] = f.get(b, k);
                    }
                    CHECK(j(a, b) == jaccard_pair(xa, xb));
                }
        }
    }
}

TEST_CASE("jaccard_threshold_purify") {
    SbmParams p;
    p.n = 30;
    p.p_intra = 0.3;
    p.p_inter = 0.1;
    p.seed = 19;
    Dataset d = generate_sbm(p).dataset;

    SUBCASE("threshold 0 removes nothing") {
        PurifyOutcome out = jaccard_threshold_purify(d, 0.0);
        CHECK(out.graph == d.graph);
        CHECK(out.removed.empty());
    }
    SUBCASE("matches a brute-force scan") {
        double t = 0.4;
        PurifyOutcome out = jaccard_threshold_purify(d, t);
        std::vector<Edge> expected;
        for (const auto& [u, v] : d.graph.edges())
            if (jaccard_pair(d.features, u, v) < t) expected.push_back({u, v});
        CHECK(out.removed == expected);
        CHECK(out.graph.edge_count() ==
              d.graph.edge_count() - static_cast<int>(expected.size()));
    }
    SUBCASE("threshold 1 removes every edge with J < 1") {
        PurifyOutcome out = jaccard_threshold_purify(d, 1.0);
        for (const auto& [u, v] : out.graph.edges())
            CHECK(jaccard_pair(d.features, u, v) == 1.0);
    }
    SUBCASE("monotone in the threshold") {
        auto low = jaccard_threshold_purify(d, 0.2).removed;
        auto high = jaccard_threshold_purify(d, 0.5).removed;
        for (const Edge& e : low)
            CHECK(std::find(high.begin(), high.end(), e) != high.end());
    }
    SUBCASE("out-of-range threshold rejected") {
        CHECK_THROWS_AS(jaccard_threshold_purify(d, 1.5), ConfigError);
        CHECK_THROWS_AS(jaccard_threshold_purify(d, -0.1), ConfigError);
    }
}

TEST_CASE("jaccard_lowest_k") {
    SbmParams p;
    p.n = 30;
    p.seed = 23;
    p.p_intra = 0.3;
    Dataset d = generate_sbm(p).dataset;
    int m = d.graph.edge_count();
    auto bottom = jaccard_lowest_k(d, 5);
    REQUIRE(bottom.size() == 5);
    double cutoff = jaccard_pair(d.features, bottom[4].first, bottom[4].second);
    int strictly_lower = 0;
    for (const auto& [u, v] : d.graph.edges())
        strictly_lower += jaccard_pair(d.features, u, v) < cutoff;
    CHECK(strictly_lower <= 5);
    CHECK(jaccard_lowest_k(d, m).size() == static_cast<std::size_t>(m));
    CHECK_THROWS_AS(jaccard_lowest_k(d, m + 1), DataError);
}

TEST_CASE("second_order_augment") {
    SUBCASE("path i-k-j with one dissimilar side removes the lower edge") {
        Dataset d;
        d.graph = Graph::from_edges(3, {{0, 1}, {1, 2}});
        d.features = FeatureMatrix(3, 4);
        d.features.set(0, 0, true);           // node 0: {0}
        d.features.set(1, 0, true);           // node 1: {0,1}
        d.features.set(1, 1, true);
        d.features.set(2, 2, true);           // node 2: disjoint from both
        d.labels = {{0, 0, 1}, 2};
        // J(0,2)=0 < t, intermediate 1: J(0,1)=1/2 > J(1,2)=0, remove (1,2)
        PurifyOutcome out = second_order_augment(d, 0.5);
        REQUIRE(out.removed.size() == 1);
        CHECK(out.removed[0] == Edge{1, 2});
        CHECK(out.graph.has_edge(0, 1));
    }
    SUBCASE("identical features leave the graph unchanged") {
        Dataset d;
        d.graph = Graph::from_edges(3, {{0, 1}, {1, 2}});
        d.features = FeatureMatrix(3, 2);
        for (int i = 0; i < 3; ++i) d.features.set(i, 0, true);
        d.labels = {{0, 0, 0}, 1};
        CHECK(second_order_augment(d, 1.0).graph == d.graph);
    }
    SUBCASE("no 2-hop pairs means no removals") {
        Dataset d;
        d.graph = Graph::from_edges(4, {{0, 1}, {2, 3}});
        d.features = FeatureMatrix(4, 2);
        d.features.set(0, 0, true);
        d.features.set(1, 1, true);
        d.features.set(2, 0, true);
        d.features.set(3, 1, true);
        d.labels = {{0, 1, 0, 1}, 2};
        CHECK(second_order_augment(d, 1.0).removed.empty());
    }
    SUBCASE("tie removes the (i,k) edge") {
        Dataset d;
        d.graph = Graph::from_edges(3, {{0, 1}, {1, 2}});
        d.features = FeatureMatrix(3, 4);
        d.features.set(0, 0, true);  // J(0,1) = J(1,2) = 0, J(0,2) = 0
        d.features.set(1, 1, true);
        d.features.set(2, 2, true);
        d.labels = {{0, 1, 2}, 3};
        PurifyOutcome out = second_order_augment(d, 0.5);
        REQUIRE(out.removed.size() == 1);
        CHECK(out.removed[0] == Edge{0, 1});
    }
    SUBCASE("removal count bounded by pair-intermediate incidences") {
        SbmParams p;
        p.n = 40;
        p.p_intra = 0.2;
        p.p_inter = 0.05;
        p.seed = 29;
        Dataset d = generate_sbm(p).dataset;
        double t = 0.3;
        DenseMatrix j = jaccard_matrix(d.features);
        int incidences = 0;
        for (int i = 0; i < p.n; ++i)
            for (int jn = i + 1; jn < p.n; ++jn) {
                if (j(i, jn) >= t) continue;
                for (int k : d.graph.neighbors(i))
                    incidences += d.graph.has_edge(k, jn);
            }
        PurifyOutcome out = second_order_augment(d, t);
        CHECK(static_cast<int>(out.removed.size()) <= incidences);
        CHECK(second_order_augment(d, t).removed == out.removed);  // deterministic
    }
}
