#include "talos/sbm.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "talos/errors.hpp"

namespace talos {

SbmResult generate_sbm(const SbmParams& p) {
    if (p.classes < 1) throw ConfigError("sbm: classes must be >= 1");
    if (p.n < p.classes) throw ConfigError("sbm: n must be >= classes");
    if (p.p_inter < 0 || p.p_inter > p.p_intra || p.p_intra > 1)
        throw ConfigError("sbm: need 0 <= p_inter <= p_intra <= 1");
    if (p.feature_flip < 0 || p.feature_flip >= 0.5)
        throw ConfigError("sbm: feature_flip must be in [0, 0.5)");

    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SbmResult out;
    auto& d = out.dataset;
    d.labels.class_count = p.classes;
    d.labels.labels.resize(p.n);
    for (int i = 0; i < p.n; ++i) d.labels.labels[i] = i % p.classes;

    std::vector<Edge> edges;
    for (int u = 0; u < p.n; ++u)
        for (int v = u + 1; v < p.n; ++v) {
            double prob = d.labels.labels[u] == d.labels.labels[v] ? p.p_intra : p.p_inter;
            if (unit(rng) < prob) edges.emplace_back(u, v);
        }
    d.graph = Graph::from_edges(p.n, edges);

    int weight = (p.feature_dim + p.classes - 1) / p.classes;
    weight = std::min(weight, p.feature_dim);
    out.prototypes = FeatureMatrix(p.classes, p.feature_dim);
    std::vector<int> positions(p.feature_dim);
    for (int c = 0; c < p.classes; ++c) {
        std::iota(positions.begin(), positions.end(), 0);
        std::shuffle(positions.begin(), positions.end(), rng);
        for (int k = 0; k < weight; ++k) out.prototypes.set(c, positions[k], true);
    }

    d.features = FeatureMatrix(p.n, p.feature_dim);
    for (int i = 0; i < p.n; ++i) {
        int c = d.labels.labels[i];
        for (int f = 0; f < p.feature_dim; ++f) {
            bool bit = out.prototypes.get(c, f);
            if (unit(rng) < p.feature_flip) bit = !bit;
            if (bit) d.features.set(i, f, true);
        }
    }

    d.split = make_split(d.labels, p.train_frac, p.val_frac, p.seed, p.stratified);
    return out;
}

}  // namespace talos
