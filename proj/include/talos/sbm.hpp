#pragma once

#include <cstdint>

#include "talos/dataset.hpp"

namespace talos {

struct SbmParams {
    int n = 400;
    int classes = 4;
    double p_intra = 0.05;
    double p_inter = 0.002;
    int feature_dim = 64;
    double feature_flip = 0.2;
    std::uint64_t seed = 0;
    double train_frac = 0.1;
    double val_frac = 0.1;
    bool stratified = true;
};

struct SbmResult {
    Dataset dataset;
    FeatureMatrix prototypes;  // classes x feature_dim
};

/// Stochastic block model with classes assigned round-robin. Each class gets
/// a random binary prototype of weight ceil(feature_dim / classes); node
/// features are the prototype with independent bit flips at feature_flip.
/// Bit-for-bit reproducible under seed.
SbmResult generate_sbm(const SbmParams& p);

}  // namespace talos
