#pragma once

#include <cstdint>
#include <vector>

#include "talos/dataset.hpp"
#include "talos/dense.hpp"

namespace talos {

struct GcnParams {
    int hidden_dim = 16;
    double dropout = 0.5;
    double lr = 0.01;
    double weight_decay = 5e-4;
    double momentum = 0.9;
    int max_epochs = 200;
    int patience = 30;
    std::uint64_t seed = 0;
    DenseMatrix w1;  // m x h, filled by training
    DenseMatrix w2;  // h x C
};

struct TrainResult {
    GcnParams params;
    double val_accuracy = 0.0;
    double test_accuracy = 0.0;
    int epochs_run = 0;
    std::vector<double> loss_curve;  // training loss per epoch
};

/// Symmetric normalization D^{-1/2} (A + I) D^{-1/2}; isolated nodes keep a
/// unit self-loop.
DenseMatrix normalize_adjacency(const Graph& g);
SparseMatrix normalize_adjacency_sparse(const Graph& g);

/// Two-layer GCN, full-batch momentum SGD, softmax cross entropy on the
/// train mask, early stopping on validation loss. Deterministic under
/// params.seed (weight init and dropout masks).
TrainResult gcn_train(const Dataset& d, const GcnParams& p);

/// Class probabilities for every node under trained weights (no dropout).
DenseMatrix gcn_predict_probs(const Dataset& d, const GcnParams& trained);

/// Central-difference check of the analytic gradient on sampled weight
/// coordinates, dropout disabled. Returns the max relative error.
double finite_diff_grad_check(const Dataset& d, const GcnParams& p, int samples,
                              double epsilon);

/// Parameter-free baseline: Y <- Ahat Y with train labels clamped; argmax
/// prediction, test accuracy reported.
double label_propagation(const Dataset& d, int iters, bool clamp = true);

}  // namespace talos
