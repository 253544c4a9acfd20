#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "talos/graph.hpp"

namespace talos {

using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

DenseMatrix adjacency_dense(const Graph& g);
SparseMatrix adjacency_sparse(const Graph& g);

enum class ResolventMode { exact_solve, neumann };

struct ResolventConfig {
    double alpha = 0.0;
    ResolventMode mode = ResolventMode::exact_solve;
    double neumann_tol = 1e-8;  // stop once the running term's max-norm drops below
    int max_terms = 64;
};

/// M = (I - alpha*A)^{-1}. exact_solve factorizes the dense system; neumann
/// sums alpha^k A^k until the term max-norm falls below neumann_tol or
/// max_terms is reached. Refuses alpha at or beyond the estimated 1/rho(A).
DenseMatrix resolvent(const Graph& g, const ResolventConfig& cfg);

struct RhoEstimate {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Spectral radius of A by power iteration on the diagonally shifted matrix
/// A + d_max*I (keeps the iteration convergent on bipartite spectra).
RhoEstimate power_iteration_rho(const Graph& g, double tol = 1e-10, int max_iters = 2000,
                                std::uint64_t seed = 0);

/// Edge-count spectral bound: rho <= sqrt(2m - n - k + 5/2 + sqrt(2m - 2n + 9/4))
/// with the smallest integer k in [3, n] satisfying
/// (k-2)(k-3)/2 <= m-n <= k(k-3)/2. nullopt when no such k exists (e.g.
/// forests, m < n); callers fall back to the max-degree bound.
std::optional<double> spectral_bound(const Graph& g);

DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b);
double mat_inner(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace talos
