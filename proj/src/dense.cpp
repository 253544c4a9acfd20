#include "talos/dense.hpp"

#include <cmath>
#include <random>
#include <string>

#include "talos/errors.hpp"

namespace talos {

DenseMatrix adjacency_dense(const Graph& g) {
    int n = g.node_count();
    DenseMatrix a = DenseMatrix::Zero(n, n);
    for (const auto& [u, v] : g.edges()) {
        a(u, v) = 1.0;
        a(v, u) = 1.0;
    }
    return a;
}

SparseMatrix adjacency_sparse(const Graph& g) {
    int n = g.node_count();
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(2 * g.edge_count());
    for (const auto& [u, v] : g.edges()) {
        t.emplace_back(u, v, 1.0);
        t.emplace_back(v, u, 1.0);
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

DenseMatrix resolvent(const Graph& g, const ResolventConfig& cfg) {
    if (g.node_count() < 1) throw DataError("resolvent requires node_count >= 1");
    if (cfg.alpha < 0) throw NumericError("resolvent: alpha must be >= 0");
    if (cfg.neumann_tol <= 0) throw NumericError("resolvent: neumann_tol must be > 0");

    auto rho = power_iteration_rho(g);
    if (rho.value > 0 && cfg.alpha * rho.value >= 1.0)
        throw NumericError("resolvent: alpha = " + std::to_string(cfg.alpha) +
                           " is at or beyond 1/rho, rho estimate = " +
                           std::to_string(rho.value));

    int n = g.node_count();
    SparseMatrix a = adjacency_sparse(g);

    DenseMatrix m;
    if (cfg.mode == ResolventMode::exact_solve) {
        DenseMatrix system = DenseMatrix::Identity(n, n) - cfg.alpha * adjacency_dense(g);
        // I - alpha*A is SPD for alpha < 1/rho
        Eigen::LLT<DenseMatrix> llt(system);
        if (llt.info() != Eigen::Success)
            throw NumericError("resolvent: factorization failed (system not SPD)");
        m = llt.solve(DenseMatrix::Identity(n, n));
    } else {
        DenseMatrix term = DenseMatrix::Identity(n, n);
        m = term;
        for (int k = 1; k <= cfg.max_terms; ++k) {
            term = cfg.alpha * (a * term);
            m += term;
            if (term.cwiseAbs().maxCoeff() < cfg.neumann_tol) break;
        }
    }
    if (!m.allFinite()) throw NumericError("resolvent: non-finite entries in result");
    return m;
}

RhoEstimate power_iteration_rho(const Graph& g, double tol, int max_iters,
                                std::uint64_t seed) {
    if (g.node_count() < 1) throw DataError("power_iteration_rho requires node_count >= 1");
    RhoEstimate est;
    if (g.edge_count() == 0) {
        est.converged = true;
        return est;
    }
    int n = g.node_count();
    double shift = g.max_degree();
    SparseMatrix a = adjacency_sparse(g);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.1, 1.0);  // nonnegative start
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = unit(rng);
    v.normalize();

    double q_prev = 0.0;
    for (int it = 1; it <= max_iters; ++it) {
        Eigen::VectorXd w = a * v + shift * v;
        double q = v.dot(w);
        est.value = q - shift;
        est.iterations = it;
        if (it > 1 && std::abs(q - q_prev) < tol) {
            est.converged = true;
            break;
        }
        q_prev = q;
        double norm = w.norm();
        if (norm == 0) break;
        v = w / norm;
    }
    est.value = std::max(est.value, 0.0);
    return est;
}

std::optional<double> spectral_bound(const Graph& g) {
    long long n = g.node_count();
    long long m = g.edge_count();
    for (long long k = 3; k <= n; ++k) {
        long long lo = (k - 2) * (k - 3) / 2;
        long long hi = k * (k - 3) / 2;
        if (lo <= m - n && m - n <= hi) {
            double inner = 2.0 * m - 2.0 * n + 2.25;
            if (inner < 0) return std::nullopt;
            double outer = 2.0 * m - n - k + 2.5 + std::sqrt(inner);
            if (outer < 0) return std::nullopt;
            return std::sqrt(outer);
        }
    }
    return std::nullopt;
}

DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw NumericError("mat_mul: dimension mismatch " + std::to_string(a.cols()) + " vs " +
                           std::to_string(b.rows()));
    return a * b;
}

double mat_inner(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw NumericError("mat_inner: dimension mismatch");
    return a.cwiseProduct(b).sum();
}

}  // namespace talos
