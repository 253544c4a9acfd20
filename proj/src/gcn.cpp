#include "talos/gcn.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "talos/errors.hpp"

namespace talos {
namespace {

DenseMatrix softmax_rows(const DenseMatrix& z) {
    DenseMatrix p = z;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        double mx = p.row(i).maxCoeff();
        p.row(i) = (p.row(i).array() - mx).exp();
        p.row(i) /= p.row(i).sum();
    }
    return p;
}

DenseMatrix one_hot(const LabelVector& l) {
    DenseMatrix y = DenseMatrix::Zero(l.labels.size(), l.class_count);
    for (std::size_t i = 0; i < l.labels.size(); ++i) y(i, l.labels[i]) = 1.0;
    return y;
}

double accuracy_on(const DenseMatrix& p, const std::vector<int>& mask,
                   const std::vector<int>& labels) {
    if (mask.empty()) return 0.0;
    int hit = 0;
    for (int i : mask) {
        int arg = 0;
        for (Eigen::Index c = 1; c < p.cols(); ++c)
            if (p(i, c) > p(i, arg)) arg = static_cast<int>(c);  // ties keep smallest
        hit += arg == labels[i];
    }
    return static_cast<double>(hit) / mask.size();
}

struct Workspace {
    SparseMatrix ahat;
    DenseMatrix x, y;
};

struct Grads {
    double loss = 0.0;
    DenseMatrix dw1, dw2;
};

// Forward + backward for one full batch. `mask_scale` is the inverted-dropout
// mask (entries 0 or 1/(1-p)); pass an all-ones matrix for evaluation.
Grads loss_and_grads(const Workspace& ws, const GcnParams& p, const DenseMatrix& w1,
                     const DenseMatrix& w2, const std::vector<int>& mask,
                     const DenseMatrix& mask_scale, bool want_grads) {
    DenseMatrix h0 = ws.ahat * (ws.x * w1);
    DenseMatrix h1 = h0.cwiseMax(0.0);
    DenseMatrix hd = h1.cwiseProduct(mask_scale);
    DenseMatrix z = ws.ahat * (hd * w2);
    DenseMatrix prob = softmax_rows(z);

    Grads g;
    double inv = 1.0 / mask.size();
    for (int i : mask) {
        int y = 0;
        for (Eigen::Index c = 0; c < ws.y.cols(); ++c)
            if (ws.y(i, c) > 0.5) y = static_cast<int>(c);
        g.loss -= inv * std::log(std::max(prob(i, y), 1e-300));
    }
    g.loss += 0.5 * p.weight_decay * (w1.squaredNorm() + w2.squaredNorm());

    if (want_grads) {
        DenseMatrix dz = DenseMatrix::Zero(z.rows(), z.cols());
        for (int i : mask) dz.row(i) = inv * (prob.row(i) - ws.y.row(i));
        DenseMatrix dhw = ws.ahat * dz;  // Ahat is symmetric
        g.dw2 = hd.transpose() * dhw + p.weight_decay * w2;
        DenseMatrix dhd = dhw * w2.transpose();
        DenseMatrix dh1 = dhd.cwiseProduct(mask_scale);
        DenseMatrix dh0 =
            dh1.cwiseProduct((h0.array() > 0.0).cast<double>().matrix());
        g.dw1 = ws.x.transpose() * (ws.ahat * dh0) + p.weight_decay * w1;
    }
    return g;
}

DenseMatrix glorot(int rows, int cols, std::mt19937_64& rng) {
    double s = std::sqrt(6.0 / (rows + cols));
    std::uniform_real_distribution<double> u(-s, s);
    DenseMatrix w(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) w(i, j) = u(rng);
    return w;
}

Workspace make_workspace(const Dataset& d) {
    Workspace ws;
    ws.ahat = normalize_adjacency_sparse(d.graph);
    ws.x = d.features.to_dense();
    ws.y = one_hot(d.labels);
    return ws;
}

DenseMatrix forward_probs(const Workspace& ws, const DenseMatrix& w1, const DenseMatrix& w2) {
    DenseMatrix h1 = (ws.ahat * (ws.x * w1)).cwiseMax(0.0);
    return softmax_rows(ws.ahat * (h1 * w2));
}

}  // namespace

DenseMatrix normalize_adjacency(const Graph& g) {
    return DenseMatrix(normalize_adjacency_sparse(g));
}

SparseMatrix normalize_adjacency_sparse(const Graph& g) {
    int n = g.node_count();
    std::vector<double> dinv(n);
    for (int i = 0; i < n; ++i) dinv[i] = 1.0 / std::sqrt(g.degree(i) + 1.0);
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(2 * g.edge_count() + n);
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, dinv[i] * dinv[i]);
    for (const auto& [u, v] : g.edges()) {
        double w = dinv[u] * dinv[v];
        t.emplace_back(u, v, w);
        t.emplace_back(v, u, w);
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

TrainResult gcn_train(const Dataset& d, const GcnParams& p) {
    if (d.split.train.empty()) throw DataError("gcn_train: empty train mask");
    if (d.split.val.empty()) throw DataError("gcn_train: empty val mask");
    if (p.hidden_dim < 1 || p.dropout < 0 || p.dropout >= 1 || p.lr <= 0)
        throw ConfigError("gcn_train: invalid hyperparameters");

    Workspace ws = make_workspace(d);
    int m = d.features.feature_dim();
    int c = d.labels.class_count;
    int n = d.graph.node_count();

    std::mt19937_64 rng(p.seed);
    DenseMatrix w1 = glorot(m, p.hidden_dim, rng);
    DenseMatrix w2 = glorot(p.hidden_dim, c, rng);
    DenseMatrix v1 = DenseMatrix::Zero(m, p.hidden_dim);
    DenseMatrix v2 = DenseMatrix::Zero(p.hidden_dim, c);
    DenseMatrix eval_mask = DenseMatrix::Ones(n, p.hidden_dim);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double keep = 1.0 - p.dropout;

    TrainResult r;
    DenseMatrix best_w1 = w1, best_w2 = w2;
    double best_val = std::numeric_limits<double>::infinity();
    int stale = 0;

    for (int epoch = 0; epoch < p.max_epochs; ++epoch) {
        DenseMatrix drop = eval_mask;
        if (p.dropout > 0)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < p.hidden_dim; ++j)
                    drop(i, j) = unit(rng) < p.dropout ? 0.0 : 1.0 / keep;

        Grads g = loss_and_grads(ws, p, w1, w2, d.split.train, drop, true);
        if (!std::isfinite(g.loss))
            throw NumericError("gcn_train: divergent loss at epoch " + std::to_string(epoch));
        r.loss_curve.push_back(g.loss);
        r.epochs_run = epoch + 1;

        v1 = p.momentum * v1 - p.lr * g.dw1;
        v2 = p.momentum * v2 - p.lr * g.dw2;
        w1 += v1;
        w2 += v2;

        double val_loss =
            loss_and_grads(ws, p, w1, w2, d.split.val, eval_mask, false).loss;
        if (val_loss < best_val) {
            best_val = val_loss;
            best_w1 = w1;
            best_w2 = w2;
            stale = 0;
        } else if (++stale > p.patience) {
            break;
        }
    }

    r.params = p;
    r.params.w1 = best_w1;
    r.params.w2 = best_w2;
    DenseMatrix prob = forward_probs(ws, best_w1, best_w2);
    r.val_accuracy = accuracy_on(prob, d.split.val, d.labels.labels);
    r.test_accuracy = accuracy_on(prob, d.split.test, d.labels.labels);
    return r;
}

DenseMatrix gcn_predict_probs(const Dataset& d, const GcnParams& trained) {
    if (trained.w1.size() == 0 || trained.w2.size() == 0)
        throw DataError("gcn_predict_probs: untrained parameters");
    Workspace ws = make_workspace(d);
    return forward_probs(ws, trained.w1, trained.w2);
}

double finite_diff_grad_check(const Dataset& d, const GcnParams& p, int samples,
                              double epsilon) {
    if (d.split.train.empty()) throw DataError("grad check: empty train mask");
    Workspace ws = make_workspace(d);
    int m = d.features.feature_dim();
    int c = d.labels.class_count;
    int n = d.graph.node_count();

    GcnParams q = p;
    q.dropout = 0.0;
    std::mt19937_64 rng(p.seed);
    DenseMatrix w1 = glorot(m, q.hidden_dim, rng);
    DenseMatrix w2 = glorot(q.hidden_dim, c, rng);
    DenseMatrix ones = DenseMatrix::Ones(n, q.hidden_dim);

    Grads g = loss_and_grads(ws, q, w1, w2, d.split.train, ones, true);

    auto loss_at = [&](const DenseMatrix& a, const DenseMatrix& b) {
        return loss_and_grads(ws, q, a, b, d.split.train, ones, false).loss;
    };

    double worst = 0.0;
    std::uniform_int_distribution<int> which(0, 1);
    for (int s = 0; s < samples; ++s) {
        bool first = which(rng) == 0;
        DenseMatrix& w = first ? w1 : w2;
        const DenseMatrix& analytic = first ? g.dw1 : g.dw2;
        int i = std::uniform_int_distribution<int>(0, static_cast<int>(w.rows()) - 1)(rng);
        int j = std::uniform_int_distribution<int>(0, static_cast<int>(w.cols()) - 1)(rng);
        double orig = w(i, j);
        w(i, j) = orig + epsilon;
        double up = loss_at(w1, w2);
        w(i, j) = orig - epsilon;
        double down = loss_at(w1, w2);
        w(i, j) = orig;
        double numeric = (up - down) / (2 * epsilon);
        double rel = std::abs(analytic(i, j) - numeric) /
                     std::max({1e-8, std::abs(analytic(i, j)), std::abs(numeric)});
        worst = std::max(worst, rel);
    }
    return worst;
}

double label_propagation(const Dataset& d, int iters, bool clamp) {
    if (iters < 1) throw ConfigError("label_propagation: iters must be >= 1");
    SparseMatrix ahat = normalize_adjacency_sparse(d.graph);
    DenseMatrix y = DenseMatrix::Zero(d.graph.node_count(), d.labels.class_count);
    for (int i : d.split.train) y(i, d.labels.labels[i]) = 1.0;
    DenseMatrix clamped = y;
    for (int it = 0; it < iters; ++it) {
        y = ahat * y;
        if (clamp)
            for (int i : d.split.train) y.row(i) = clamped.row(i);
    }
    return accuracy_on(y, d.split.test, d.labels.labels);
}

}  // namespace talos
