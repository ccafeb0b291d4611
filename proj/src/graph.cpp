#include "mlrtg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mlrtg/rng.hpp"

namespace mlrtg {

WeightedGraph knn_graph(const Eigen::MatrixXd& points, int k_nn, double kernel_width) {
    const Index m = points.rows();
    if (m <= k_nn) throw TooFewPoints("knn_graph: need more points than k_nn");
    if (k_nn < 1) throw TooFewPoints("knn_graph: k_nn must be >= 1");

    // Exact brute-force squared distances.
    Eigen::VectorXd sq = points.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = sq.replicate(1, m) + sq.transpose().replicate(m, 1)
                         - 2.0 * (points * points.transpose());
    d2 = d2.cwiseMax(0.0);

    // k_nn nearest neighbours per row, ties broken by lowest index.
    std::vector<std::vector<Index>> nbrs(static_cast<std::size_t>(m));
    double mean_kth = 0.0;
    std::vector<Index> order(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
        std::iota(order.begin(), order.end(), Index{0});
        auto cmp = [&](Index a, Index b) {
            if (d2(i, a) != d2(i, b)) return d2(i, a) < d2(i, b);
            return a < b;
        };
        order.erase(std::remove(order.begin(), order.end(), i), order.end());
        std::partial_sort(order.begin(), order.begin() + k_nn, order.end(), cmp);
        nbrs[static_cast<std::size_t>(i)].assign(order.begin(), order.begin() + k_nn);
        mean_kth += std::sqrt(d2(i, order[static_cast<std::size_t>(k_nn - 1)]));
        order.push_back(i);
    }
    mean_kth /= static_cast<double>(m);

    double sigma = kernel_width > 0.0 ? kernel_width : mean_kth;
    if (sigma <= 0.0) sigma = 1.0;  // all points coincide

    WeightedGraph g;
    g.k_nn = k_nn;
    g.kernel_width = sigma;
    g.weights = Eigen::MatrixXd::Zero(m, m);
    const double inv_s2 = 1.0 / (sigma * sigma);
    for (Index i = 0; i < m; ++i) {
        for (Index j : nbrs[static_cast<std::size_t>(i)]) {
            const double w = std::exp(-d2(i, j) * inv_s2);
            g.weights(i, j) = std::max(g.weights(i, j), w);
            g.weights(j, i) = g.weights(i, j);
        }
    }
    return g;
}

Eigen::MatrixXd combinatorial_laplacian(const WeightedGraph& g) {
    Eigen::MatrixXd L = -g.weights;
    L.diagonal() += g.weights.rowwise().sum();
    return L;
}

void normalize_signs(Eigen::MatrixXd& vectors) {
    for (Index c = 0; c < vectors.cols(); ++c) {
        Index arg = 0;
        double best = -1.0;
        for (Index r = 0; r < vectors.rows(); ++r) {
            const double a = std::abs(vectors(r, c));
            if (a > best) {
                best = a;
                arg = r;
            }
        }
        if (vectors(arg, c) < 0.0) vectors.col(c) = -vectors.col(c);
    }
}

namespace {

GraphBasis dense_smallest(const Eigen::MatrixXd& L, Index k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    if (es.info() != Eigen::Success)
        throw NumericError("smallest_eigs: dense eigensolver failed");
    GraphBasis b;
    b.eigenvalues = es.eigenvalues().head(k);
    b.eigenvectors = es.eigenvectors().leftCols(k);
    normalize_signs(b.eigenvectors);
    return b;
}

// Lanczos with full reorthogonalization on B = cI - L (Gershgorin shift),
// so the smallest eigenvalues of L become the dominant ones of B.
GraphBasis lanczos_smallest(const Eigen::MatrixXd& L, Index k) {
    const Index n = L.rows();
    const double shift = (L.diagonal().array().abs()
                          + (L.cwiseAbs().rowwise().sum().array()
                             - L.diagonal().array().abs()))
                             .maxCoeff();

    // Deterministic start vector (CounterRng stream 0 of a fixed seed).
    CounterRng rng(0x6d6c727467ULL, 0);
    Eigen::VectorXd v0(n);
    for (Index i = 0; i < n; ++i) v0[i] = rng.normal(static_cast<std::uint64_t>(i));
    v0.normalize();

    const double tol = 1e-10 * std::max(1.0, L.norm());
    Index m = std::min<Index>(n, std::max<Index>(2 * k + 30, 60));
    while (true) {
        Eigen::MatrixXd V(n, m);
        Eigen::VectorXd alpha(m), beta(m);
        V.col(0) = v0;
        Index steps = m;
        for (Index j = 0; j < m; ++j) {
            Eigen::VectorXd w = shift * V.col(j) - L * V.col(j);
            alpha[j] = V.col(j).dot(w);
            w -= alpha[j] * V.col(j);
            if (j > 0) w -= beta[j - 1] * V.col(j - 1);
            // Twice-is-enough reorthogonalization against the whole block.
            w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
            w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
            beta[j] = w.norm();
            if (j + 1 < m) {
                if (beta[j] < 1e-14 * std::max(1.0, shift)) {
                    steps = j + 1;  // invariant subspace found
                    break;
                }
                V.col(j + 1) = w / beta[j];
            }
        }

        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
        for (Index j = 0; j < steps; ++j) {
            T(j, j) = alpha[j];
            if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta[j];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        // Largest Ritz values of B = smallest of L.
        GraphBasis b;
        b.eigenvalues.resize(k);
        b.eigenvectors.resize(n, k);
        bool ok = steps >= k;
        if (ok) {
            for (Index i = 0; i < k; ++i) {
                const Index src = steps - 1 - i;
                b.eigenvalues[i] = shift - es.eigenvalues()[src];
                b.eigenvectors.col(i) = V.leftCols(steps) * es.eigenvectors().col(src);
                b.eigenvectors.col(i).normalize();
                const double resid =
                    (L * b.eigenvectors.col(i) - b.eigenvalues[i] * b.eigenvectors.col(i))
                        .norm();
                if (resid > tol) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok || steps >= n) {
            if (!ok) return dense_smallest(L, k);  // exhausted: exact fallback
            normalize_signs(b.eigenvectors);
            return b;
        }
        m = std::min<Index>(n, 2 * m);
    }
}

}  // namespace

GraphBasis smallest_eigs(const Eigen::MatrixXd& L, Index k, Index dense_threshold) {
    const Index n = L.rows();
    if (L.cols() != n) throw ShapeError("smallest_eigs: matrix must be square");
    if (k < 1 || k > n) throw RankError("smallest_eigs: k out of range");
    if (n <= dense_threshold) return dense_smallest(L, k);
    return lanczos_smallest(L, k);
}

Eigen::MatrixXd cartesian_product_laplacian(const Eigen::MatrixXd& L1,
                                            const Eigen::MatrixXd& L2) {
    const Index n1 = L1.rows(), n2 = L2.rows();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n1 * n2, n1 * n2);
    for (Index a = 0; a < n1; ++a)
        for (Index b = 0; b < n1; ++b)
            if (L1(a, b) != 0.0)
                out.block(a * n2, b * n2, n2, n2).diagonal().array() += L1(a, b);
    for (Index a = 0; a < n1; ++a) out.block(a * n2, a * n2, n2, n2) += L2;
    return out;
}

double eigen_gap(const GraphBasis& basis, Index k_star) {
    if (k_star < 1 || k_star >= basis.k())
        throw RankError("eigen_gap: need 1 <= k_star < k");
    const double lo = basis.eigenvalues[k_star - 1];
    const double hi = basis.eigenvalues[k_star];
    if (hi == 0.0) return 0.0;  // ascending order forces lo == 0 too
    return lo / hi;
}

std::vector<GraphBasis> mode_graph_bases(const DenseTensor& t, Index k, int k_nn,
                                         double kernel_width) {
    std::vector<GraphBasis> bases;
    bases.reserve(static_cast<std::size_t>(t.order()));
    for (int mu = 1; mu <= t.order(); ++mu) {
        if (k > t.dim(mu)) throw RankError("mode_graph_bases: k exceeds mode size");
        const ModeMatrix ym = matricize(t, mu);
        const WeightedGraph g = knn_graph(ym.data, k_nn, kernel_width);
        bases.push_back(smallest_eigs(combinatorial_laplacian(g), k));
    }
    return bases;
}

}  // namespace mlrtg
