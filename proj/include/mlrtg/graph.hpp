#pragma once

#include <Eigen/Dense>

#include "mlrtg/errors.hpp"
#include "mlrtg/tensor.hpp"

namespace mlrtg {

// Symmetric k-nearest-neighbour graph with Gaussian-kernel edge weights.
struct WeightedGraph {
    Eigen::MatrixXd weights;  // symmetric, zero diagonal, entries >= 0
    int k_nn = 0;
    double kernel_width = 0.0;  // sigma actually used

    Index n() const { return weights.rows(); }
};

// First k Laplacian eigenpairs, eigenvalues ascending, columns orthonormal.
// Eigenvector signs follow a fixed convention (largest-magnitude entry
// positive, ties broken by lowest index) so results are reproducible.
struct GraphBasis {
    Eigen::MatrixXd eigenvectors;  // n x k
    Eigen::VectorXd eigenvalues;   // k, ascending

    Index n() const { return eigenvectors.rows(); }
    Index k() const { return eigenvectors.cols(); }
};

// Builds the union-symmetrized k_nn graph between the rows of `points`
// with weights w_ij = exp(-||x_i - x_j||^2 / sigma^2). When kernel_width
// is <= 0 sigma defaults to the mean distance to the k_nn-th neighbour.
// Duplicate points get weight 1. Throws TooFewPoints when m <= k_nn.
WeightedGraph knn_graph(const Eigen::MatrixXd& points, int k_nn,
                        double kernel_width = 0.0);

// L = D - W.
Eigen::MatrixXd combinatorial_laplacian(const WeightedGraph& g);

// Smallest-k eigenpairs of a symmetric PSD matrix. Dense solver up to
// `dense_threshold` rows, Lanczos beyond; identical contract either way.
GraphBasis smallest_eigs(const Eigen::MatrixXd& L, Index k,
                         Index dense_threshold = 2000);

// L1 (x) I + I (x) L2.
Eigen::MatrixXd cartesian_product_laplacian(const Eigen::MatrixXd& L1,
                                            const Eigen::MatrixXd& L2);

// lambda_{k*} / lambda_{k*+1} (0 when both vanish). Requires k_star < k.
double eigen_gap(const GraphBasis& basis, Index k_star);

// Per-mode bases for a tensor: k_nn graph between the rows of each
// matricization, combinatorial Laplacian, first k eigenpairs.
std::vector<GraphBasis> mode_graph_bases(const DenseTensor& t, Index k, int k_nn,
                                         double kernel_width = 0.0);

// Applies the deterministic sign convention to each column in place.
void normalize_signs(Eigen::MatrixXd& vectors);

}  // namespace mlrtg
