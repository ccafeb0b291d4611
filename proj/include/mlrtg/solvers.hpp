#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "mlrtg/graph.hpp"
#include "mlrtg/spectral.hpp"
#include "mlrtg/tensor.hpp"

namespace mlrtg {

// Per-mode weighted-nuclear-norm weights derived from kernelized Laplacian
// eigenvalues: values[i] = gamma * g(lambda_i) with g(lambda) = lambda^alpha,
// the spectrum normalized to unit total mass (sum of values == gamma).
// Ascending eigenvalues give ascending weights, so the i-th largest singular
// value is paired with the i-th smallest weight.
struct WeightVector {
    Eigen::VectorXd values;  // ascending, nonnegative
    double alpha = 1.0;
    double gamma = 0.0;
};

WeightVector make_weights(const Eigen::VectorXd& eigenvalues, double gamma,
                          double alpha);

struct SolverOptions {
    int max_iters = 500;
    double tol = 1e-6;   // relative objective change over `window` iterations
    int window = 5;
    double beta = 1.0;   // relaxation, must stay in [0.1, 1.9]
    double step = 0.0;   // common proximal scale; <= 0 selects the default
};

struct SolverReport {
    int iterations = 0;
    std::vector<double> objective_trace;  // incumbent objective per iteration
    std::vector<double> trace_times;      // elapsed seconds, same length
    bool converged = false;
    double tolerance_used = 0.0;
    double wall_time = 0.0;  // seconds
};

// Soft-thresholds the singular values of m: descending sigma_i shrunk by
// thresholds.values[i] (ascending). Output is the global minimizer of
// 1/2 ||Z - m||_F^2 + sum_i tau_i sigma_i(Z).
Eigen::MatrixXd weighted_svt(const Eigen::MatrixXd& m, const WeightVector& thresholds);

// Weighted nuclear norm sum_i values[i] * sigma_i (sigma descending).
double weighted_nuclear_norm(const Eigen::MatrixXd& m, const WeightVector& weights);

// Graph core tensor pursuit: min ||x_hat - X||_F^2 + sum_mu wnn_mu(X),
// solved by parallel proximal splitting (one weighted SVT per mode and the
// exact prox of the quadratic). Returns the incumbent iterate.
std::pair<DenseTensor, SolverReport> gctp(const DenseTensor& x_hat,
                                          const std::vector<WeightVector>& weights,
                                          const SolverOptions& opts = {});

// Classical multilinear SVD via truncated HOSVD + HOOI sweeps.
struct SvdFactors {
    std::vector<Eigen::MatrixXd> factors;  // column-orthonormal n_mu x r_mu
    DenseTensor core;
};

std::pair<SvdFactors, SolverReport> mlsvd(const DenseTensor& y,
                                          const std::vector<Index>& ranks,
                                          const SolverOptions& opts = {});

// Graph MLSVD: project to the graph core, denoise it with gctp, take the
// MLSVD of the core at full rank and lift the factors (V_mu = P_mu A_mu).
std::pair<SvdFactors, SolverReport> gmlsvd(const DenseTensor& y,
                                           const std::vector<GraphBasis>& bases,
                                           const std::vector<WeightVector>& weights,
                                           const SolverOptions& opts = {});

// Tensor robust PCA on graphs: min ||lift(X) - y||_1 + sum_mu wnn_mu(X).
struct TrpcagResult {
    DenseTensor core;     // X
    DenseTensor lowrank;  // lift(X)
    DenseTensor sparse;   // y - lowrank
    SolverReport report;
};

TrpcagResult trpcag(const DenseTensor& y, const std::vector<GraphBasis>& bases,
                    const std::vector<WeightVector>& weights,
                    const SolverOptions& opts = {});

// Proximal step of X -> ||lift(X) - y||_1 at scale `step`, computed with
// sequential mode products (no Kronecker matrices). This is the composition
// formula built on the bases' column orthonormality; it is the exact prox
// whenever the bases are square (the lift is then a co-isometry).
DenseTensor prox_l1_dataterm(const DenseTensor& x_core, const DenseTensor& y,
                             const std::vector<GraphBasis>& bases, double step);

}  // namespace mlrtg
