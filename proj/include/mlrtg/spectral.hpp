#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mlrtg/graph.hpp"
#include "mlrtg/tensor.hpp"

namespace mlrtg {

// Graph spectral covariance Gamma = P^T (Y_mu Y_mu^T) P of one matricization.
// `c_norm_sq` keeps ||C||_F^2 so the concentration ratio stays meaningful
// when only a partial basis (k < n) was used.
struct GscMatrix {
    int mode = 0;
    Eigen::MatrixXd gamma;
    Index basis_size_used = 0;  // columns of P used
    Index vertex_count = 0;     // rows of Y_mu
    double c_norm_sq = 0.0;     // ||Y_mu Y_mu^T||_F^2
};

GscMatrix gsc(const ModeMatrix& y_mode, const GraphBasis& basis);

// ||diag(Gamma)||_F^2 / ||Gamma||_F^2; 1 means perfectly stationary.
double stationarity_ratio(const GscMatrix& g);

// Frobenius energy of the leading k x k block over the total. With a full
// basis the denominator is ||Gamma||_F^2; with a partial basis it falls back
// to ||C||_F^2 (the congruence no longer conserves energy).
double energy_concentration(const GscMatrix& g, Index k);

// Graph core tensor: X = Y x_mu P_mu^T plus the bases that lift it back.
struct GctDecomposition {
    DenseTensor core;
    std::vector<GraphBasis> bases;
    double residual_norm = 0.0;

    DenseTensor reconstruct() const;
};

GctDecomposition project_gct(const DenseTensor& y, const std::vector<GraphBasis>& bases);

// Convenience: lift a core-sized tensor back through the bases.
DenseTensor lift_core(const DenseTensor& core, const std::vector<GraphBasis>& bases);

}  // namespace mlrtg
