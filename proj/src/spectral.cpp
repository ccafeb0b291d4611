#include "mlrtg/spectral.hpp"

namespace mlrtg {

namespace {

std::vector<Eigen::MatrixXd> basis_matrices(const std::vector<GraphBasis>& bases) {
    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(bases.size());
    for (const GraphBasis& b : bases) mats.push_back(b.eigenvectors);
    return mats;
}

}  // namespace

GscMatrix gsc(const ModeMatrix& y_mode, const GraphBasis& basis) {
    if (basis.n() != y_mode.data.rows())
        throw ShapeError("gsc: basis vertex count must match matricization rows");
    GscMatrix out;
    out.mode = y_mode.mode;
    out.vertex_count = y_mode.data.rows();
    out.basis_size_used = basis.k();
    // P^T Y first: avoids the n x n covariance when the basis is partial.
    const Eigen::MatrixXd z = basis.eigenvectors.transpose() * y_mode.data;
    out.gamma = z * z.transpose();
    const Eigen::MatrixXd c = y_mode.data * y_mode.data.transpose();
    out.c_norm_sq = c.squaredNorm();
    return out;
}

double stationarity_ratio(const GscMatrix& g) {
    const double total = g.gamma.squaredNorm();
    if (total == 0.0) throw ZeroInput("stationarity_ratio: zero GSC matrix");
    return g.gamma.diagonal().squaredNorm() / total;
}

double energy_concentration(const GscMatrix& g, Index k) {
    if (k < 1 || k > g.basis_size_used)
        throw RankError("energy_concentration: k out of range");
    const double top = g.gamma.topLeftCorner(k, k).squaredNorm();
    const bool full_basis = g.basis_size_used == g.vertex_count;
    const double total = full_basis ? g.gamma.squaredNorm() : g.c_norm_sq;
    if (total == 0.0) throw ZeroInput("energy_concentration: zero GSC matrix");
    return top / total;
}

DenseTensor GctDecomposition::reconstruct() const {
    return lift_core(core, bases);
}

DenseTensor lift_core(const DenseTensor& core, const std::vector<GraphBasis>& bases) {
    return multilinear_transform(core, basis_matrices(bases), /*transpose=*/false);
}

GctDecomposition project_gct(const DenseTensor& y, const std::vector<GraphBasis>& bases) {
    if (static_cast<int>(bases.size()) != y.order())
        throw ShapeError("project_gct: one basis per mode required");
    for (int mu = 1; mu <= y.order(); ++mu)
        if (bases[static_cast<std::size_t>(mu - 1)].n() != y.dim(mu))
            throw ShapeError("project_gct: basis vertex count mismatch");

    GctDecomposition d;
    d.bases = bases;
    d.core = multilinear_transform(y, basis_matrices(bases), /*transpose=*/true);
    DenseTensor rec = d.reconstruct();
    d.residual_norm = (y.data() - rec.data()).norm();
    return d;
}

}  // namespace mlrtg
