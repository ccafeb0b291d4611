#include "mlrtg/metrics.hpp"

#include <cmath>

#include "mlrtg/errors.hpp"

namespace mlrtg {

namespace {

void check_orthonormal(const Eigen::MatrixXd& m, Index count, const char* name) {
    if (count < 1 || count > m.cols())
        throw RankError("subspace metric: count out of range");
    const Eigen::MatrixXd block = m.leftCols(count);
    const Eigen::MatrixXd gram = block.transpose() * block;
    const double dev =
        (gram - Eigen::MatrixXd::Identity(count, count)).cwiseAbs().maxCoeff();
    if (dev > 1e-6)
        throw NotOrthonormal(std::string("subspace metric: ") + name +
                             " columns not orthonormal");
}

}  // namespace

double recon_error(const DenseTensor& y, const DenseTensor& y_star) {
    if (!y.same_shape(y_star)) throw ShapeError("recon_error: shape mismatch");
    const double ref = y_star.norm();
    if (ref == 0.0) throw ZeroInput("recon_error: zero reference tensor");
    return (y.data() - y_star.data()).norm() / ref;
}

double singular_value_error(const DenseTensor& y, const DenseTensor& y_star,
                            int mode, Index k_star) {
    if (!y.same_shape(y_star)) throw ShapeError("singular_value_error: shape mismatch");
    const ModeMatrix a = matricize(y, mode);
    const ModeMatrix b = matricize(y_star, mode);
    const Index maxr = std::min(a.data.rows(), a.data.cols());
    if (k_star < 1 || k_star > maxr)
        throw RankError("singular_value_error: k_star out of range");
    Eigen::JacobiSVD<Eigen::MatrixXd> sa(a.data);
    Eigen::JacobiSVD<Eigen::MatrixXd> sb(b.data);
    const Eigen::VectorXd va = sa.singularValues().head(k_star);
    const Eigen::VectorXd vb = sb.singularValues().head(k_star);
    const double ref = vb.norm();
    if (ref == 0.0) throw ZeroInput("singular_value_error: zero reference spectrum");
    return (va - vb).norm() / ref;
}

double subspace_angle(const Eigen::MatrixXd& V, const Eigen::MatrixXd& U, Index count) {
    check_orthonormal(V, count, "first argument");
    check_orthonormal(U, count, "second argument");
    const Eigen::MatrixXd v = V.leftCols(count);
    const Eigen::MatrixXd u = U.leftCols(count);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(v.transpose() * u);
    const double c = std::clamp(svd.singularValues().minCoeff(), -1.0, 1.0);
    // acos loses all resolution below ~1e-8; switch to the sine form there
    // (sin of the largest angle = largest singular value of (I - UU^T)V).
    if (c * c <= 0.5) return std::acos(c);
    const Eigen::MatrixXd resid = v - u * (u.transpose() * v);
    Eigen::JacobiSVD<Eigen::MatrixXd> ssvd(resid);
    const double s = std::clamp(ssvd.singularValues().maxCoeff(), 0.0, 1.0);
    return std::asin(s);
}

Eigen::VectorXd alignment_diag(const Eigen::MatrixXd& V, const Eigen::MatrixXd& U,
                               Index count) {
    check_orthonormal(V, count, "first argument");
    check_orthonormal(U, count, "second argument");
    Eigen::VectorXd out(count);
    for (Index i = 0; i < count; ++i)
        out[i] = std::abs(V.col(i).dot(U.col(i)));
    return out;
}

}  // namespace mlrtg
