#include "mlrtg/tensor.hpp"

namespace mlrtg {

namespace {

// Product of dims strictly before / strictly after the (0-based) axis.
std::pair<Index, Index> split_counts(const Shape& s, int axis) {
    Index inner = 1, outer = 1;
    for (int j = 0; j < axis; ++j) inner *= s[static_cast<std::size_t>(j)];
    for (int j = axis + 1; j < static_cast<int>(s.size()); ++j)
        outer *= s[static_cast<std::size_t>(j)];
    return {inner, outer};
}

}  // namespace

ModeMatrix matricize(const DenseTensor& t, int mode) {
    if (mode < 1 || mode > t.order()) throw InvalidMode("matricize: mode out of range");
    const int axis = mode - 1;
    const Index n = t.shape()[static_cast<std::size_t>(axis)];
    const auto [inner, outer] = split_counts(t.shape(), axis);

    ModeMatrix out;
    out.mode = mode;
    out.data.resize(n, inner * outer);
    const double* src = t.data().data();
    for (Index o = 0; o < outer; ++o) {
        for (Index i = 0; i < n; ++i) {
            const double* run = src + inner * (i + n * o);
            for (Index in = 0; in < inner; ++in)
                out.data(i, in + inner * o) = run[in];
        }
    }
    return out;
}

DenseTensor fold(const ModeMatrix& m, int mode, const Shape& shape) {
    if (mode < 1 || mode > static_cast<int>(shape.size()))
        throw InvalidMode("fold: mode out of range");
    const int axis = mode - 1;
    const Index n = shape[static_cast<std::size_t>(axis)];
    const auto [inner, outer] = split_counts(shape, axis);
    if (m.data.rows() != n || m.data.cols() != inner * outer)
        throw ShapeError("fold: matrix dimensions inconsistent with shape/mode");

    DenseTensor t(shape);
    double* dst = t.data().data();
    for (Index o = 0; o < outer; ++o) {
        for (Index i = 0; i < n; ++i) {
            double* run = dst + inner * (i + n * o);
            for (Index in = 0; in < inner; ++in)
                run[in] = m.data(i, in + inner * o);
        }
    }
    return t;
}

DenseTensor mode_product(const DenseTensor& t, int mode, const Eigen::MatrixXd& A) {
    if (mode < 1 || mode > t.order()) throw InvalidMode("mode_product: mode out of range");
    if (A.cols() != t.dim(mode))
        throw ShapeError("mode_product: matrix columns must match mode size");
    Shape out_shape = t.shape();
    out_shape[static_cast<std::size_t>(mode - 1)] = A.rows();

    // The first and last modes are plain reshapes of the linearized data, so
    // their products are single GEMMs with no gather/scatter pass.
    if (mode == 1) {
        DenseTensor out(out_shape);
        const Index rest = t.size() / t.dim(1);
        Eigen::Map<Eigen::MatrixXd>(out.data().data(), A.rows(), rest).noalias() =
            A * Eigen::Map<const Eigen::MatrixXd>(t.data().data(), t.dim(1), rest);
        return out;
    }
    if (mode == t.order()) {
        DenseTensor out(out_shape);
        const Index rest = t.size() / t.dim(mode);
        Eigen::Map<Eigen::MatrixXd>(out.data().data(), rest, A.rows()).noalias() =
            Eigen::Map<const Eigen::MatrixXd>(t.data().data(), rest, t.dim(mode)) *
            A.transpose();
        return out;
    }

    ModeMatrix m = matricize(t, mode);
    m.data = A * m.data;
    return fold(m, mode, out_shape);
}

DenseTensor multilinear_transform(const DenseTensor& x,
                                  const std::vector<Eigen::MatrixXd>& mats,
                                  bool transpose) {
    if (static_cast<int>(mats.size()) != x.order())
        throw ShapeError("multilinear_transform: one matrix per mode required");
    DenseTensor out = x;
    for (int mu = 1; mu <= x.order(); ++mu) {
        const Eigen::MatrixXd& A = mats[static_cast<std::size_t>(mu - 1)];
        if (transpose)
            out = mode_product(out, mu, A.transpose());
        else
            out = mode_product(out, mu, A);
    }
    return out;
}

}  // namespace mlrtg
