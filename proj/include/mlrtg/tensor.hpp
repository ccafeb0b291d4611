#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mlrtg/errors.hpp"

namespace mlrtg {

using Index = Eigen::Index;
using Shape = std::vector<Index>;

// Dense real tensor of order d >= 2.
//
// Linearization convention (used everywhere, including the DTF1 file format):
// mode 1 varies fastest, mode d slowest, i.e. the flat index of element
// (i_1, ..., i_d) is  i_1 + n_1*(i_2 + n_2*(i_3 + ...)).  For d = 2 this is
// column-major storage of an n_1 x n_2 matrix, so vec() of a matrix stacks
// its columns.
class DenseTensor {
public:
    DenseTensor() = default;

    explicit DenseTensor(Shape shape) : shape_(std::move(shape)) {
        validate_shape(shape_);
        data_ = Eigen::VectorXd::Zero(count(shape_));
    }

    DenseTensor(Shape shape, Eigen::VectorXd data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        validate_shape(shape_);
        if (data_.size() != count(shape_))
            throw ShapeError("tensor data length does not match shape");
    }

    int order() const { return static_cast<int>(shape_.size()); }
    const Shape& shape() const { return shape_; }
    // Size of (1-based) mode mu.
    Index dim(int mu) const {
        if (mu < 1 || mu > order()) throw InvalidMode("mode out of range");
        return shape_[static_cast<std::size_t>(mu - 1)];
    }
    Index size() const { return data_.size(); }

    const Eigen::VectorXd& data() const { return data_; }
    Eigen::VectorXd& data() { return data_; }

    double norm() const { return data_.norm(); }

    static Index count(const Shape& s) {
        Index p = 1;
        for (Index n : s) p *= n;
        return p;
    }

    bool same_shape(const DenseTensor& other) const { return shape_ == other.shape_; }

private:
    static void validate_shape(const Shape& s) {
        if (s.size() < 2) throw ShapeError("tensor order must be >= 2");
        for (Index n : s)
            if (n < 1) throw ShapeError("tensor dimensions must be >= 1");
    }

    Shape shape_;
    Eigen::VectorXd data_;
};

// Mode-mu matricization. Row i holds the mode-mu fibers; columns enumerate
// the remaining modes in ascending order with the first-listed varying
// fastest (so for mode 1 the matrix is the tensor's native column-major
// layout reshaped to n_1 x (N/n_1)).
struct ModeMatrix {
    int mode = 0;
    Eigen::MatrixXd data;
};

ModeMatrix matricize(const DenseTensor& t, int mode);
DenseTensor fold(const ModeMatrix& m, int mode, const Shape& shape);

// t x_mode A  (classical mode product; A has n_mu columns).
DenseTensor mode_product(const DenseTensor& t, int mode, const Eigen::MatrixXd& A);

// Applies mats[mu-1] (or its transpose) along every mode, as sequential mode
// products; never materializes a Kronecker-product matrix. With column-major
// vec this equals (A_d (x) ... (x) A_1) vec(x).
DenseTensor multilinear_transform(const DenseTensor& x,
                                  const std::vector<Eigen::MatrixXd>& mats,
                                  bool transpose = false);

}  // namespace mlrtg
