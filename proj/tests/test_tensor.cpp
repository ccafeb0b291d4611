#include "mlrtg/tensor.hpp"

#include "doctest.h"
#include "test_helpers.hpp"

using namespace mlrtg;
using namespace mlrtg::testing;

TEST_CASE("matricize of an order-2 tensor along mode 1 is the matrix itself") {
    DenseTensor t = iota_tensor({2, 2});
    const ModeMatrix m = matricize(t, 1);
    CHECK(m.data(0, 0) == 1.0);
    CHECK(m.data(1, 0) == 2.0);
    CHECK(m.data(0, 1) == 3.0);
    CHECK(m.data(1, 1) == 4.0);
}

TEST_CASE("matricize matches the index-map oracle") {
    // Frozen from the oracle: 2x2x2 with entries 1..8, mode 2.
    DenseTensor t = iota_tensor({2, 2, 2});
    const ModeMatrix m = matricize(t, 2);
    Eigen::MatrixXd expected(2, 4);
    expected << 1, 2, 5, 6,
                3, 4, 7, 8;
    CHECK((m.data - expected).cwiseAbs().maxCoeff() == 0.0);

    for (const Shape& shape : {Shape{3, 4, 5}, Shape{2, 3, 2, 4}, Shape{7, 2}}) {
        DenseTensor r = random_tensor(shape, 11);
        for (int mu = 1; mu <= r.order(); ++mu) {
            const ModeMatrix got = matricize(r, mu);
            CHECK((got.data - matricize_oracle(r, mu)).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("matricize rejects out-of-range modes") {
    DenseTensor t = iota_tensor({2, 3});
    CHECK_THROWS_AS(matricize(t, 0), InvalidMode);
    CHECK_THROWS_AS(matricize(t, 3), InvalidMode);
}

TEST_CASE("fold inverts matricize bit-exactly") {
    DenseTensor t = random_tensor({3, 4, 5}, 5);
    for (int mu = 1; mu <= 3; ++mu) {
        const DenseTensor back = fold(matricize(t, mu), mu, t.shape());
        CHECK(back.data() == t.data());
    }
}

TEST_CASE("fold of zeros gives zeros; shape mismatch throws") {
    ModeMatrix zero;
    zero.mode = 1;
    zero.data = Eigen::MatrixXd::Zero(3, 8);
    const DenseTensor t = fold(zero, 1, {3, 4, 2});
    CHECK(t.norm() == 0.0);
    CHECK_THROWS_AS(fold(zero, 1, {4, 3, 2}), ShapeError);
    CHECK_THROWS_AS(fold(zero, 2, {3, 4, 2}), ShapeError);
}

TEST_CASE("round trip on larger random shapes is exact") {
    for (const Shape& shape : {Shape{17, 23, 31}, Shape{50, 40, 50}, Shape{6, 5, 4, 3, 2}}) {
        DenseTensor t = random_tensor(shape, 7 + shape.size());
        for (int mu = 1; mu <= t.order(); ++mu)
            CHECK(fold(matricize(t, mu), mu, t.shape()).data() == t.data());
    }
}

TEST_CASE("mode product with the identity is a no-op") {
    DenseTensor t = random_tensor({4, 3, 2}, 3);
    for (int mu = 1; mu <= 3; ++mu) {
        const auto I = Eigen::MatrixXd::Identity(t.dim(mu), t.dim(mu));
        CHECK((mode_product(t, mu, I).data() - t.data()).norm() == 0.0);
    }
}

TEST_CASE("mode product matches the explicit Kronecker oracle") {
    DenseTensor t = random_tensor({2, 2, 2}, 21);
    const Eigen::MatrixXd A = random_matrix(3, 2, 22);
    const DenseTensor got = mode_product(t, 1, A);

    std::vector<Eigen::MatrixXd> mats = {A, Eigen::MatrixXd::Identity(2, 2),
                                         Eigen::MatrixXd::Identity(2, 2)};
    const Eigen::VectorXd expected = kron_operator(mats) * t.data();
    CHECK((got.data() - expected).norm() <= 1e-12 * expected.norm());

    CHECK_THROWS_AS(mode_product(t, 2, Eigen::MatrixXd::Zero(2, 5)), ShapeError);
}

TEST_CASE("mode products on distinct modes commute") {
    DenseTensor t = random_tensor({4, 5, 3}, 31);
    const Eigen::MatrixXd A = random_matrix(6, 4, 32);
    const Eigen::MatrixXd B = random_matrix(2, 5, 33);
    const DenseTensor ab = mode_product(mode_product(t, 1, A), 2, B);
    const DenseTensor ba = mode_product(mode_product(t, 2, B), 1, A);
    CHECK((ab.data() - ba.data()).norm() <= 1e-12 * ab.norm());
}

TEST_CASE("multilinear transform: identity, Kronecker oracle, orthonormal inverse") {
    DenseTensor t = random_tensor({2, 3, 2}, 41);

    std::vector<Eigen::MatrixXd> eye = {Eigen::MatrixXd::Identity(2, 2),
                                        Eigen::MatrixXd::Identity(3, 3),
                                        Eigen::MatrixXd::Identity(2, 2)};
    CHECK((multilinear_transform(t, eye).data() - t.data()).norm() == 0.0);

    std::vector<Eigen::MatrixXd> mats = {random_matrix(4, 2, 42), random_matrix(2, 3, 43),
                                         random_matrix(5, 2, 44)};
    const DenseTensor got = multilinear_transform(t, mats);
    const Eigen::VectorXd expected = kron_operator(mats) * t.data();
    CHECK((got.data() - expected).norm() <= 1e-12 * expected.norm());

    // Tall orthonormal factors: transpose-then-forward recovers the core.
    std::vector<Eigen::MatrixXd> ortho = {random_orthonormal(7, 2, 45),
                                          random_orthonormal(8, 3, 46),
                                          random_orthonormal(6, 2, 47)};
    const DenseTensor lifted = multilinear_transform(t, ortho);
    const DenseTensor back = multilinear_transform(lifted, ortho, /*transpose=*/true);
    CHECK((back.data() - t.data()).norm() <= 1e-12 * t.norm());

    std::vector<Eigen::MatrixXd> bad = {random_matrix(4, 3, 48), random_matrix(2, 3, 43),
                                        random_matrix(5, 2, 44)};
    CHECK_THROWS_AS(multilinear_transform(t, bad), ShapeError);
}

TEST_CASE("order-4 multilinear transform matches the Kronecker oracle at size 256") {
    DenseTensor t = random_tensor({4, 4, 4, 4}, 51);
    std::vector<Eigen::MatrixXd> mats = {random_matrix(3, 4, 52), random_matrix(4, 4, 53),
                                         random_matrix(2, 4, 54), random_matrix(5, 4, 55)};
    const DenseTensor got = multilinear_transform(t, mats);
    const Eigen::VectorXd expected = kron_operator(mats) * t.data();
    CHECK((got.data() - expected).norm() <= 1e-12 * expected.norm());
}

TEST_CASE("tensor constructor validates shape and data length") {
    CHECK_THROWS_AS(DenseTensor({5}), ShapeError);
    CHECK_THROWS_AS(DenseTensor({2, 0}), ShapeError);
    CHECK_THROWS_AS(DenseTensor({2, 2}, Eigen::VectorXd::Zero(3)), ShapeError);
}
