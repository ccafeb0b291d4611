#include "mlrtg/solvers.hpp"

#include <cmath>

#include "doctest.h"
#include "mlrtg/metrics.hpp"
#include "mlrtg/synth.hpp"
#include "test_helpers.hpp"

using namespace mlrtg;
using namespace mlrtg::testing;

namespace {

WeightVector uniform_thresholds(Index count, double tau) {
    WeightVector w;
    w.values = Eigen::VectorXd::Constant(count, tau);
    w.gamma = tau * static_cast<double>(count);
    return w;
}

double svt_objective(const Eigen::MatrixXd& z, const Eigen::MatrixXd& m,
                     const Eigen::VectorXd& tau) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(z);
    const Eigen::VectorXd& s = svd.singularValues();
    return 0.5 * (z - m).squaredNorm() + tau.head(s.size()).dot(s);
}

Method1Result small_mlrtg(std::uint64_t seed, Index n = 20, Index k = 4) {
    SynthSpec spec;
    spec.shape = {n, n, n};
    spec.core_ranks = {k, k, k};
    spec.k_nn = 6;
    spec.seed = seed;
    return method1(spec);
}

}  // namespace

TEST_CASE("make_weights: ascending, unit mass, input validation") {
    Eigen::VectorXd lam(4);
    lam << 0.0, 0.5, 1.0, 2.0;
    const WeightVector w = make_weights(lam, 10.0, 1.0);
    CHECK(w.values.size() == 4);
    CHECK(w.values.sum() == doctest::Approx(10.0).epsilon(1e-12));
    for (Index i = 1; i < 4; ++i) CHECK(w.values[i] >= w.values[i - 1]);
    CHECK(w.values[0] == 0.0);

    const WeightVector w2 = make_weights(lam, 10.0, 2.0);
    CHECK(w2.values.sum() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(w2.values[1] / w2.values[2] ==
          doctest::Approx(0.25).epsilon(1e-12));  // (0.5/1)^2

    CHECK_THROWS_AS(make_weights(lam, -1.0, 1.0), Error);
    CHECK_THROWS_AS(make_weights(lam, 1.0, 0.5), Error);
}

TEST_CASE("weighted_svt trivial cases") {
    const Eigen::MatrixXd m = random_matrix(5, 7, 1);
    CHECK((weighted_svt(m, uniform_thresholds(5, 0.0)) - m).norm() <= 1e-12 * m.norm());
    CHECK(weighted_svt(m, uniform_thresholds(5, 1e6)).norm() == 0.0);

    Eigen::MatrixXd d = Eigen::Vector3d(5.0, 3.0, 1.0).asDiagonal();
    const Eigen::MatrixXd out = weighted_svt(d, uniform_thresholds(3, 2.0));
    CHECK((out - Eigen::MatrixXd(Eigen::Vector3d(3.0, 1.0, 0.0).asDiagonal())).norm() <=
          1e-12);

    Eigen::MatrixXd bad = m;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(weighted_svt(bad, uniform_thresholds(5, 1.0)), NumericError);
    CHECK_THROWS_AS(weighted_svt(m, uniform_thresholds(3, 1.0)), RankError);
}

TEST_CASE("weighted_svt output minimizes the prox objective (perturbation oracle)") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Eigen::MatrixXd m = random_matrix(4, 4, 200 + seed);
        Eigen::VectorXd lam(4);
        CounterRng rng(seed, 5);
        lam << 0.0, std::abs(rng.normal(0)), std::abs(rng.normal(1)) + 1.0,
            std::abs(rng.normal(2)) + 2.0;
        std::sort(lam.data(), lam.data() + 4);
        WeightVector w = make_weights(lam, 3.0, 1.0);
        const Eigen::MatrixXd z = weighted_svt(m, w);
        const double base = svt_objective(z, m, w.values);
        CounterRng prng(seed, 6);
        for (std::uint64_t p = 0; p < 500; ++p) {
            Eigen::MatrixXd pert(4, 4);
            for (Index i = 0; i < 16; ++i)
                pert(i / 4, i % 4) = prng.normal(16 * p + static_cast<std::uint64_t>(i));
            const double scale = (p % 2 == 0) ? 1e-4 : 0.3;
            CHECK(svt_objective(z + scale * pert, m, w.values) >= base - 1e-8);
        }
    }
}

TEST_CASE("weighted_svt is non-expansive") {
    const WeightVector w = make_weights(Eigen::VectorXd::LinSpaced(6, 0.0, 3.0), 2.5, 1.0);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Eigen::MatrixXd a = random_matrix(6, 9, 300 + seed);
        const Eigen::MatrixXd b = random_matrix(6, 9, 400 + seed);
        const double lhs = (weighted_svt(a, w) - weighted_svt(b, w)).norm();
        CHECK(lhs <= (a - b).norm() + 1e-10);
    }
}

TEST_CASE("gctp with zero gamma returns the input immediately") {
    const DenseTensor x = random_tensor({6, 5, 4}, 9);
    std::vector<WeightVector> w(3);
    for (int mu = 0; mu < 3; ++mu)
        w[static_cast<std::size_t>(mu)] =
            make_weights(Eigen::VectorXd::LinSpaced(6, 0.0, 1.0), 0.0, 1.0);
    const auto [out, report] = gctp(x, w);
    CHECK(out.data() == x.data());
    CHECK(report.converged);
}

TEST_CASE("gctp with huge gamma drives the core to zero") {
    const DenseTensor x = random_tensor({6, 6, 6}, 10);
    std::vector<WeightVector> w(3, make_weights(Eigen::VectorXd::LinSpaced(6, 0.1, 1.0),
                                                1e7, 1.0));
    const auto [out, report] = gctp(x, w);
    CHECK(out.norm() <= 1e-6 * x.norm());
}

TEST_CASE("gctp objective: below both candidate points, monotone trace") {
    const DenseTensor x = random_tensor({10, 10, 10}, 12);
    std::vector<WeightVector> w(3, make_weights(Eigen::VectorXd::LinSpaced(10, 0.0, 2.0),
                                                1.0, 1.0));
    const auto [out, report] = gctp(x, w);

    auto objective = [&](const DenseTensor& z) {
        double total = (x.data() - z.data()).squaredNorm();
        for (int mu = 1; mu <= 3; ++mu)
            total += weighted_nuclear_norm(matricize(z, mu).data,
                                           w[static_cast<std::size_t>(mu - 1)]);
        return total;
    };
    DenseTensor zero(x.shape());
    CHECK(objective(out) <= objective(x) + 1e-9);
    CHECK(objective(out) <= objective(zero) + 1e-9);
    CHECK(objective(out) == doctest::Approx(report.objective_trace.back()).epsilon(1e-9));

    for (std::size_t i = 5; i + 1 < report.objective_trace.size(); ++i)
        CHECK(report.objective_trace[i + 1] <= report.objective_trace[i] + 1e-9);
}

TEST_CASE("mlsvd: exact multilinear rank is recovered") {
    const Method1Result m1 = small_mlrtg(31);
    const auto [f, report] = mlsvd(m1.y_star, {4, 4, 4});
    const DenseTensor rec = multilinear_transform(f.core, f.factors);
    CHECK((rec.data() - m1.y_star.data()).norm() <= 1e-9 * m1.y_star.norm());
    for (const auto& u : f.factors)
        CHECK((u.transpose() * u - Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-8);
    CHECK(report.converged);
}

TEST_CASE("mlsvd at full ranks reproduces the tensor") {
    const DenseTensor y = random_tensor({7, 6, 5}, 33);
    const auto [f, report] = mlsvd(y, {7, 6, 5});
    const DenseTensor rec = multilinear_transform(f.core, f.factors);
    CHECK((rec.data() - y.data()).norm() <= 1e-9 * y.norm());

    CHECK_THROWS_AS(mlsvd(y, {8, 6, 5}), RankError);
    CHECK_THROWS_AS(mlsvd(y, {7, 6}), RankError);
}

TEST_CASE("mlsvd on matrices spans the same subspaces as the SVD") {
    const Eigen::MatrixXd a = random_matrix(12, 9, 35);
    DenseTensor y({12, 9});
    Eigen::Map<Eigen::MatrixXd>(y.data().data(), 12, 9) = a;
    const auto [f, report] = mlsvd(y, {3, 3});

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double angle_u = subspace_angle(f.factors[0], svd.matrixU().leftCols(3), 3);
    const double angle_v = subspace_angle(f.factors[1], svd.matrixV().leftCols(3), 3);
    CHECK(angle_u <= 1e-8);
    CHECK(angle_v <= 1e-8);
}

TEST_CASE("gmlsvd with zero gamma matches mlsvd on exact MLRTG input (Theorem 2.1)") {
    const Method1Result m1 = small_mlrtg(41);
    std::vector<WeightVector> w;
    for (const GraphBasis& b : m1.bases) w.push_back(make_weights(b.eigenvalues, 0.0, 1.0));
    const auto [gf, greport] = gmlsvd(m1.y_star, m1.bases, w);
    const auto [mf, mreport] = mlsvd(m1.y_star, {4, 4, 4});

    // singular values along mode 1 agree
    const DenseTensor grec = multilinear_transform(gf.core, gf.factors);
    CHECK(singular_value_error(grec, m1.y_star, 1, 4) <= 1e-8);

    // per-vector alignment up to sign
    for (int mu = 0; mu < 3; ++mu) {
        const Eigen::VectorXd a =
            alignment_diag(gf.factors[static_cast<std::size_t>(mu)],
                           mf.factors[static_cast<std::size_t>(mu)], 4);
        CHECK(a.minCoeff() >= 1.0 - 1e-6);
    }

    // cores agree up to the induced signed permutation (here: signs only)
    Eigen::VectorXd s1(4), s2(4), s3(4);
    for (Index i = 0; i < 4; ++i) {
        s1[i] = gf.factors[0].col(i).dot(mf.factors[0].col(i)) >= 0 ? 1.0 : -1.0;
        s2[i] = gf.factors[1].col(i).dot(mf.factors[1].col(i)) >= 0 ? 1.0 : -1.0;
        s3[i] = gf.factors[2].col(i).dot(mf.factors[2].col(i)) >= 0 ? 1.0 : -1.0;
    }
    DenseTensor fixed = gf.core;
    for (Index c = 0; c < fixed.size(); ++c) {
        const Index i = c % 4, j = (c / 4) % 4, l = c / 16;
        fixed.data()[c] *= s1[i] * s2[j] * s3[l];
    }
    CHECK((fixed.data() - mf.core.data()).norm() <= 1e-6 * mf.core.norm());
}

TEST_CASE("trpcag: exact input stays fixed and the residual split is exact") {
    const Method1Result m1 = small_mlrtg(51);
    std::vector<WeightVector> w;
    for (const GraphBasis& b : m1.bases)
        w.push_back(make_weights(b.eigenvalues, 1e-3, 1.0));
    const TrpcagResult r = trpcag(m1.y_star, m1.bases, w);
    CHECK(r.sparse.norm() <= 1e-6 * m1.y_star.norm());
    // the sparse part is bitwise the residual, so the split encodes y exactly
    Eigen::VectorXd resid = m1.y_star.data() - r.lowrank.data();
    CHECK(r.sparse.data() == resid);
}

TEST_CASE("trpcag objective at output is below the candidate points") {
    const Method1Result m1 = small_mlrtg(52);
    const DenseTensor y = add_sparse_noise(m1.y_star, 0.1, 0.1, 99);
    std::vector<WeightVector> w;
    for (const GraphBasis& b : m1.bases)
        w.push_back(make_weights(b.eigenvalues, 2.0, 1.0));
    const TrpcagResult r = trpcag(y, m1.bases, w);

    auto objective = [&](const DenseTensor& core) {
        DenseTensor rec = lift_core(core, m1.bases);
        double total = (rec.data() - y.data()).lpNorm<1>();
        for (int mu = 1; mu <= 3; ++mu)
            total += weighted_nuclear_norm(matricize(core, mu).data,
                                           w[static_cast<std::size_t>(mu - 1)]);
        return total;
    };
    const DenseTensor projected = project_gct(y, m1.bases).core;
    DenseTensor zero(projected.shape());
    CHECK(objective(r.core) <= objective(projected) + 1e-9);
    CHECK(objective(r.core) <= objective(zero) + 1e-9);

    for (std::size_t i = 5; i + 1 < r.report.objective_trace.size(); ++i)
        CHECK(r.report.objective_trace[i + 1] <= r.report.objective_trace[i] + 1e-9);
}

TEST_CASE("prox_l1_dataterm: residual-free input is a fixed point") {
    const Method1Result m1 = small_mlrtg(61);
    const DenseTensor y = lift_core(m1.core, m1.bases);
    const DenseTensor out = prox_l1_dataterm(m1.core, y, m1.bases, 0.7);
    CHECK((out.data() - m1.core.data()).norm() <= 1e-12 * m1.core.norm());
}

TEST_CASE("prox_l1_dataterm matches the scalar closed form") {
    // 1x1x... tensors are excluded by order>=2 shape rules elsewhere, so use
    // a 2x2 identity-bases instance where every entry is its own scalar prox.
    GraphBasis id2;
    id2.eigenvectors = Eigen::MatrixXd::Identity(2, 2);
    id2.eigenvalues = Eigen::VectorXd::LinSpaced(2, 0.0, 1.0);
    std::vector<GraphBasis> bases = {id2, id2};

    const DenseTensor x = random_tensor({2, 2}, 62);
    const DenseTensor y = random_tensor({2, 2}, 63);
    const double alpha = 0.35;
    const DenseTensor out = prox_l1_dataterm(x, y, bases, alpha);
    for (Index i = 0; i < 4; ++i) {
        const double xi = x.data()[i], yi = y.data()[i];
        // prox of a |.-y| in 1D: x - clamp(x-y, -a, a)
        const double expected = xi - std::clamp(xi - yi, -alpha, alpha);
        CHECK(out.data()[i] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("prox_l1_dataterm matches an iterative prox oracle on a 3x3 instance") {
    // Square orthonormal bases: the lift is a co-isometry, so the composition
    // formula is the exact prox; verify against strongly-convex subgradient
    // descent on the Moreau objective.
    GraphBasis b1, b2;
    b1.eigenvectors = random_orthonormal(3, 3, 64);
    b1.eigenvalues = Eigen::VectorXd::LinSpaced(3, 0.0, 1.0);
    b2.eigenvectors = random_orthonormal(3, 3, 65);
    b2.eigenvalues = Eigen::VectorXd::LinSpaced(3, 0.0, 1.0);
    std::vector<GraphBasis> bases = {b1, b2};

    const DenseTensor v = random_tensor({3, 3}, 66);
    const DenseTensor y = random_tensor({3, 3}, 67);
    const double alpha = 0.4;
    const DenseTensor got = prox_l1_dataterm(v, y, bases, alpha);

    // oracle: minimize 0.5||x - v||^2 + alpha * ||lift(x) - y||_1
    DenseTensor x = v;
    for (int t = 1; t <= 400000; ++t) {
        DenseTensor resid = lift_core(x, bases);
        resid.data() -= y.data();
        DenseTensor sign = resid;
        for (Index i = 0; i < sign.size(); ++i)
            sign.data()[i] = resid.data()[i] > 0 ? 1.0 : (resid.data()[i] < 0 ? -1.0 : 0.0);
        const DenseTensor back = multilinear_transform(
            sign, {b1.eigenvectors, b2.eigenvectors}, /*transpose=*/true);
        const Eigen::VectorXd grad = (x.data() - v.data()) + alpha * back.data();
        x.data() -= (1.0 / static_cast<double>(t)) * grad;
    }
    CHECK((got.data() - x.data()).norm() <= 1e-6 * std::max(1.0, x.data().norm()));
}

TEST_CASE("solver rejects relaxation outside [0.1, 1.9]") {
    const DenseTensor x = random_tensor({4, 4}, 70);
    std::vector<WeightVector> w(2, make_weights(Eigen::VectorXd::LinSpaced(4, 0.0, 1.0),
                                                1.0, 1.0));
    SolverOptions opts;
    opts.beta = 2.5;
    CHECK_THROWS_AS(gctp(x, w, opts), Error);
}
