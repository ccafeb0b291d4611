#include "mlrtg/synth.hpp"

#include <cmath>

#include "mlrtg/rng.hpp"

namespace mlrtg {

namespace {

DenseTensor gaussian_tensor(const Shape& shape, std::uint64_t seed,
                            std::uint64_t stream) {
    DenseTensor t(shape);
    CounterRng rng(seed, stream);
    for (Index i = 0; i < t.size(); ++i)
        t.data()[i] = rng.normal(static_cast<std::uint64_t>(i));
    return t;
}

void validate_ranks(const SynthSpec& spec, const std::vector<Index>& ranks) {
    if (ranks.size() != spec.shape.size())
        throw ShapeError("synth: one rank per mode required");
    for (std::size_t mu = 0; mu < ranks.size(); ++mu)
        if (ranks[mu] < 1 || ranks[mu] > spec.shape[mu])
            throw RankError("synth: rank exceeds mode size");
}

std::vector<Index> effective_basis_ranks(const SynthSpec& spec) {
    if (spec.basis_ranks.empty()) return spec.core_ranks;
    if (spec.basis_ranks.size() != spec.core_ranks.size())
        throw ShapeError("synth: basis_ranks/core_ranks size mismatch");
    for (std::size_t mu = 0; mu < spec.basis_ranks.size(); ++mu)
        if (spec.basis_ranks[mu] < spec.core_ranks[mu])
            throw RankError("synth: basis_ranks must cover core_ranks");
    return spec.basis_ranks;
}

std::vector<GraphBasis> seed_tensor_bases(const DenseTensor& seed_tensor,
                                          const std::vector<Index>& ks, int k_nn) {
    std::vector<GraphBasis> bases;
    bases.reserve(ks.size());
    for (int mu = 1; mu <= seed_tensor.order(); ++mu) {
        const ModeMatrix ym = matricize(seed_tensor, mu);
        const WeightedGraph g = knn_graph(ym.data, k_nn);
        bases.push_back(smallest_eigs(combinatorial_laplacian(g),
                                      ks[static_cast<std::size_t>(mu - 1)]));
    }
    return bases;
}

}  // namespace

Method1Result method1(const SynthSpec& spec) {
    validate_ranks(spec, spec.core_ranks);
    const std::vector<Index> basis_ks = effective_basis_ranks(spec);

    const DenseTensor seed_tensor = gaussian_tensor(spec.shape, spec.seed, 0);
    Method1Result out;
    out.bases = seed_tensor_bases(seed_tensor, basis_ks, spec.k_nn);

    Shape core_shape(spec.core_ranks.begin(), spec.core_ranks.end());
    out.core = gaussian_tensor(core_shape, spec.seed, 1);

    std::vector<Eigen::MatrixXd> gen;
    gen.reserve(out.bases.size());
    for (std::size_t mu = 0; mu < out.bases.size(); ++mu)
        gen.push_back(out.bases[mu].eigenvectors.leftCols(spec.core_ranks[mu]));
    out.y_star = multilinear_transform(out.core, gen, /*transpose=*/false);
    return out;
}

DenseTensor method2(const SynthSpec& spec) {
    validate_ranks(spec, spec.core_ranks);
    const DenseTensor seed_tensor = gaussian_tensor(spec.shape, spec.seed, 0);
    const std::vector<GraphBasis> bases =
        seed_tensor_bases(seed_tensor, spec.core_ranks, spec.k_nn);

    // P_k I P_k^T along every mode = project each mode onto its basis span.
    DenseTensor out = seed_tensor;
    for (int mu = 1; mu <= out.order(); ++mu) {
        const Eigen::MatrixXd& p = bases[static_cast<std::size_t>(mu - 1)].eigenvectors;
        out = mode_product(out, mu, Eigen::MatrixXd(p * p.transpose()));
    }
    return out;
}

DenseTensor add_gaussian_noise(const DenseTensor& y, double snr_db, std::uint64_t seed) {
    if (!std::isfinite(snr_db))
        throw NumericError("add_gaussian_noise: snr_db must be finite");
    const double ynorm2 = y.data().squaredNorm();
    if (ynorm2 == 0.0) throw ZeroInput("add_gaussian_noise: zero tensor");

    DenseTensor e(y.shape());
    CounterRng rng(seed, 2);
    for (Index i = 0; i < e.size(); ++i)
        e.data()[i] = rng.normal(static_cast<std::uint64_t>(i));
    const double target2 = ynorm2 * std::pow(10.0, -snr_db / 10.0);
    e.data() *= std::sqrt(target2) / e.data().norm();

    DenseTensor out = y;
    out.data() += e.data();
    return out;
}

DenseTensor add_sparse_noise(const DenseTensor& y, double fraction, double std_dev,
                             std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw Error("add_sparse_noise: fraction must lie in [0, 1]");
    const Index n = y.size();
    const Index count = static_cast<Index>(
        std::ceil(fraction * static_cast<double>(n)) + 0.5);

    DenseTensor out = y;
    if (count == 0) return out;

    // Partial Fisher-Yates over the index range picks a distinct subset.
    std::vector<Index> idx(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    CounterRng pick(seed, 3);
    CounterRng vals(seed, 4);
    for (Index i = 0; i < count; ++i) {
        const Index j = i + static_cast<Index>(pick.below(
                                static_cast<std::uint64_t>(i),
                                static_cast<std::uint64_t>(n - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        out.data()[idx[static_cast<std::size_t>(i)]] +=
            std_dev * vals.normal(static_cast<std::uint64_t>(i));
    }
    return out;
}

}  // namespace mlrtg
