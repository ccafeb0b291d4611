#pragma once

#include <cstdint>
#include <vector>

#include "mlrtg/graph.hpp"
#include "mlrtg/tensor.hpp"

namespace mlrtg {

// Artificial-data generators. All randomness comes from the counter-based
// SplitMix64 generator (rng.hpp) with this fixed stream layout per seed:
//   stream 0 — seed tensor entries (method 1 and 2)
//   stream 1 — core entries (method 1)
//   stream 2 — Gaussian noise entries (add_gaussian_noise)
//   stream 3 — sparse-noise entry selection (add_sparse_noise)
//   stream 4 — sparse-noise values (add_sparse_noise)
// Draw i is the tensor's linear index, so replays are layout-stable.
struct SynthSpec {
    Shape shape;
    std::vector<Index> core_ranks;   // k per mode
    std::vector<Index> basis_ranks;  // eigenvectors returned; empty = core_ranks
    int k_nn = 10;
    std::uint64_t seed = 0;
    enum class Method { direct_basis, laplacian_filter };
    Method method = Method::direct_basis;
};

struct Method1Result {
    DenseTensor y_star;
    std::vector<GraphBasis> bases;  // basis_ranks columns; first core_ranks generate y_star
    DenseTensor core;
};

// Method 1: random Gaussian tensor -> per-mode knn graphs -> first-k
// eigenbases -> random k-core -> y_star lifted through the bases.
Method1Result method1(const SynthSpec& spec);

// Method 2: filter the random tensor with the rank-k spectral projectors
// P_k P_k^T along every mode.
DenseTensor method2(const SynthSpec& spec);

// y + e with e i.i.d. normal rescaled so the SNR is met exactly.
DenseTensor add_gaussian_noise(const DenseTensor& y, double snr_db, std::uint64_t seed);

// Perturbs ceil(fraction * N) uniformly chosen distinct entries with
// additive normal(0, std) noise.
DenseTensor add_sparse_noise(const DenseTensor& y, double fraction, double std_dev,
                             std::uint64_t seed);

}  // namespace mlrtg
