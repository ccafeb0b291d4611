#pragma once

#include <filesystem>
#include <string>

#include "mlrtg/graph.hpp"
#include "mlrtg/tensor.hpp"

namespace mlrtg {

// Binary tensor format DTF1: magic "DTF1", u32 order d, d x u64 dims, then
// the float64 payload, all little-endian, in the tensor's linearization
// order (mode 1 fastest).
void write_dtf1(const std::filesystem::path& path, const DenseTensor& t);
DenseTensor read_dtf1(const std::filesystem::path& path);

// Plain 2D CSV with full double precision.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

// A GraphBasis is cached as <stem>.vectors.dtf1 + <stem>.values.csv.
void write_basis(const std::filesystem::path& stem, const GraphBasis& basis);
GraphBasis read_basis(const std::filesystem::path& stem);

// FNV-1a of a file's bytes, for manifests and cache keys.
std::string file_hash_hex(const std::filesystem::path& path);

}  // namespace mlrtg
