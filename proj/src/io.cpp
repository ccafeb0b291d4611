#include "mlrtg/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace mlrtg {

static_assert(std::endian::native == std::endian::little,
              "DTF1 writer assumes a little-endian host");

namespace {

void require(bool ok, const std::filesystem::path& path, const char* what) {
    if (!ok) throw IoError(std::string(what) + ": " + path.string());
}

}  // namespace

void write_dtf1(const std::filesystem::path& path, const DenseTensor& t) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    require(f.good(), path, "cannot open for writing");
    f.write("DTF1", 4);
    const std::uint32_t d = static_cast<std::uint32_t>(t.order());
    f.write(reinterpret_cast<const char*>(&d), sizeof(d));
    for (Index n : t.shape()) {
        const std::uint64_t dim = static_cast<std::uint64_t>(n);
        f.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    }
    f.write(reinterpret_cast<const char*>(t.data().data()),
            static_cast<std::streamsize>(sizeof(double) * t.size()));
    require(f.good(), path, "write failed");
}

DenseTensor read_dtf1(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    require(f.good(), path, "cannot open for reading");
    char magic[4];
    f.read(magic, 4);
    require(f.good() && std::memcmp(magic, "DTF1", 4) == 0, path, "bad DTF1 magic");
    std::uint32_t d = 0;
    f.read(reinterpret_cast<char*>(&d), sizeof(d));
    require(f.good() && d >= 2 && d <= 64, path, "bad DTF1 order");
    Shape shape(d);
    for (std::uint32_t i = 0; i < d; ++i) {
        std::uint64_t dim = 0;
        f.read(reinterpret_cast<char*>(&dim), sizeof(dim));
        require(f.good() && dim >= 1, path, "bad DTF1 dimension");
        shape[i] = static_cast<Index>(dim);
    }
    DenseTensor t(shape);
    f.read(reinterpret_cast<char*>(t.data().data()),
           static_cast<std::streamsize>(sizeof(double) * t.size()));
    require(f.good(), path, "truncated DTF1 payload");
    return t;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    std::ofstream f(path, std::ios::trunc);
    require(f.good(), path, "cannot open for writing");
    char buf[40];
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
            f << buf;
            if (c + 1 < m.cols()) f << ',';
        }
        f << '\n';
    }
    require(f.good(), path, "write failed");
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    require(f.good(), path, "cannot open for reading");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("ragged CSV: " + path.string());
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), path, "empty CSV");
    Eigen::MatrixXd m(static_cast<Index>(rows.size()),
                      static_cast<Index>(rows.front().size()));
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c)
            m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return m;
}

void write_basis(const std::filesystem::path& stem, const GraphBasis& basis) {
    // Eigenvector matrix stored as an order-2 tensor (column-major = DTF1 order).
    DenseTensor vec({basis.n(), basis.k()});
    Eigen::Map<Eigen::MatrixXd>(vec.data().data(), basis.n(), basis.k()) =
        basis.eigenvectors;
    write_dtf1(stem.string() + ".vectors.dtf1", vec);
    write_matrix_csv(stem.string() + ".values.csv", basis.eigenvalues);
}

GraphBasis read_basis(const std::filesystem::path& stem) {
    const DenseTensor vec = read_dtf1(stem.string() + ".vectors.dtf1");
    if (vec.order() != 2) throw IoError("basis eigenvector file is not 2D");
    GraphBasis b;
    b.eigenvectors =
        Eigen::Map<const Eigen::MatrixXd>(vec.data().data(), vec.dim(1), vec.dim(2));
    const Eigen::MatrixXd vals = read_matrix_csv(stem.string() + ".values.csv");
    if (vals.cols() != 1 || vals.rows() != b.eigenvectors.cols())
        throw IoError("basis eigenvalue file inconsistent with eigenvectors");
    b.eigenvalues = vals.col(0);
    return b;
}

std::string file_hash_hex(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    require(f.good(), path, "cannot open for hashing");
    std::uint64_t h = 14695981039346656037ULL;
    char buf[1 << 16];
    while (f) {
        f.read(buf, sizeof(buf));
        for (std::streamsize i = 0; i < f.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

}  // namespace mlrtg
