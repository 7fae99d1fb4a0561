#include "mdnz/matrix_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "mdnz/errors.hpp"

namespace mdnz {

namespace {

constexpr char kMagic[5] = {'M', 'D', 'N', 'Z', '1'};

static_assert(std::endian::native == std::endian::little,
              "container I/O assumes a little-endian host");

}  // namespace

void save_matrix(const std::string& path, const SymmetricMatrixInstance& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_parameter("save_matrix: cannot open " + path);
    out.write(kMagic, sizeof(kMagic));
    const std::uint64_t n = static_cast<std::uint64_t>(m.dim());
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    std::vector<double> tri;
    tri.reserve(n * (n + 1) / 2);
    const auto& e = m.entries();
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j <= i; ++j) tri.push_back(e(i, j));
    out.write(reinterpret_cast<const char*>(tri.data()),
              static_cast<std::streamsize>(tri.size() * sizeof(double)));
    if (!out) throw invalid_parameter("save_matrix: write failed for " + path);
}

SymmetricMatrixInstance load_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_parameter("load_matrix: cannot open " + path);
    char magic[5];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw invalid_parameter("load_matrix: bad magic in " + path);
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!in || n == 0 || n > (1u << 20))
        throw invalid_parameter("load_matrix: bad dimension in " + path);
    std::vector<double> tri(n * (n + 1) / 2);
    in.read(reinterpret_cast<char*>(tri.data()),
            static_cast<std::streamsize>(tri.size() * sizeof(double)));
    if (!in) throw invalid_parameter("load_matrix: truncated file " + path);
    Eigen::MatrixXd e(n, n);
    std::size_t k = 0;
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j <= i; ++j) {
            e(i, j) = tri[k];
            e(j, i) = tri[k];
            ++k;
        }
    return SymmetricMatrixInstance(std::move(e));
}

void save_matrix_csv(const std::string& path,
                     const SymmetricMatrixInstance& m) {
    std::ofstream out(path);
    if (!out) throw invalid_parameter("save_matrix_csv: cannot open " + path);
    const auto& e = m.entries();
    out.precision(17);
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j < m.dim(); ++j) {
            if (j) out << ',';
            out << e(i, j);
        }
        out << '\n';
    }
}

SymmetricMatrixInstance load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("load_matrix_csv: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    if (n == 0) throw invalid_parameter("load_matrix_csv: empty file " + path);
    Eigen::MatrixXd e(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw invalid_parameter("load_matrix_csv: ragged rows in " + path);
        for (std::size_t j = 0; j < n; ++j) e(i, j) = rows[i][j];
    }
    // CSV input may carry asymmetric rounding; symmetrize exactly.
    Eigen::MatrixXd sym = 0.5 * (e + e.transpose());
    return SymmetricMatrixInstance(std::move(sym));
}

void save_matrix_auto(const std::string& path,
                      const SymmetricMatrixInstance& m) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv")
        save_matrix_csv(path, m);
    else
        save_matrix(path, m);
}

SymmetricMatrixInstance load_matrix_auto(const std::string& path) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv")
        return load_matrix_csv(path);
    return load_matrix(path);
}

}  // namespace mdnz
