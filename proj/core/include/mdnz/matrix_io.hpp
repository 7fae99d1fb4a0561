#pragma once

#include <string>

#include "mdnz/ensemble.hpp"

namespace mdnz {

// Binary container: "MDNZ1" magic, u64 dimension, then the lower triangle
// row-major as little-endian f64 (n(n+1)/2 values).
void save_matrix(const std::string& path, const SymmetricMatrixInstance& m);
SymmetricMatrixInstance load_matrix(const std::string& path);

// Plain CSV, full dense matrix; intended for small n.
void save_matrix_csv(const std::string& path,
                     const SymmetricMatrixInstance& m);
SymmetricMatrixInstance load_matrix_csv(const std::string& path);

// Dispatch on extension: ".csv" -> CSV, otherwise the binary container.
void save_matrix_auto(const std::string& path,
                      const SymmetricMatrixInstance& m);
SymmetricMatrixInstance load_matrix_auto(const std::string& path);

}  // namespace mdnz
