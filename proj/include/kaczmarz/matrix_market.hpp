#pragma once

#include <filesystem>

#include "kaczmarz/linalg.hpp"

namespace kaczmarz {

// Matrix Market I/O for real general matrices. Coordinate files become sparse
// RowMatrix storage, array files dense storage. Values are written with 17
// significant digits so a write/read cycle is exact.

RowMatrix read_matrix_market(const std::filesystem::path& path);

/// Reads an n x 1 array (or coordinate) file as a vector.
Vector read_vector_market(const std::filesystem::path& path);

void write_matrix_market(const std::filesystem::path& path, const RowMatrix& a);
void write_vector_market(const std::filesystem::path& path, std::span<const double> v);

}  // namespace kaczmarz
