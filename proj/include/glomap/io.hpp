#pragma once

#include "glomap/data.hpp"
#include "glomap/types.hpp"

#include <filesystem>
#include <string>

namespace glomap {

// CSV layout: one header row, comma separated, '.' decimal point.
//   feature columns:  any name without a prefix
//   label columns:    "label:<name>"  (integers)
//   2-D coordinates:  "coord:<name>"  (exactly two such columns when present)

DataMatrix load_matrix(const std::filesystem::path& path);
DataMatrix parse_matrix_csv(const std::string& text);

void save_matrix(const std::filesystem::path& path, const DataMatrix& m);
std::string format_matrix_csv(const DataMatrix& m);

/// Writes columns z0..z{d-1}, plus any label columns given.
void save_embedding(const std::filesystem::path& path, const Embedding& e,
                    const std::vector<LabelVector>& labels = {});

/// Loads an embedding CSV (feature columns become the particle coordinates).
DataMatrix load_embedding(const std::filesystem::path& path);

// Binary matrix cache: magic "GLMX", u64 rows, u64 cols, then rows*cols
// little-endian f64 in row-major order. Infinite distances are stored as NaN.

void write_binary_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_binary_matrix(const std::filesystem::path& path);

}  // namespace glomap
