#pragma once

#include <string>

#include "mpk/sparse_matrix.hpp"

namespace mpk {

// Coordinate-format reader for real general/symmetric matrices. Symmetric
// storage is expanded to full, 1-based indices become 0-based, duplicates are
// summed. Throws std::runtime_error with "path:line:" context on malformed
// input, non-square sizes, or unsupported field/symmetry qualifiers.
SparseMatrix read_matrix_market(const std::string& path);

// Emits coordinate real general format with enough digits to round-trip
// doubles exactly.
void write_matrix_market(const SparseMatrix& a, const std::string& path);

}  // namespace mpk
