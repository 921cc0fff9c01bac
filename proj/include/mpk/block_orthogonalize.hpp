#pragma once

#include <vector>

#include "mpk/column_block.hpp"

namespace mpk {

// A candidate direction dropped during block orthogonalization because it was
// numerically dependent on the basis built so far.
struct DeflationEvent {
  int iteration = 0;       // solver iteration that produced the block
  int candidate_index = 0; // position within the candidate block W
  double norm_before = 0.0;  // residual norm after orthogonalization, at decision time
  double threshold = 0.0;    // deflate_tol * pre-orthogonalization norm
};

struct BlockOrthogonalizeResult {
  // Surviving directions, unit norm, orthogonal to `basis` and to each other.
  ColumnBlock v_new;
  // (basis.cols + v_new.cols) x W.cols coefficient matrix, column-major:
  // W = [basis | v_new] * coeffs up to deflated residuals.
  std::vector<double> coeffs;
  std::size_t coeff_rows = 0;
  std::vector<DeflationEvent> events;
  // For surviving candidate j, survivor_of[j] is its column in v_new; -1 if deflated.
  std::vector<int> survivor_of;
};

// Modified Gram-Schmidt over W's columns, in order, against `basis` and the
// survivors accumulated so far, with one unconditional reorthogonalization
// pass. Columns whose post-orthogonalization norm falls below
// deflate_tol * (pre-orthogonalization norm) are dropped and logged.
// The column order is semantically significant: earlier columns claim new
// directions first.
//
// Requires `basis` orthonormal (checked when assertions are enabled) and
// deflate_tol > 0.
BlockOrthogonalizeResult block_orthogonalize(const ColumnBlock& w, const ColumnBlock& basis,
                                             double deflate_tol, int iteration = 0);

}  // namespace mpk
