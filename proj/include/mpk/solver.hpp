#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpk/block_orthogonalize.hpp"
#include "mpk/column_block.hpp"
#include "mpk/hessenberg.hpp"
#include "mpk/preconditioners.hpp"
#include "mpk/sparse_matrix.hpp"

namespace mpk {

enum class Variant {
  Gmres,            // right-preconditioned, single preconditioner
  Fgmres,           // flexible, single fixed preconditioner
  FgmresCyclic,     // flexible, preconditioner cycles with the iteration
  MpgmresComplete,  // full product expansion, block width grows by a factor l
  MpgmresSelective  // l new directions per iteration
};

enum class Selection { Columns, Lincomb };

enum class StopReason { Converged, MaxIterations, Stagnated, BlockCapExceeded };

const char* variant_name(Variant v) noexcept;
const char* stop_reason_name(StopReason r) noexcept;
Variant parse_variant(const std::string& text);  // throws std::invalid_argument

struct SolverConfig {
  Variant variant = Variant::MpgmresSelective;
  double tol = 1e-8;
  int maxit = 200;
  Selection selection = Selection::Lincomb;
  // Weights over the effective (post-ordering) preconditioner slots. Empty
  // means balanced 1/l. Entries must lie in (0,1) and sum to 1.
  std::vector<double> alpha;
  // Column selectors for Selection::Columns, one per preconditioner,
  // 0-based into the newest basis block; empty means selector i = i. Clamped
  // (with a warning) when deflation leaves fewer columns.
  std::vector<int> selectors;
  bool random_selectors = false;
  std::uint64_t seed = 0;
  // Permutation of preconditioner indices applied before solving; empty
  // means identity order.
  std::vector<int> ordering;
  double deflate_tol = 1e-8;
  // The complete variant stops (StopReason::BlockCapExceeded) rather than
  // build a candidate block wider than this.
  int max_block_cols = 4096;
  // Retains basis/directions/Hessenberg in the report for diagnostics; also
  // makes variant gmres store directions it would otherwise reconstruct.
  bool keep_state = false;

  void validate(size_t num_preconds) const;  // throws std::invalid_argument
};

struct ArnoldiSnapshot {
  ColumnBlock basis;        // orthonormal columns
  ColumnBlock directions;   // search directions matching hess columns
  HessenbergStore hess;
  std::vector<int> block_starts;  // first basis column of each iteration's block
  double beta = 0.0;
};

struct SolveReport {
  bool converged = false;
  bool stagnated = false;
  StopReason stop_reason = StopReason::MaxIterations;
  int iterations = 0;
  std::vector<double> residual_history;    // index 0 = initial = 1.0
  std::vector<int> basis_columns_history;  // index k = basis width after iteration k
  std::vector<DeflationEvent> deflation_events;
  std::vector<double> final_x;
  double true_relative_residual = 0.0;
  bool residual_mismatch = false;
  int lsq_rank_deficient_count = 0;
  std::vector<std::string> warnings;
  double wall_time = 0.0;
  std::optional<ArnoldiSnapshot> snapshot;  // populated when keep_state
};

// beta = ||r0||, V1 = [r0/beta], Z1 = [P_1^{-1}v1, ..., P_l^{-1}v1].
// Throws std::invalid_argument when r0 = 0 (callers treat that as immediate
// convergence before building any block).
void initial_block(const std::vector<PreconditionerPtr>& preconds,
                   std::span<const double> r0, ColumnBlock& v1, ColumnBlock& z1,
                   double& beta);

// Z = [P_1^{-1}V, ..., P_l^{-1}V], grouped by preconditioner.
ColumnBlock expand_complete(const std::vector<PreconditionerPtr>& preconds,
                            const ColumnBlock& v_block);

// Z column i = P_i^{-1} * V[:, selectors[i]]; selectors are clamped to the
// available width, recording a note per clamp when clamp_notes is given.
ColumnBlock expand_selective_columns(const std::vector<PreconditionerPtr>& preconds,
                                     const ColumnBlock& v_block,
                                     std::span<const int> selectors,
                                     std::vector<std::string>* clamp_notes = nullptr);

// w = V * alpha computed once; Z = [P_1^{-1}w, ..., P_l^{-1}w]. alpha length
// must equal the block width; all-zero alpha is a usage error.
ColumnBlock expand_selective_lincomb(const std::vector<PreconditionerPtr>& preconds,
                                     const ColumnBlock& v_block,
                                     std::span<const double> alpha);

SolveReport mp_solve(const SparseMatrix& a, std::span<const double> b,
                     const std::vector<PreconditionerPtr>& preconds,
                     const SolverConfig& config, std::span<const double> x0 = {});

}  // namespace mpk
