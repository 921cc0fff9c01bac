#pragma once

#include <string>
#include <vector>

#include "mpk/problems.hpp"
#include "mpk/solver.hpp"

namespace mpk {

enum class SweepOrdering { Forward, Reverse, Both };

SweepOrdering parse_sweep_ordering(const std::string& text);

struct SweepPlan {
  ProblemSpec base;               // grid/wind/rhs template for every row
  std::vector<double> eps_rows;   // one table row per eps; empty = base.eps only
  std::vector<std::string> pair;  // exactly two preconditioner spec strings
  std::vector<double> alphas = {0.1, 0.3, 0.5, 0.7, 0.9};
  SweepOrdering orderings = SweepOrdering::Both;
  double tol = 1e-8;
  int maxit = 200;
  int workers = 1;

  void validate() const;  // throws std::invalid_argument
};

// Iteration entries use maxit+1 as the did-not-converge sentinel; converged
// entries are the 1-based iteration count. The forward alpha block favours
// pair[0] with weight alpha; the reverse block runs (pair[1], pair[0]) with
// alpha as the weight on pair[1]. Alphas are stored in descending order.
struct SweepRow {
  std::string label;
  int solo_first = 0;
  std::vector<int> per_alpha_forward;
  int solo_second = 0;
  std::vector<int> per_alpha_reverse;
  std::vector<size_t> minima_forward;  // argmin set over per_alpha_forward
  std::vector<size_t> minima_reverse;
};

struct SweepResult {
  SweepPlan plan;  // normalized: alphas descending
  std::vector<SweepRow> rows;
};

// Indices of the smallest converged entry (ties all included); empty when
// nothing converged. This is the emphasis rule the markdown renderer applies
// to each ordering's alpha row.
std::vector<size_t> argmin_converged(const std::vector<int>& iteration_counts,
                                     int maxit);

// Runs every cell (two solo FGMRES baselines plus one selective-lincomb solve
// per alpha per ordering, per row). Cells run concurrently up to
// plan.workers; output order is fixed by plan position.
SweepResult run_sweep(const SweepPlan& plan);

// Long-format CSV: label,ordering,config,iterations,converged.
std::string render_csv(const SweepResult& result);

// One table row per eps with per-ordering argmin entries in bold; solo
// columns are never emphasized. Non-converged entries print as ">maxit".
std::string render_markdown(const SweepResult& result);

}  // namespace mpk
