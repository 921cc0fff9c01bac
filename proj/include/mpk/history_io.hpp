#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpk/solver.hpp"

namespace mpk {

struct HistoryMeta {
  std::string variant;
  std::vector<std::string> preconds;
  std::optional<double> alpha;   // absent for single-preconditioner runs
  std::string ordering = "forward";
};

// Serializes {variant, preconds, alpha, ordering, residuals[], iterations,
// converged, deflations[], basis_columns[], wall_time} as JSON.
std::string history_json(const HistoryMeta& meta, const SolveReport& report);
void write_history_json(const HistoryMeta& meta, const SolveReport& report,
                        const std::string& path);

// Two-column text: iteration index and relative residual, one pair per line.
void write_history_plot_data(const SolveReport& report, const std::string& path);

}  // namespace mpk
