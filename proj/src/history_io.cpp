#include "mpk/history_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace mpk {

std::string history_json(const HistoryMeta& meta, const SolveReport& report) {
  nlohmann::ordered_json j;
  j["variant"] = meta.variant;
  j["preconds"] = meta.preconds;
  if (meta.alpha) {
    j["alpha"] = *meta.alpha;
  } else {
    j["alpha"] = nullptr;
  }
  j["ordering"] = meta.ordering;
  j["residuals"] = report.residual_history;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  nlohmann::ordered_json deflations = nlohmann::ordered_json::array();
  for (const auto& ev : report.deflation_events) {
    deflations.push_back({{"iteration", ev.iteration},
                          {"candidate_index", ev.candidate_index},
                          {"norm_before", ev.norm_before},
                          {"threshold", ev.threshold}});
  }
  j["deflations"] = std::move(deflations);
  j["basis_columns"] = report.basis_columns_history;
  j["wall_time"] = report.wall_time;
  j["stop_reason"] = stop_reason_name(report.stop_reason);
  j["true_relative_residual"] = report.true_relative_residual;
  if (!report.warnings.empty()) j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

void write_history_json(const HistoryMeta& meta, const SolveReport& report,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write history file '" + path + "'");
  out << history_json(meta, report);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_history_plot_data(const SolveReport& report, const std::string& path) {
  if (report.residual_history.empty()) {
    throw std::invalid_argument("empty report has no history to write");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write plot data file '" + path + "'");
  char buf[64];
  for (size_t i = 0; i < report.residual_history.size(); ++i) {
    const double v = report.residual_history[i];
    if (v == std::rint(v) && std::abs(v) < 1e15) {
      std::snprintf(buf, sizeof buf, "%zu %.1f\n", i, v);
    } else {
      std::snprintf(buf, sizeof buf, "%zu %.17g\n", i, v);
    }
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace mpk
