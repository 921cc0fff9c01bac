#include "mpk/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mpk {
namespace {

std::string format_alpha(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", a);
  return buf;
}

int sentinel_iterations(const SolveReport& rep, int maxit) {
  return rep.converged ? rep.iterations : maxit + 1;
}

std::string cell_text(int iters, int maxit) {
  if (iters > maxit) return ">" + std::to_string(maxit);
  return std::to_string(iters);
}

}  // namespace

std::vector<size_t> argmin_converged(const std::vector<int>& iteration_counts,
                                     int maxit) {
  std::vector<size_t> out;
  int best = maxit + 1;
  for (int x : iteration_counts) best = std::min(best, x);
  if (best > maxit) return out;  // nothing converged, nothing to emphasize
  for (size_t i = 0; i < iteration_counts.size(); ++i) {
    if (iteration_counts[i] == best) out.push_back(i);
  }
  return out;
}

SweepOrdering parse_sweep_ordering(const std::string& text) {
  if (text == "forward") return SweepOrdering::Forward;
  if (text == "reverse") return SweepOrdering::Reverse;
  if (text == "both") return SweepOrdering::Both;
  throw std::invalid_argument("ordering must be forward, reverse, or both");
}

void SweepPlan::validate() const {
  if (pair.size() != 2) {
    throw std::invalid_argument("sweep needs exactly two preconditioner specs");
  }
  if (alphas.empty()) throw std::invalid_argument("sweep needs at least one alpha");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) {
      throw std::invalid_argument("alpha must lie in (0,1)");
    }
  }
  for (double e : eps_rows) {
    if (!(e > 0.0)) throw std::invalid_argument("eps rows must be > 0");
  }
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("tol must lie in (0, 1)");
  if (maxit < 1) throw std::invalid_argument("maxit must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  base.validate();
}

SweepResult run_sweep(const SweepPlan& plan) {
  plan.validate();
  SweepResult result;
  result.plan = plan;
  std::sort(result.plan.alphas.begin(), result.plan.alphas.end(),
            std::greater<double>());
  const SweepPlan& p = result.plan;

  std::vector<double> eps_rows = p.eps_rows;
  if (eps_rows.empty()) eps_rows.push_back(p.base.eps);
  const size_t n_alpha = p.alphas.size();
  const bool run_fwd = p.orderings != SweepOrdering::Reverse;
  const bool run_rev = p.orderings != SweepOrdering::Forward;

  struct RowContext {
    Problem problem;
    std::vector<PreconditionerPtr> preconds;  // pair order
  };
  std::vector<RowContext> contexts(eps_rows.size());
  for (size_t r = 0; r < eps_rows.size(); ++r) {
    ProblemSpec spec = p.base;
    spec.eps = eps_rows[r];
    contexts[r].problem = build_problem(spec);
    for (const std::string& ps : p.pair) {
      contexts[r].preconds.push_back(make_preconditioner(ps, contexts[r].problem.a));
    }
  }

  // flat task list; slot order fixes the assembled output no matter which
  // worker finishes first
  struct Cell {
    size_t row;
    int kind;  // 0 = solo_first, 1 = solo_second, 2 = forward alpha, 3 = reverse alpha
    size_t alpha_index;
  };
  std::vector<Cell> cells;
  for (size_t r = 0; r < eps_rows.size(); ++r) {
    cells.push_back({r, 0, 0});
    cells.push_back({r, 1, 0});
    if (run_fwd) {
      for (size_t ai = 0; ai < n_alpha; ++ai) cells.push_back({r, 2, ai});
    }
    if (run_rev) {
      for (size_t ai = 0; ai < n_alpha; ++ai) cells.push_back({r, 3, ai});
    }
  }

  std::vector<int> outcomes(cells.size(), 0);
  std::vector<std::string> failures(cells.size());

  auto run_cell = [&](size_t idx) {
    const Cell& c = cells[idx];
    const RowContext& ctx = contexts[c.row];
    try {
      SolverConfig cfg;
      cfg.tol = p.tol;
      cfg.maxit = p.maxit;
      std::vector<PreconditionerPtr> preconds;
      if (c.kind == 0 || c.kind == 1) {
        cfg.variant = Variant::Fgmres;
        preconds = {ctx.preconds[c.kind]};
      } else {
        cfg.variant = Variant::MpgmresSelective;
        cfg.selection = Selection::Lincomb;
        const double a = p.alphas[c.alpha_index];
        cfg.alpha = {a, 1.0 - a};
        if (c.kind == 2) {
          preconds = {ctx.preconds[0], ctx.preconds[1]};
        } else {
          preconds = {ctx.preconds[1], ctx.preconds[0]};
        }
      }
      const SolveReport rep =
          mp_solve(ctx.problem.a, ctx.problem.b, preconds, cfg);
      outcomes[idx] = sentinel_iterations(rep, p.maxit);
    } catch (const std::exception& e) {
      failures[idx] = e.what();
    }
  };

  const size_t nthreads = std::min<size_t>(static_cast<size_t>(p.workers),
                                           std::max<size_t>(cells.size(), 1));
  if (nthreads <= 1) {
    for (size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (size_t t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
          run_cell(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (size_t i = 0; i < cells.size(); ++i) {
    if (!failures[i].empty()) {
      const Cell& c = cells[i];
      throw std::runtime_error("sweep cell failed (row " + std::to_string(c.row) +
                               ", " + contexts[c.row].problem.label +
                               "): " + failures[i]);
    }
  }

  result.rows.resize(eps_rows.size());
  size_t idx = 0;
  for (size_t r = 0; r < eps_rows.size(); ++r) {
    SweepRow& row = result.rows[r];
    row.label = contexts[r].problem.label;
    row.solo_first = outcomes[idx++];
    row.solo_second = outcomes[idx++];
    if (run_fwd) {
      for (size_t ai = 0; ai < n_alpha; ++ai) {
        row.per_alpha_forward.push_back(outcomes[idx++]);
      }
      row.minima_forward = argmin_converged(row.per_alpha_forward, p.maxit);
    }
    if (run_rev) {
      for (size_t ai = 0; ai < n_alpha; ++ai) {
        row.per_alpha_reverse.push_back(outcomes[idx++]);
      }
      row.minima_reverse = argmin_converged(row.per_alpha_reverse, p.maxit);
    }
  }
  return result;
}

std::string render_csv(const SweepResult& result) {
  const SweepPlan& p = result.plan;
  std::ostringstream out;
  out << "label,ordering,config,iterations,converged\n";
  auto emit = [&](const std::string& label, const std::string& ordering,
                  const std::string& config, int iters) {
    out << label << "," << ordering << "," << config << "," << iters << ","
        << (iters <= p.maxit ? "true" : "false") << "\n";
  };
  for (const SweepRow& row : result.rows) {
    emit(row.label, "solo", p.pair[0], row.solo_first);
    emit(row.label, "solo", p.pair[1], row.solo_second);
    for (size_t ai = 0; ai < row.per_alpha_forward.size(); ++ai) {
      emit(row.label, "forward", "alpha=" + format_alpha(p.alphas[ai]),
           row.per_alpha_forward[ai]);
    }
    for (size_t ai = 0; ai < row.per_alpha_reverse.size(); ++ai) {
      emit(row.label, "reverse", "alpha=" + format_alpha(p.alphas[ai]),
           row.per_alpha_reverse[ai]);
    }
  }
  return out.str();
}

std::string render_markdown(const SweepResult& result) {
  const SweepPlan& p = result.plan;
  const bool fwd = p.orderings != SweepOrdering::Reverse;
  const bool rev = p.orderings != SweepOrdering::Forward;
  std::ostringstream out;

  out << "| label |";
  auto alpha_headers = [&] {
    for (double a : p.alphas) out << " " << format_alpha(a) << " |";
  };
  if (fwd) {
    out << " " << p.pair[0] << " |";
    alpha_headers();
    out << " " << p.pair[1] << " |";
  }
  if (rev) {
    if (!fwd) out << " " << p.pair[1] << " |";
    alpha_headers();
    out << " " << p.pair[0] << " |";
  }
  out << "\n|---|";
  const size_t ncols = (fwd ? 1 + p.alphas.size() : 0) +
                       (rev ? 1 + p.alphas.size() : 0) + 1;
  for (size_t i = 0; i < ncols; ++i) out << "---|";
  out << "\n";

  auto alpha_cells = [&](const std::vector<int>& counts,
                         const std::vector<size_t>& minima) {
    for (size_t ai = 0; ai < counts.size(); ++ai) {
      const bool bold =
          std::find(minima.begin(), minima.end(), ai) != minima.end();
      const std::string text = cell_text(counts[ai], p.maxit);
      out << " " << (bold ? "**" + text + "**" : text) << " |";
    }
  };
  for (const SweepRow& row : result.rows) {
    out << "| " << row.label << " |";
    if (fwd) {
      out << " " << cell_text(row.solo_first, p.maxit) << " |";
      alpha_cells(row.per_alpha_forward, row.minima_forward);
      out << " " << cell_text(row.solo_second, p.maxit) << " |";
    }
    if (rev) {
      if (!fwd) out << " " << cell_text(row.solo_second, p.maxit) << " |";
      alpha_cells(row.per_alpha_reverse, row.minima_reverse);
      out << " " << cell_text(row.solo_first, p.maxit) << " |";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace mpk
