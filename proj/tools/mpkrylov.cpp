#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mpk/history_io.hpp"
#include "mpk/kernels.hpp"
#include "mpk/matrix_market.hpp"
#include "mpk/problems.hpp"
#include "mpk/solver.hpp"
#include "mpk/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

// Accepts the 10^x shorthand "1e-1.5" (fractional exponents) alongside
// ordinary decimal literals.
double parse_loose_double(const std::string& text) {
  size_t used = 0;
  const double v = std::stod(text, &used);
  if (used == text.size()) return v;
  const auto e = text.find_first_of("eE");
  if (e != std::string::npos && e > 0) {
    size_t mused = 0, eused = 0;
    const double mant = std::stod(text.substr(0, e), &mused);
    const std::string exp_text = text.substr(e + 1);
    const double expo = std::stod(exp_text, &eused);
    if (mused == e && eused == exp_text.size()) {
      return mant * std::pow(10.0, expo);
    }
  }
  throw std::invalid_argument("bad number '" + text + "'");
}

struct SolveArgs {
  std::string problem;
  std::string matrix;
  std::string rhs = "ones";
  std::string precond = "identity";
  std::string variant = "auto";
  std::string selection = "lincomb";
  std::string alpha;
  std::string ordering = "forward";
  double tol = 1e-8;
  int maxit = 200;
  std::uint64_t seed = 0;
  std::string history_path;
  std::string out_path;
};

mpk::ProblemSpec problem_from_args(const std::string& problem,
                                   const std::string& matrix,
                                   const std::string& rhs, std::uint64_t seed) {
  if (problem.empty() == matrix.empty()) {
    throw std::invalid_argument("give exactly one of --problem or --matrix");
  }
  mpk::ProblemSpec spec;
  if (!matrix.empty()) {
    spec.kind = mpk::ProblemSpec::Kind::File;
    spec.path = matrix;
  } else {
    spec = mpk::parse_problem_spec(problem);
  }
  spec.rhs_seed = seed;
  mpk::parse_rhs_spec(rhs, spec);
  return spec;
}

int run_solve(const SolveArgs& args) {
  const mpk::ProblemSpec spec =
      problem_from_args(args.problem, args.matrix, args.rhs, args.seed);
  const mpk::Problem problem = mpk::build_problem(spec);

  const std::vector<std::string> precond_specs = split_commas(args.precond);
  std::vector<mpk::PreconditionerPtr> preconds;
  for (const std::string& ps : precond_specs) {
    preconds.push_back(mpk::make_preconditioner(ps, problem.a));
  }

  mpk::SolverConfig cfg;
  cfg.variant = args.variant == "auto"
                    ? (preconds.size() > 1 ? mpk::Variant::MpgmresSelective
                                           : mpk::Variant::Gmres)
                    : mpk::parse_variant(args.variant);
  cfg.tol = args.tol;
  cfg.maxit = args.maxit;
  cfg.seed = args.seed;
  if (args.selection == "columns") {
    cfg.selection = mpk::Selection::Columns;
  } else if (args.selection == "lincomb") {
    cfg.selection = mpk::Selection::Lincomb;
  } else {
    throw std::invalid_argument("--selection must be columns or lincomb");
  }

  std::optional<double> alpha_scalar;
  if (!args.alpha.empty()) {
    const std::vector<std::string> parts = split_commas(args.alpha);
    if (parts.size() == 1 && preconds.size() == 2) {
      const double a = parse_loose_double(parts[0]);
      if (!(a > 0.0 && a < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0,1)");
      }
      alpha_scalar = a;
      cfg.alpha = {a, 1.0 - a};
    } else {
      for (const std::string& p : parts) {
        cfg.alpha.push_back(parse_loose_double(p));
      }
      for (double a : cfg.alpha) {
        if (!(a > 0.0 && a < 1.0)) {
          throw std::invalid_argument("alpha must lie in (0,1)");
        }
      }
      if (parts.size() == 1) alpha_scalar = cfg.alpha[0];
    }
  }

  if (args.ordering == "reverse") {
    cfg.ordering.resize(preconds.size());
    for (size_t i = 0; i < preconds.size(); ++i) {
      cfg.ordering[i] = static_cast<int>(preconds.size() - 1 - i);
    }
  } else if (args.ordering != "forward") {
    throw std::invalid_argument(
        "--ordering for solve must be forward or reverse");
  }

  const mpk::SolveReport report =
      mpk::mp_solve(problem.a, problem.b, preconds, cfg);

  mpk::HistoryMeta meta;
  meta.variant = mpk::variant_name(cfg.variant);
  meta.preconds = precond_specs;
  meta.alpha = alpha_scalar;
  meta.ordering = args.ordering;
  if (!args.history_path.empty()) {
    mpk::write_history_json(meta, report, args.history_path);
  }
  if (!args.out_path.empty()) {
    mpk::write_history_plot_data(report, args.out_path);
  }

  std::printf("%s %s: %s in %d iterations, rel residual %.3e, wall %.3f s\n",
              meta.variant.c_str(), args.precond.c_str(),
              mpk::stop_reason_name(report.stop_reason), report.iterations,
              report.residual_history.back(), report.wall_time);
  for (const std::string& w : report.warnings) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  return report.converged ? kExitOk : kExitNotConverged;
}

struct SweepArgs {
  std::string problem = "convdiff:grid=32";
  std::string eps_rows;
  std::string precond;
  std::string alpha;
  std::string ordering = "both";
  double tol = 1e-8;
  int maxit = 200;
  int workers = 1;
  std::uint64_t seed = 0;
  std::string out_path;
};

int run_sweep_cmd(const SweepArgs& args) {
  mpk::SweepPlan plan;
  plan.base = mpk::parse_problem_spec(args.problem);
  plan.base.rhs_seed = args.seed;
  if (!args.eps_rows.empty()) {
    for (const std::string& e : split_commas(args.eps_rows)) {
      plan.eps_rows.push_back(parse_loose_double(e));
    }
  }
  plan.pair = split_commas(args.precond);
  if (!args.alpha.empty()) {
    plan.alphas.clear();
    for (const std::string& a : split_commas(args.alpha)) {
      const double v = parse_loose_double(a);
      if (!(v > 0.0 && v < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0,1)");
      }
      plan.alphas.push_back(v);
    }
  }
  plan.orderings = mpk::parse_sweep_ordering(args.ordering);
  plan.tol = args.tol;
  plan.maxit = args.maxit;
  plan.workers = args.workers;

  const mpk::SweepResult result = mpk::run_sweep(plan);
  const std::string markdown = mpk::render_markdown(result);
  if (!args.out_path.empty()) {
    std::ofstream csv(args.out_path);
    if (!csv) {
      throw std::runtime_error("cannot write '" + args.out_path + "'");
    }
    csv << mpk::render_csv(result);
    std::string md_path = args.out_path;
    if (md_path.size() > 4 && md_path.rfind(".csv") == md_path.size() - 4) {
      md_path.replace(md_path.size() - 4, 4, ".md");
    } else {
      md_path += ".md";
    }
    std::ofstream md(md_path);
    if (!md) throw std::runtime_error("cannot write '" + md_path + "'");
    md << markdown;
  }
  std::cout << markdown;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multipreconditioned Krylov solver benchmark"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "run one configured solve");
  solve->add_option("--problem", solve_args.problem,
                    "generator spec, e.g. convdiff:grid=32,eps=0.1");
  solve->add_option("--matrix", solve_args.matrix, "Matrix Market file");
  solve->add_option("--rhs", solve_args.rhs, "ones | random[:seed=N] | file:PATH");
  solve->add_option("--precond", solve_args.precond, "comma-separated spec list");
  solve->add_option("--variant", solve_args.variant,
                    "gmres | fgmres | fgmres_cyclic | mpgmres | smpgmres");
  solve->add_option("--selection", solve_args.selection, "columns | lincomb");
  solve->add_option("--alpha", solve_args.alpha, "weight on the first preconditioner");
  solve->add_option("--ordering", solve_args.ordering, "forward | reverse");
  solve->add_option("--tol", solve_args.tol, "relative residual target");
  solve->add_option("--maxit", solve_args.maxit, "iteration cap");
  solve->add_option("--seed", solve_args.seed, "seed for random rhs/selectors");
  solve->add_option("--history", solve_args.history_path, "JSON history output");
  solve->add_option("--out", solve_args.out_path, "two-column plot data output");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "alpha/ordering study table");
  sweep->add_option("--problem", sweep_args.problem, "base generator spec");
  sweep->add_option("--eps-rows", sweep_args.eps_rows,
                    "comma-separated eps values, one table row each");
  sweep->add_option("--precond", sweep_args.precond, "two specs: p1,p2")
      ->required();
  sweep->add_option("--alpha", sweep_args.alpha,
                    "comma-separated weights (default 0.1,0.3,0.5,0.7,0.9)");
  sweep->add_option("--ordering", sweep_args.ordering, "forward | reverse | both");
  sweep->add_option("--tol", sweep_args.tol, "relative residual target");
  sweep->add_option("--maxit", sweep_args.maxit, "iteration cap");
  sweep->add_option("--seed", sweep_args.seed, "seed for random rhs");
  sweep->add_option("--workers", sweep_args.workers, "concurrent solve count");
  sweep->add_option("--out", sweep_args.out_path,
                    "CSV output path (markdown lands beside it)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(solve_args);
    return run_sweep_cmd(sweep_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
