#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "mpk/preconditioners.hpp"
#include "mpk/problems.hpp"
#include "mpk/solver.hpp"
#include "mpk/sweep.hpp"

using mpk::SweepOrdering;
using mpk::SweepPlan;
using mpk::SweepResult;
using mpk::SweepRow;

namespace {

SweepPlan small_plan() {
  SweepPlan plan;
  plan.base.grid = 6;
  plan.eps_rows = {0.5, 0.1};
  plan.pair = {"jacobi", "ssor:omega=1.0"};
  plan.alphas = {0.3, 0.7};
  plan.tol = 1e-8;
  plan.maxit = 60;
  return plan;
}

size_t count_lines(const std::string& s) {
  size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("argmin marks every tied minimum among converged entries") {
  CHECK(mpk::argmin_converged({16, 14, 14, 15}, 200) ==
        std::vector<size_t>{1, 2});
  CHECK(mpk::argmin_converged({201, 201}, 200).empty());
  CHECK(mpk::argmin_converged({201, 5, 201}, 200) == std::vector<size_t>{1});
  CHECK(mpk::argmin_converged({14, 14, 14, 16, 18}, 200) ==
        std::vector<size_t>{0, 1, 2});
  CHECK(mpk::argmin_converged({15, 14, 15, 15, 21}, 200) ==
        std::vector<size_t>{1});
}

TEST_CASE("markdown emphasizes each ordering's best alpha and nothing else") {
  SweepResult result;
  result.plan.pair = {"p1", "p2"};
  result.plan.alphas = {0.9, 0.7, 0.5, 0.3, 0.1};
  result.plan.maxit = 200;
  result.plan.orderings = SweepOrdering::Both;
  SweepRow row;
  row.label = "row1";
  row.solo_first = 16;
  row.per_alpha_forward = {14, 14, 14, 16, 18};
  row.solo_second = 18;
  row.per_alpha_reverse = {15, 14, 15, 15, 21};
  row.minima_forward = mpk::argmin_converged(row.per_alpha_forward, 200);
  row.minima_reverse = mpk::argmin_converged(row.per_alpha_reverse, 200);
  result.rows.push_back(row);

  const std::string expected =
      "| label | p1 | 0.9 | 0.7 | 0.5 | 0.3 | 0.1 | p2 |"
      " 0.9 | 0.7 | 0.5 | 0.3 | 0.1 | p1 |\n"
      "|---|---|---|---|---|---|---|---|---|---|---|---|---|---|\n"
      "| row1 | 16 | **14** | **14** | **14** | 16 | 18 | 18 |"
      " 15 | **14** | 15 | 15 | 21 | 16 |\n";
  CHECK(mpk::render_markdown(result) == expected);
}

TEST_CASE("non-converged cells render as >maxit and are never emphasized") {
  SweepResult result;
  result.plan.pair = {"p1", "p2"};
  result.plan.alphas = {0.7, 0.3};
  result.plan.maxit = 20;
  result.plan.orderings = SweepOrdering::Forward;
  SweepRow row;
  row.label = "hard";
  row.solo_first = 12;  // better than every alpha cell, still never bold
  row.per_alpha_forward = {21, 21};
  row.solo_second = 21;
  row.minima_forward = mpk::argmin_converged(row.per_alpha_forward, 20);
  result.rows.push_back(row);

  const std::string md = mpk::render_markdown(result);
  CHECK(md ==
        "| label | p1 | 0.7 | 0.3 | p2 |\n"
        "|---|---|---|---|---|\n"
        "| hard | 12 | >20 | >20 | >20 |\n");
  CHECK(md.find("**") == std::string::npos);
}

TEST_CASE("a real sweep fills every cell deterministically") {
  const auto plan = small_plan();
  const auto result = mpk::run_sweep(plan);

  CHECK(result.plan.alphas == std::vector<double>{0.7, 0.3});
  REQUIRE(result.rows.size() == 2);
  CHECK(result.rows[0].label == "convdiff grid=6 eps=0.5");
  CHECK(result.rows[1].label == "convdiff grid=6 eps=0.1");
  for (const auto& row : result.rows) {
    CHECK(row.solo_first >= 1);
    CHECK(row.solo_second >= 1);
    REQUIRE(row.per_alpha_forward.size() == 2);
    REQUIRE(row.per_alpha_reverse.size() == 2);
    CHECK_FALSE(row.minima_forward.empty());
  }

  const auto again = mpk::run_sweep(plan);
  CHECK(mpk::render_csv(again) == mpk::render_csv(result));
  CHECK(mpk::render_markdown(again) == mpk::render_markdown(result));

  auto parallel = plan;
  parallel.workers = 4;
  const auto par = mpk::run_sweep(parallel);
  CHECK(mpk::render_csv(par) == mpk::render_csv(result));
  CHECK(mpk::render_markdown(par) == mpk::render_markdown(result));
}

TEST_CASE("sweep cells agree with direct solver calls") {
  auto plan = small_plan();
  plan.eps_rows = {0.5};
  const auto result = mpk::run_sweep(plan);
  REQUIRE(result.rows.size() == 1);
  const auto& row = result.rows[0];

  mpk::ProblemSpec spec = plan.base;
  spec.eps = 0.5;
  const auto problem = mpk::build_problem(spec);
  const auto p1 = mpk::make_preconditioner("jacobi", problem.a);
  const auto p2 = mpk::make_preconditioner("ssor:omega=1.0", problem.a);

  mpk::SolverConfig solo;
  solo.variant = mpk::Variant::Fgmres;
  solo.tol = plan.tol;
  solo.maxit = plan.maxit;
  const auto solo1 = mpk::mp_solve(problem.a, problem.b, {p1}, solo);
  const auto solo2 = mpk::mp_solve(problem.a, problem.b, {p2}, solo);
  REQUIRE(solo1.converged);
  REQUIRE(solo2.converged);
  CHECK(row.solo_first == solo1.iterations);
  CHECK(row.solo_second == solo2.iterations);

  mpk::SolverConfig multi;
  multi.variant = mpk::Variant::MpgmresSelective;
  multi.selection = mpk::Selection::Lincomb;
  multi.tol = plan.tol;
  multi.maxit = plan.maxit;
  multi.alpha = {0.7, 0.3};
  const auto fwd = mpk::mp_solve(problem.a, problem.b, {p1, p2}, multi);
  REQUIRE(fwd.converged);
  CHECK(row.per_alpha_forward[0] == fwd.iterations);
  const auto rev = mpk::mp_solve(problem.a, problem.b, {p2, p1}, multi);
  REQUIRE(rev.converged);
  CHECK(row.per_alpha_reverse[0] == rev.iterations);
}

TEST_CASE("csv uses long format with a converged flag") {
  auto plan = small_plan();
  plan.eps_rows = {0.5};
  const auto result = mpk::run_sweep(plan);
  const auto csv = mpk::render_csv(result);

  CHECK(csv.rfind("label,ordering,config,iterations,converged\n", 0) == 0);
  // 1 row x (2 solos + 2 forward + 2 reverse) + header
  CHECK(count_lines(csv) == 7);
  const std::string solo_line = "convdiff grid=6 eps=0.5,solo,jacobi," +
                                std::to_string(result.rows[0].solo_first) +
                                ",true\n";
  CHECK(csv.find(solo_line) != std::string::npos);
  const std::string fwd_line =
      "convdiff grid=6 eps=0.5,forward,alpha=0.7," +
      std::to_string(result.rows[0].per_alpha_forward[0]) + ",true\n";
  CHECK(csv.find(fwd_line) != std::string::npos);
  CHECK(csv.find(",reverse,alpha=0.3,") != std::string::npos);
}

TEST_CASE("cells that hit maxit are flagged false in the csv") {
  auto plan = small_plan();
  plan.eps_rows = {0.5};
  plan.maxit = 1;
  plan.alphas = {0.5};
  const auto result = mpk::run_sweep(plan);
  const auto& row = result.rows[0];
  CHECK(row.solo_first == 2);  // sentinel maxit+1
  CHECK(row.minima_forward.empty());
  const auto csv = mpk::render_csv(result);
  CHECK(csv.find(",solo,jacobi,2,false") != std::string::npos);
  const auto md = mpk::render_markdown(result);
  CHECK(md.find(">1") != std::string::npos);
  CHECK(md.find("**") == std::string::npos);
}

TEST_CASE("single-ordering sweeps omit the other block") {
  auto plan = small_plan();
  plan.eps_rows = {0.5};
  plan.alphas = {0.5};

  plan.orderings = SweepOrdering::Forward;
  const auto fwd = mpk::run_sweep(plan);
  CHECK(fwd.rows[0].per_alpha_reverse.empty());
  CHECK(fwd.rows[0].per_alpha_forward.size() == 1);
  const auto fwd_md = mpk::render_markdown(fwd);
  CHECK(fwd_md.rfind("| label | jacobi | 0.5 | ssor:omega=1.0 |\n", 0) == 0);

  plan.orderings = SweepOrdering::Reverse;
  const auto rev = mpk::run_sweep(plan);
  CHECK(rev.rows[0].per_alpha_forward.empty());
  CHECK(rev.rows[0].per_alpha_reverse.size() == 1);
  const auto rev_md = mpk::render_markdown(rev);
  CHECK(rev_md.rfind("| label | ssor:omega=1.0 | 0.5 | jacobi |\n", 0) == 0);
}

TEST_CASE("ordering names parse") {
  CHECK(mpk::parse_sweep_ordering("forward") == SweepOrdering::Forward);
  CHECK(mpk::parse_sweep_ordering("reverse") == SweepOrdering::Reverse);
  CHECK(mpk::parse_sweep_ordering("both") == SweepOrdering::Both);
  CHECK_THROWS_AS(mpk::parse_sweep_ordering("backward"), std::invalid_argument);
}

TEST_CASE("sweep plans are validated") {
  auto plan = small_plan();
  plan.pair = {"jacobi"};
  CHECK_THROWS_AS(mpk::run_sweep(plan), std::invalid_argument);

  plan = small_plan();
  plan.alphas = {};
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);

  plan = small_plan();
  plan.alphas = {1.0};
  CHECK_THROWS_WITH_AS(plan.validate(), "alpha must lie in (0,1)",
                       std::invalid_argument);
  plan.alphas = {0.0};
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);

  plan = small_plan();
  plan.eps_rows = {0.5, 0.0};
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);

  plan = small_plan();
  plan.tol = 0.0;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);

  plan = small_plan();
  plan.maxit = 0;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);

  plan = small_plan();
  plan.workers = 0;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);

  plan = small_plan();
  plan.base.grid = 1;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
}
