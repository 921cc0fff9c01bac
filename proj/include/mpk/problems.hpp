#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpk/sparse_matrix.hpp"

namespace mpk {

enum class WindKind { Zero, Constant, Recirculating };
enum class RhsKind { Ones, Random, File };

struct ProblemSpec {
  enum class Kind { ConvDiff, AnisoDiff, File };

  Kind kind = Kind::ConvDiff;
  int grid = 32;
  double eps = 1.0;
  WindKind wind = WindKind::Recirculating;
  double wind_x = 0.0;
  double wind_y = 0.0;
  bool centered = false;  // default is first-order upwinding
  std::string path;       // kind == File

  RhsKind rhs = RhsKind::Ones;
  std::uint64_t rhs_seed = 0;
  std::string rhs_path;

  void validate() const;  // grid >= 2, eps > 0; throws std::invalid_argument
};

struct Problem {
  SparseMatrix a;
  std::vector<double> b;
  std::string label;
};

// Parses "convdiff:grid=32,eps=0.1,wind=recirc" / "anisodiff:grid=16,eps=0.01".
// Wind values: zero | recirc | const(wx,wy). Optional scheme=centered.
ProblemSpec parse_problem_spec(const std::string& text);

// Parses --rhs values: "ones" | "random" | "random:seed=N" | "file:PATH".
void parse_rhs_spec(const std::string& text, ProblemSpec& spec);

// 5-point finite differences for -eps*lap(u) + w.grad(u) on the unit square,
// h = 1/(grid+1), Dirichlet boundary eliminated, n = grid^2.
SparseMatrix gen_convdiff(const ProblemSpec& spec);

// -(eps*u_xx + u_yy), same grid layout; eps acts as the anisotropy ratio.
SparseMatrix gen_anisodiff(const ProblemSpec& spec);

std::vector<double> make_rhs(const ProblemSpec& spec, int n);

// Dispatches on spec.kind; kind == File reads a Matrix Market file.
Problem build_problem(const ProblemSpec& spec);

// Whitespace-separated doubles; length must match n when n >= 0.
std::vector<double> read_vector_file(const std::string& path, int n = -1);

}  // namespace mpk
