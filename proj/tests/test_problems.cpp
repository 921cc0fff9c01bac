#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "mpk/matrix_market.hpp"
#include "mpk/problems.hpp"
#include "mpk/sparse_matrix.hpp"

using mpk::ProblemSpec;
using mpk::SparseMatrix;
using mpk::WindKind;

namespace {

std::string write_temp(const std::string& stem, const std::string& content) {
  const auto path =
      (std::filesystem::temp_directory_path() / ("mpk_" + stem)).string();
  std::ofstream out(path);
  out << content;
  return path;
}

void expect_read_error(const std::string& stem, const std::string& content,
                       const std::string& needle) {
  const auto path = write_temp(stem, content);
  try {
    mpk::read_matrix_market(path);
    FAIL("expected read_matrix_market to throw for " << stem);
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    CAPTURE(what);
    CHECK(what.find(needle) != std::string::npos);
  }
  std::filesystem::remove(path);
}

int row_nnz(const SparseMatrix& a, int i) {
  return a.row_offsets[i + 1] - a.row_offsets[i];
}

}  // namespace

TEST_CASE("convdiff grids have five-point structure") {
  ProblemSpec spec;
  spec.grid = 4;
  const auto a = mpk::gen_convdiff(spec);
  CHECK(a.n == 16);
  a.validate();
  for (int i = 0; i < a.n; ++i) {
    CHECK(row_nnz(a, i) <= 5);
    CHECK(row_nnz(a, i) >= 3);
    CHECK(a.at(i, i) > 0.0);
  }
  CHECK(row_nnz(a, 0) == 3);   // corner
  CHECK(row_nnz(a, 5) == 5);   // interior
}

TEST_CASE("pure diffusion reduces to the scaled Laplacian stencil") {
  ProblemSpec spec;
  spec.grid = 3;
  spec.eps = 1.0;
  spec.wind = WindKind::Zero;
  const auto a = mpk::gen_convdiff(spec);
  // h = 1/4, so eps/h^2 = 16; center row is 16 * (-1, -1, 4, -1, -1)
  CHECK(a.at(4, 4) == 64.0);
  CHECK(a.at(4, 3) == -16.0);
  CHECK(a.at(4, 5) == -16.0);
  CHECK(a.at(4, 1) == -16.0);
  CHECK(a.at(4, 7) == -16.0);
  CHECK(row_nnz(a, 4) == 5);
}

TEST_CASE("upwinding keeps the convection-dominated matrix an M-matrix") {
  ProblemSpec spec;
  spec.grid = 8;
  spec.eps = 0.01;
  spec.wind = WindKind::Constant;
  spec.wind_x = 1.0;
  spec.wind_y = 0.0;
  const auto a = mpk::gen_convdiff(spec);
  for (int i = 0; i < a.n; ++i) {
    double row_sum = 0.0;
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      const int j = a.col_indices[k];
      if (j == i) {
        CHECK(a.values[k] > 0.0);
      } else {
        CHECK(a.values[k] <= 0.0);
      }
      row_sum += a.values[k];
    }
    // diagonal dominance: interior rows sum to zero up to roundoff,
    // boundary rows keep the eliminated couplings as surplus
    CHECK(row_sum >= -1e-12 * a.at(i, i));
  }
}

TEST_CASE("zero wind gives an exactly symmetric matrix") {
  ProblemSpec spec;
  spec.grid = 5;
  spec.eps = 0.3;
  spec.wind = WindKind::Zero;
  const auto a = mpk::gen_convdiff(spec);
  for (int i = 0; i < a.n; ++i) {
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      const int j = a.col_indices[k];
      CHECK(a.values[k] == a.at(j, i));
    }
  }
}

TEST_CASE("recirculating wind is evaluated at the grid nodes") {
  ProblemSpec spec;
  spec.grid = 3;
  spec.eps = 1.0;
  spec.wind = WindKind::Recirculating;
  const auto a = mpk::gen_convdiff(spec);
  // node (1/4, 1/4): wx = 2y(1-x^2) = 0.46875, wy = -2x(1-y^2) = -0.46875
  CHECK(a.at(0, 0) == 67.75);
  CHECK(a.at(0, 1) == -16.0);
  CHECK(a.at(0, 3) == -17.875);

  // the matrix is genuinely nonsymmetric
  bool asymmetric = false;
  for (int i = 0; i < a.n && !asymmetric; ++i) {
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      if (a.values[k] != a.at(a.col_indices[k], i)) {
        asymmetric = true;
        break;
      }
    }
  }
  CHECK(asymmetric);
}

TEST_CASE("centered convection splits the wind across both neighbors") {
  ProblemSpec spec;
  spec.grid = 3;
  spec.eps = 1.0;
  spec.wind = WindKind::Constant;
  spec.wind_x = 1.0;
  spec.wind_y = 0.0;
  spec.centered = true;
  const auto a = mpk::gen_convdiff(spec);
  // cx = wx/(2h) = 2: left = -16-2, right = -16+2, diagonal untouched
  CHECK(a.at(4, 4) == 64.0);
  CHECK(a.at(4, 3) == -18.0);
  CHECK(a.at(4, 5) == -14.0);
  CHECK(a.at(4, 1) == -16.0);
  CHECK(a.at(4, 7) == -16.0);
}

TEST_CASE("anisotropic diffusion weights the axes by eps") {
  ProblemSpec spec;
  spec.grid = 3;
  spec.eps = 0.01;
  const auto a = mpk::gen_anisodiff(spec);
  const double h = 0.25;
  const double ax = spec.eps / (h * h);
  const double ay = 1.0 / (h * h);
  CHECK(a.at(4, 4) == 2.0 * (ax + ay));
  CHECK(a.at(4, 3) == -ax);
  CHECK(a.at(4, 5) == -ax);
  CHECK(a.at(4, 1) == -ay);
  CHECK(a.at(4, 7) == -ay);
}

TEST_CASE("matrix market reader accepts general coordinate files") {
  const auto path = write_temp("general.mtx",
                               "%%MatrixMarket matrix coordinate real general\n"
                               "% a comment line\n"
                               "3 3 4\n"
                               "1 1 2.0\n"
                               "2 2 3.0\n"
                               "3 3 4.0\n"
                               "1 3 -1.5\n");
  const auto a = mpk::read_matrix_market(path);
  std::filesystem::remove(path);
  CHECK(a.n == 3);
  CHECK(a.nnz() == 4);
  CHECK(a.at(0, 0) == 2.0);
  CHECK(a.at(0, 2) == -1.5);
  CHECK(a.at(2, 2) == 4.0);
  CHECK(a.at(1, 0) == 0.0);
}

TEST_CASE("symmetric files mirror their off-diagonal entries") {
  const auto path = write_temp("symmetric.mtx",
                               "%%MatrixMarket matrix coordinate real symmetric\n"
                               "3 3 3\n"
                               "1 1 2.0\n"
                               "2 1 -1.0\n"
                               "3 3 5.0\n");
  const auto a = mpk::read_matrix_market(path);
  std::filesystem::remove(path);
  CHECK(a.nnz() == 4);
  CHECK(a.at(1, 0) == -1.0);
  CHECK(a.at(0, 1) == -1.0);
  CHECK(a.at(2, 2) == 5.0);
}

TEST_CASE("reader errors carry the offending line number") {
  expect_read_error("nobanner.mtx", "3 3 1\n1 1 2.0\n",
                    ":1: missing %%MatrixMarket banner");
  expect_read_error("complexfield.mtx",
                    "%%MatrixMarket matrix coordinate complex general\n"
                    "2 2 1\n1 1 1.0 0.0\n",
                    ":1: unsupported field 'complex'");
  expect_read_error("arrayformat.mtx",
                    "%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n",
                    ":1: unsupported format 'array'");
  expect_read_error("skew.mtx",
                    "%%MatrixMarket matrix coordinate real skew-symmetric\n"
                    "2 2 1\n2 1 1.0\n",
                    ":1: unsupported symmetry 'skew-symmetric'");
  expect_read_error("rect.mtx",
                    "%%MatrixMarket matrix coordinate real general\n"
                    "% note\n"
                    "3 4 2\n1 1 1.0\n2 2 1.0\n",
                    ":3: matrix must be square");
  expect_read_error("range.mtx",
                    "%%MatrixMarket matrix coordinate real general\n"
                    "2 2 2\n1 1 1.0\n3 1 1.0\n",
                    ":4: entry index out of range");
  expect_read_error("badentry.mtx",
                    "%%MatrixMarket matrix coordinate real general\n"
                    "2 2 1\nfish\n",
                    ":3: malformed entry line");
  expect_read_error("truncated.mtx",
                    "%%MatrixMarket matrix coordinate real general\n"
                    "2 2 3\n1 1 1.0\n",
                    "unexpected end of file");
  expect_read_error("nosize.mtx",
                    "%%MatrixMarket matrix coordinate real general\n% only\n",
                    "missing size line");
  CHECK_THROWS_AS(mpk::read_matrix_market("/nonexistent/file.mtx"),
                  std::runtime_error);
}

TEST_CASE("write then read reproduces every value bit for bit") {
  std::vector<mpk::Triplet> t{{0, 0, 1.0 / 3.0},
                              {0, 2, 1e-15},
                              {1, 1, -2.718281828459045},
                              {2, 0, 6.02214076e23},
                              {2, 2, -0.1}};
  const auto a = mpk::from_triplets(3, t);
  const auto path =
      (std::filesystem::temp_directory_path() / "mpk_roundtrip.mtx").string();
  mpk::write_matrix_market(a, path);
  const auto back = mpk::read_matrix_market(path);
  std::filesystem::remove(path);
  CHECK(back.n == a.n);
  REQUIRE(back.nnz() == a.nnz());
  CHECK(back.row_offsets == a.row_offsets);
  CHECK(back.col_indices == a.col_indices);
  CHECK(back.values == a.values);
}

TEST_CASE("random right-hand sides are deterministic in the seed") {
  ProblemSpec spec;
  spec.rhs = mpk::RhsKind::Random;
  spec.rhs_seed = 42;
  const auto b1 = mpk::make_rhs(spec, 100);
  const auto b2 = mpk::make_rhs(spec, 100);
  CHECK(b1 == b2);
  for (double v : b1) {
    CHECK(v >= -1.0);
    CHECK(v < 1.0);
  }
  spec.rhs_seed = 43;
  CHECK(mpk::make_rhs(spec, 100) != b1);

  spec.rhs = mpk::RhsKind::Ones;
  const auto ones = mpk::make_rhs(spec, 4);
  CHECK(ones == std::vector<double>(4, 1.0));
}

TEST_CASE("vector files parse whitespace-separated doubles") {
  const auto path = write_temp("vec.txt", "1.0 2.5\n-3.0\n");
  const auto v = mpk::read_vector_file(path, 3);
  CHECK(v == std::vector<double>{1.0, 2.5, -3.0});
  CHECK_THROWS_AS(mpk::read_vector_file(path, 5), std::runtime_error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(mpk::read_vector_file("/nonexistent/vec.txt"),
                  std::runtime_error);
}

TEST_CASE("problem specs parse defaults and full forms") {
  const auto d = mpk::parse_problem_spec("convdiff");
  CHECK(d.kind == ProblemSpec::Kind::ConvDiff);
  CHECK(d.grid == 32);
  CHECK(d.eps == 1.0);
  CHECK(d.wind == WindKind::Recirculating);
  CHECK_FALSE(d.centered);

  const auto full = mpk::parse_problem_spec(
      "convdiff:grid=8,eps=0.1,wind=const(1,-2),scheme=centered");
  CHECK(full.grid == 8);
  CHECK(full.eps == 0.1);
  CHECK(full.wind == WindKind::Constant);
  CHECK(full.wind_x == 1.0);
  CHECK(full.wind_y == -2.0);
  CHECK(full.centered);

  const auto aniso = mpk::parse_problem_spec("anisodiff:grid=16,eps=0.01");
  CHECK(aniso.kind == ProblemSpec::Kind::AnisoDiff);
  CHECK(aniso.wind == WindKind::Zero);

  const auto file = mpk::parse_problem_spec("file:some/matrix.mtx");
  CHECK(file.kind == ProblemSpec::Kind::File);
  CHECK(file.path == "some/matrix.mtx");

  CHECK(mpk::parse_problem_spec("convdiff:wind=zero").wind == WindKind::Zero);
}

TEST_CASE("malformed problem specs are rejected") {
  CHECK_THROWS_AS(mpk::parse_problem_spec("poisson"), std::invalid_argument);
  CHECK_THROWS_AS(mpk::parse_problem_spec("convdiff:shape=disk"),
                  std::invalid_argument);
  CHECK_THROWS_AS(mpk::parse_problem_spec("convdiff:scheme=downwind"),
                  std::invalid_argument);
  CHECK_THROWS_AS(mpk::parse_problem_spec("convdiff:grid=1"),
                  std::invalid_argument);
  CHECK_THROWS_AS(mpk::parse_problem_spec("convdiff:eps=0"),
                  std::invalid_argument);
  CHECK_THROWS_AS(mpk::parse_problem_spec("convdiff:eps=abc"),
                  std::invalid_argument);
  CHECK_THROWS_AS(mpk::parse_problem_spec("convdiff:wind=fish"),
                  std::invalid_argument);
  CHECK_THROWS_AS(mpk::parse_problem_spec("convdiff:wind=const(1)"),
                  std::invalid_argument);
  CHECK_THROWS_AS(mpk::parse_problem_spec("file:"), std::invalid_argument);
}

TEST_CASE("rhs specs parse all three sources") {
  ProblemSpec spec;
  mpk::parse_rhs_spec("ones", spec);
  CHECK(spec.rhs == mpk::RhsKind::Ones);
  mpk::parse_rhs_spec("random", spec);
  CHECK(spec.rhs == mpk::RhsKind::Random);
  CHECK(spec.rhs_seed == 0);
  mpk::parse_rhs_spec("random:seed=7", spec);
  CHECK(spec.rhs_seed == 7);
  mpk::parse_rhs_spec("file:b.txt", spec);
  CHECK(spec.rhs == mpk::RhsKind::File);
  CHECK(spec.rhs_path == "b.txt");
  CHECK_THROWS_AS(mpk::parse_rhs_spec("gaussian", spec), std::invalid_argument);
  CHECK_THROWS_AS(mpk::parse_rhs_spec("random:sd=3", spec), std::invalid_argument);
}

TEST_CASE("build_problem assembles matrix, rhs, and label") {
  const auto spec = mpk::parse_problem_spec("convdiff:grid=4,eps=0.5");
  const auto p = mpk::build_problem(spec);
  CHECK(p.a.n == 16);
  CHECK(p.b == std::vector<double>(16, 1.0));
  CHECK(p.label == "convdiff grid=4 eps=0.5");

  const auto path = write_temp("fromfile.mtx",
                               "%%MatrixMarket matrix coordinate real general\n"
                               "2 2 2\n1 1 1.0\n2 2 2.0\n");
  auto fspec = mpk::parse_problem_spec("file:" + path);
  const auto fp = mpk::build_problem(fspec);
  std::filesystem::remove(path);
  CHECK(fp.a.n == 2);
  CHECK(fp.label == path);
}
