#include "mpk/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mpk {
namespace {

[[noreturn]] void fail(const std::string& path, long line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file '" + path + "'");

  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) fail(path, 1, "empty file");
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") fail(path, lineno, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") fail(path, lineno, "unsupported object '" + object + "'");
  if (format != "coordinate") fail(path, lineno, "unsupported format '" + format + "'");
  if (field != "real") fail(path, lineno, "unsupported field '" + field + "'");
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") {
    fail(path, lineno, "unsupported symmetry '" + symmetry + "'");
  }

  long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream sizes(line);
    if (!(sizes >> rows >> cols >> nnz)) fail(path, lineno, "malformed size line");
    break;
  }
  if (rows < 0) fail(path, lineno, "missing size line");
  if (rows != cols) {
    fail(path, lineno, "matrix must be square, got " + std::to_string(rows) + "x" +
                           std::to_string(cols));
  }

  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(symmetric ? 2 * nnz : nnz));
  long seen = 0;
  while (seen < nnz) {
    if (!std::getline(in, line)) fail(path, lineno + 1, "unexpected end of file");
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream entry(line);
    long i = 0, j = 0;
    double v = 0.0;
    if (!(entry >> i >> j >> v)) fail(path, lineno, "malformed entry line");
    if (i < 1 || i > rows || j < 1 || j > cols) {
      fail(path, lineno, "entry index out of range");
    }
    entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
    if (symmetric && i != j) {
      entries.push_back({static_cast<int>(j - 1), static_cast<int>(i - 1), v});
    }
    ++seen;
  }
  return from_triplets(static_cast<int>(rows), std::move(entries));
}

void write_matrix_market(const SparseMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file '" + path + "'");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.n << " " << a.n << " " << a.nnz() << "\n";
  char buf[64];
  for (int i = 0; i < a.n; ++i) {
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1, a.col_indices[k] + 1,
                    a.values[k]);
      out << buf;
    }
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace mpk
