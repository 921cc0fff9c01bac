#include "mpk/problems.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mpk/matrix_market.hpp"

namespace mpk {
namespace {

[[noreturn]] void bad_spec(const std::string& text, const std::string& why) {
  throw std::invalid_argument("bad problem spec '" + text + "': " + why);
}

// Splits on commas that are not nested inside parentheses, so that
// wind=const(1,0) survives as one token.
std::vector<std::string> split_params(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (s[i] == ',' && depth == 0)) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    } else if (s[i] == '(') {
      ++depth;
    } else if (s[i] == ')') {
      --depth;
    }
  }
  return out;
}

double to_number(const std::string& v, const std::string& text) {
  size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    bad_spec(text, "expected a number, got '" + v + "'");
  }
  if (used != v.size()) bad_spec(text, "trailing characters in number '" + v + "'");
  return x;
}

void parse_wind(const std::string& v, ProblemSpec& spec, const std::string& text) {
  if (v == "zero" || v == "none") {
    spec.wind = WindKind::Zero;
    return;
  }
  if (v == "recirc" || v == "recirculating") {
    spec.wind = WindKind::Recirculating;
    return;
  }
  if (v.rfind("const(", 0) == 0 && v.back() == ')') {
    const std::string inner = v.substr(6, v.size() - 7);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) bad_spec(text, "const wind needs (wx,wy)");
    spec.wind = WindKind::Constant;
    spec.wind_x = to_number(inner.substr(0, comma), text);
    spec.wind_y = to_number(inner.substr(comma + 1), text);
    return;
  }
  bad_spec(text, "unknown wind '" + v + "'");
}

struct Stencil {
  double diag, left, right, down, up;
};

Stencil convdiff_stencil(double eps, double h, double wx, double wy, bool centered) {
  const double d = eps / (h * h);
  Stencil s{4.0 * d, -d, -d, -d, -d};
  if (centered) {
    const double cx = wx / (2.0 * h);
    const double cy = wy / (2.0 * h);
    s.left -= cx;
    s.right += cx;
    s.down -= cy;
    s.up += cy;
  } else {
    s.diag += (std::abs(wx) + std::abs(wy)) / h;
    s.left -= std::max(wx, 0.0) / h;
    s.right -= std::max(-wx, 0.0) / h;
    s.down -= std::max(wy, 0.0) / h;
    s.up -= std::max(-wy, 0.0) / h;
  }
  return s;
}

}  // namespace

void ProblemSpec::validate() const {
  if (kind == Kind::File) {
    if (path.empty()) throw std::invalid_argument("file problem needs a path");
    return;
  }
  if (grid < 2) {
    throw std::invalid_argument("problem grid must be >= 2, got " +
                                std::to_string(grid));
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("problem eps must be > 0, got " +
                                std::to_string(eps));
  }
}

ProblemSpec parse_problem_spec(const std::string& text) {
  ProblemSpec spec;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (kind == "convdiff") {
    spec.kind = ProblemSpec::Kind::ConvDiff;
  } else if (kind == "anisodiff") {
    spec.kind = ProblemSpec::Kind::AnisoDiff;
    spec.wind = WindKind::Zero;
  } else if (kind == "file") {
    spec.kind = ProblemSpec::Kind::File;
    if (colon == std::string::npos || colon + 1 == text.size()) {
      bad_spec(text, "file kind needs file:PATH");
    }
    spec.path = text.substr(colon + 1);
    return spec;
  } else {
    bad_spec(text, "unknown kind '" + kind + "'");
  }

  if (colon == std::string::npos) {
    spec.validate();
    return spec;
  }
  for (const std::string& kv : split_params(text.substr(colon + 1))) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) bad_spec(text, "expected key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (key == "grid") {
      spec.grid = static_cast<int>(to_number(value, text));
    } else if (key == "eps") {
      spec.eps = to_number(value, text);
    } else if (key == "wind") {
      parse_wind(value, spec, text);
    } else if (key == "scheme") {
      if (value == "centered") {
        spec.centered = true;
      } else if (value == "upwind") {
        spec.centered = false;
      } else {
        bad_spec(text, "scheme must be upwind or centered");
      }
    } else {
      bad_spec(text, "unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

void parse_rhs_spec(const std::string& text, ProblemSpec& spec) {
  if (text == "ones") {
    spec.rhs = RhsKind::Ones;
    return;
  }
  if (text == "random" || text.rfind("random:", 0) == 0) {
    spec.rhs = RhsKind::Random;
    if (text.size() > 7) {
      const std::string params = text.substr(7);
      if (params.rfind("seed=", 0) != 0) {
        throw std::invalid_argument("bad rhs spec '" + text +
                                    "': expected random:seed=N");
      }
      spec.rhs_seed = std::stoull(params.substr(5));
    }
    return;
  }
  if (text.rfind("file:", 0) == 0) {
    spec.rhs = RhsKind::File;
    spec.rhs_path = text.substr(5);
    return;
  }
  throw std::invalid_argument("bad rhs spec '" + text +
                              "': expected ones, random[:seed=N], or file:PATH");
}

SparseMatrix gen_convdiff(const ProblemSpec& spec) {
  spec.validate();
  const int g = spec.grid;
  const double h = 1.0 / (g + 1);
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(5) * g * g);

  for (int j = 0; j < g; ++j) {
    const double y = (j + 1) * h;
    for (int i = 0; i < g; ++i) {
      const double x = (i + 1) * h;
      double wx = 0.0, wy = 0.0;
      if (spec.wind == WindKind::Constant) {
        wx = spec.wind_x;
        wy = spec.wind_y;
      } else if (spec.wind == WindKind::Recirculating) {
        wx = 2.0 * y * (1.0 - x * x);
        wy = -2.0 * x * (1.0 - y * y);
      }
      const Stencil s = convdiff_stencil(spec.eps, h, wx, wy, spec.centered);
      const int row = j * g + i;
      trips.push_back({row, row, s.diag});
      if (i > 0) trips.push_back({row, row - 1, s.left});
      if (i < g - 1) trips.push_back({row, row + 1, s.right});
      if (j > 0) trips.push_back({row, row - g, s.down});
      if (j < g - 1) trips.push_back({row, row + g, s.up});
    }
  }
  return from_triplets(g * g, std::move(trips));
}

SparseMatrix gen_anisodiff(const ProblemSpec& spec) {
  spec.validate();
  const int g = spec.grid;
  const double h = 1.0 / (g + 1);
  const double ax = spec.eps / (h * h);
  const double ay = 1.0 / (h * h);
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(5) * g * g);

  for (int j = 0; j < g; ++j) {
    for (int i = 0; i < g; ++i) {
      const int row = j * g + i;
      trips.push_back({row, row, 2.0 * (ax + ay)});
      if (i > 0) trips.push_back({row, row - 1, -ax});
      if (i < g - 1) trips.push_back({row, row + 1, -ax});
      if (j > 0) trips.push_back({row, row - g, -ay});
      if (j < g - 1) trips.push_back({row, row + g, -ay});
    }
  }
  return from_triplets(g * g, std::move(trips));
}

std::vector<double> make_rhs(const ProblemSpec& spec, int n) {
  switch (spec.rhs) {
    case RhsKind::Ones:
      return std::vector<double>(static_cast<size_t>(n), 1.0);
    case RhsKind::Random: {
      std::vector<double> b(static_cast<size_t>(n));
      std::mt19937_64 rng(spec.rhs_seed);
      for (double& v : b) {
        // top 53 bits -> [0,1); the explicit mapping keeps output identical
        // across standard libraries
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        v = 2.0 * u - 1.0;
      }
      return b;
    }
    case RhsKind::File:
      return read_vector_file(spec.rhs_path, n);
  }
  throw std::logic_error("unreachable rhs kind");
}

Problem build_problem(const ProblemSpec& spec) {
  spec.validate();
  Problem p;
  std::ostringstream label;
  switch (spec.kind) {
    case ProblemSpec::Kind::ConvDiff:
      p.a = gen_convdiff(spec);
      label << "convdiff grid=" << spec.grid << " eps=" << spec.eps;
      break;
    case ProblemSpec::Kind::AnisoDiff:
      p.a = gen_anisodiff(spec);
      label << "anisodiff grid=" << spec.grid << " eps=" << spec.eps;
      break;
    case ProblemSpec::Kind::File:
      p.a = read_matrix_market(spec.path);
      label << spec.path;
      break;
  }
  p.b = make_rhs(spec, p.a.n);
  p.label = label.str();
  return p;
}

std::vector<double> read_vector_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file '" + path + "'");
  std::vector<double> v;
  double x = 0.0;
  while (in >> x) v.push_back(x);
  if (n >= 0 && v.size() != static_cast<size_t>(n)) {
    throw std::runtime_error("vector file '" + path + "' has " +
                             std::to_string(v.size()) + " entries, expected " +
                             std::to_string(n));
  }
  return v;
}

}  // namespace mpk
