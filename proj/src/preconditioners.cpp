#include "mpk/preconditioners.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

#include "mpk/kernels.hpp"

namespace mpk {
namespace {

void check_dims(const Preconditioner& p, std::span<const double> in,
                std::span<double> out) {
  const auto n = static_cast<size_t>(p.dimension());
  if (in.size() != n || out.size() != n) {
    throw std::invalid_argument(p.name() + ": apply expects vectors of length " +
                                std::to_string(n));
  }
}

class IdentityPrecond final : public Preconditioner {
 public:
  explicit IdentityPrecond(int n) : n_(n) {}

  void apply(std::span<const double> in, std::span<double> out) const override {
    check_dims(*this, in, out);
    std::copy(in.begin(), in.end(), out.begin());
  }
  [[nodiscard]] std::string name() const override { return "identity"; }
  [[nodiscard]] int dimension() const noexcept override { return n_; }

 private:
  int n_;
};

class ScaledIdentityPrecond final : public Preconditioner {
 public:
  ScaledIdentityPrecond(int n, double gamma) : n_(n), inv_gamma_(1.0 / gamma) {
    if (gamma == 0.0 || !std::isfinite(gamma)) {
      throw std::runtime_error("scaled_identity: gamma must be finite and nonzero");
    }
  }

  void apply(std::span<const double> in, std::span<double> out) const override {
    check_dims(*this, in, out);
    for (size_t i = 0; i < in.size(); ++i) out[i] = in[i] * inv_gamma_;
  }
  [[nodiscard]] std::string name() const override { return "scaled_identity"; }
  [[nodiscard]] int dimension() const noexcept override { return n_; }

 private:
  int n_;
  double inv_gamma_;
};

std::vector<double> extract_diagonal(const SparseMatrix& a, const char* who) {
  std::vector<double> diag(a.n, 0.0);
  std::vector<bool> seen(a.n, false);
  for (int i = 0; i < a.n; ++i) {
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      if (a.col_indices[k] == i) {
        diag[i] = a.values[k];
        seen[i] = true;
      }
    }
  }
  for (int i = 0; i < a.n; ++i) {
    if (!seen[i] || diag[i] == 0.0) {
      throw std::runtime_error(std::string(who) + ": zero diagonal at row " +
                               std::to_string(i));
    }
  }
  return diag;
}

class JacobiPrecond final : public Preconditioner {
 public:
  explicit JacobiPrecond(const SparseMatrix& a) : n_(a.n) {
    inv_diag_ = extract_diagonal(a, "jacobi");
    for (double& d : inv_diag_) d = 1.0 / d;
  }

  void apply(std::span<const double> in, std::span<double> out) const override {
    check_dims(*this, in, out);
    for (size_t i = 0; i < in.size(); ++i) out[i] = in[i] * inv_diag_[i];
  }
  [[nodiscard]] std::string name() const override { return "jacobi"; }
  [[nodiscard]] int dimension() const noexcept override { return n_; }

 private:
  int n_;
  std::vector<double> inv_diag_;
};

// M = (D + wL) D^{-1} (D + wU) / (w(2-w)); apply solves M x = v via one
// forward and one backward triangular sweep.
class SsorPrecond final : public Preconditioner {
 public:
  SsorPrecond(const SparseMatrix& a, double omega) : a_(a), omega_(omega) {
    if (!(omega > 0.0 && omega < 2.0)) {
      throw std::runtime_error("ssor: omega must lie in (0, 2), got " +
                               std::to_string(omega));
    }
    diag_ = extract_diagonal(a, "ssor");
  }

  void apply(std::span<const double> in, std::span<double> out) const override {
    check_dims(*this, in, out);
    const int n = a_.n;
    const double scale = omega_ * (2.0 - omega_);
    // (D + wL) t = scale * v
    for (int i = 0; i < n; ++i) {
      double s = scale * in[i];
      for (int k = a_.row_offsets[i]; k < a_.row_offsets[i + 1]; ++k) {
        const int j = a_.col_indices[k];
        if (j < i) s -= omega_ * a_.values[k] * out[j];
      }
      out[i] = s / diag_[i];
    }
    // (D + wU) x = D t
    for (int i = n - 1; i >= 0; --i) {
      double s = diag_[i] * out[i];
      for (int k = a_.row_offsets[i]; k < a_.row_offsets[i + 1]; ++k) {
        const int j = a_.col_indices[k];
        if (j > i) s -= omega_ * a_.values[k] * out[j];
      }
      out[i] = s / diag_[i];
    }
  }
  [[nodiscard]] std::string name() const override { return "ssor"; }
  [[nodiscard]] int dimension() const noexcept override { return a_.n; }

 private:
  SparseMatrix a_;
  double omega_;
  std::vector<double> diag_;
};

class Ilu0Precond final : public Preconditioner {
 public:
  explicit Ilu0Precond(const SparseMatrix& a)
      : n_(a.n),
        row_offsets_(a.row_offsets),
        col_indices_(a.col_indices),
        luval_(a.values) {
    factorize(a);
  }

  void apply(std::span<const double> in, std::span<double> out) const override {
    check_dims(*this, in, out);
    // L z = v with unit diagonal
    for (int i = 0; i < n_; ++i) {
      double s = in[i];
      for (int k = row_offsets_[i]; k < diag_ptr_[i]; ++k) {
        s -= luval_[k] * out[col_indices_[k]];
      }
      out[i] = s;
    }
    // U x = z
    for (int i = n_ - 1; i >= 0; --i) {
      double s = out[i];
      for (int k = diag_ptr_[i] + 1; k < row_offsets_[i + 1]; ++k) {
        s -= luval_[k] * out[col_indices_[k]];
      }
      out[i] = s / luval_[diag_ptr_[i]];
    }
  }
  [[nodiscard]] std::string name() const override { return "ilu0"; }
  [[nodiscard]] int dimension() const noexcept override { return n_; }

 private:
  void factorize(const SparseMatrix& a) {
    const double pivot_tol = 1e-14 * a.max_abs_value();
    diag_ptr_.assign(n_, -1);
    std::vector<int> pos(n_, -1);
    for (int i = 0; i < n_; ++i) {
      const int row_begin = row_offsets_[i];
      const int row_end = row_offsets_[i + 1];
      for (int k = row_begin; k < row_end; ++k) pos[col_indices_[k]] = k;

      for (int k = row_begin; k < row_end; ++k) {
        const int c = col_indices_[k];
        if (c >= i) break;
        const double mult = luval_[k] / luval_[diag_ptr_[c]];
        luval_[k] = mult;
        for (int kk = diag_ptr_[c] + 1; kk < row_offsets_[c + 1]; ++kk) {
          const int p = pos[col_indices_[kk]];
          if (p >= 0) luval_[p] -= mult * luval_[kk];
        }
      }

      const int dp = pos[i];
      if (dp < 0 || luval_[dp] == 0.0 || std::abs(luval_[dp]) < pivot_tol) {
        throw std::runtime_error("ilu0: zero pivot at row " + std::to_string(i));
      }
      diag_ptr_[i] = dp;
      for (int k = row_begin; k < row_end; ++k) pos[col_indices_[k]] = -1;
    }
  }

  int n_;
  std::vector<int> row_offsets_;
  std::vector<int> col_indices_;
  std::vector<double> luval_;
  std::vector<int> diag_ptr_;
};

class CombinationPrecond final : public Preconditioner {
 public:
  CombinationPrecond(std::vector<double> weights,
                     std::vector<PreconditionerPtr> children)
      : weights_(std::move(weights)), children_(std::move(children)) {
    if (children_.empty() || weights_.size() != children_.size()) {
      throw std::runtime_error(
          "combination: needs matching, non-empty weights and children");
    }
    double wsum = 0.0;
    for (double w : weights_) wsum += std::abs(w);
    if (!(wsum > 0.0)) {
      throw std::runtime_error("combination: weights must satisfy sum |w_i| > 0");
    }
    for (const auto& c : children_) {
      if (!c || c->dimension() != children_.front()->dimension()) {
        throw std::runtime_error("combination: children must share one dimension");
      }
    }
  }

  void apply(std::span<const double> in, std::span<double> out) const override {
    check_dims(*this, in, out);
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> tmp(in.size());
    for (size_t c = 0; c < children_.size(); ++c) {
      children_[c]->apply(in, tmp);
      kernels::axpy(in.size(), weights_[c], tmp.data(), out.data());
    }
  }
  [[nodiscard]] std::string name() const override { return "combination"; }
  [[nodiscard]] int dimension() const noexcept override {
    return children_.front()->dimension();
  }

 private:
  std::vector<double> weights_;
  std::vector<PreconditionerPtr> children_;
};

double parse_number(const std::string& text, const std::string& spec) {
  size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad preconditioner spec '" + spec +
                                "': expected a number, got '" + text + "'");
  }
  if (used != text.size()) {
    throw std::invalid_argument("bad preconditioner spec '" + spec +
                                "': trailing characters in number '" + text + "'");
  }
  return value;
}

// key=value, rejecting anything else
double parse_param(const std::string& params, const std::string& key,
                   const std::string& spec) {
  const auto eq = params.find('=');
  if (eq == std::string::npos || params.substr(0, eq) != key) {
    throw std::invalid_argument("bad preconditioner spec '" + spec +
                                "': expected " + key + "=<value>");
  }
  return parse_number(params.substr(eq + 1), spec);
}

PreconditionerPtr parse_combo(const std::string& params, const std::string& spec,
                              const SparseMatrix& a) {
  std::vector<double> weights;
  std::vector<PreconditionerPtr> children;
  size_t start = 0;
  while (start <= params.size()) {
    auto plus = params.find('+', start);
    if (plus == std::string::npos) plus = params.size();
    const std::string term = params.substr(start, plus - start);
    const auto star = term.find('*');
    if (term.empty() || star == std::string::npos || star == 0 ||
        star + 1 == term.size()) {
      throw std::invalid_argument("bad preconditioner spec '" + spec +
                                  "': combo terms must look like weight*kind");
    }
    weights.push_back(parse_number(term.substr(0, star), spec));
    children.push_back(make_preconditioner(term.substr(star + 1), a));
    start = plus + 1;
  }
  try {
    return make_combination(std::move(weights), std::move(children));
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument("bad preconditioner spec '" + spec + "': " +
                                e.what());
  }
}

}  // namespace

PreconditionerPtr make_identity(int n) {
  return std::make_shared<IdentityPrecond>(n);
}

PreconditionerPtr make_scaled_identity(int n, double gamma) {
  return std::make_shared<ScaledIdentityPrecond>(n, gamma);
}

PreconditionerPtr make_jacobi(const SparseMatrix& a) {
  a.validate();
  return std::make_shared<JacobiPrecond>(a);
}

PreconditionerPtr make_ssor(const SparseMatrix& a, double omega) {
  a.validate();
  return std::make_shared<SsorPrecond>(a, omega);
}

PreconditionerPtr make_ilu0(const SparseMatrix& a) {
  a.validate();
  return std::make_shared<Ilu0Precond>(a);
}

PreconditionerPtr make_combination(std::vector<double> weights,
                                   std::vector<PreconditionerPtr> children) {
  return std::make_shared<CombinationPrecond>(std::move(weights),
                                              std::move(children));
}

PreconditionerPtr make_preconditioner(const std::string& spec,
                                      const SparseMatrix& a) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string params =
      colon == std::string::npos ? std::string() : spec.substr(colon + 1);

  if (kind == "identity" || kind == "jacobi" || kind == "ilu0") {
    if (!params.empty()) {
      throw std::invalid_argument("bad preconditioner spec '" + spec + "': " +
                                  kind + " takes no parameters");
    }
    if (kind == "identity") return make_identity(a.n);
    if (kind == "jacobi") return make_jacobi(a);
    return make_ilu0(a);
  }
  if (kind == "ssor") {
    const double omega = params.empty() ? 1.0 : parse_param(params, "omega", spec);
    return make_ssor(a, omega);
  }
  if (kind == "badscale") {
    const double g = params.empty() ? 100.0 : parse_param(params, "gamma", spec);
    return make_scaled_identity(a.n, g * a.max_abs_diag());
  }
  if (kind == "combo") {
    if (params.empty()) {
      throw std::invalid_argument("bad preconditioner spec '" + spec +
                                  "': combo needs at least one weight*kind term");
    }
    return parse_combo(params, spec, a);
  }
  throw std::invalid_argument("unknown preconditioner kind '" + kind + "'");
}

}  // namespace mpk
