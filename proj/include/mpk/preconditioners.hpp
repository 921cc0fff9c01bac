#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mpk/sparse_matrix.hpp"

namespace mpk {

// Inverse-action contract: apply() computes P^{-1} v for the kind's defining
// splitting. Setup data is immutable after construction, so apply is safe to
// call concurrently on distinct vectors.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;

  virtual void apply(std::span<const double> in, std::span<double> out) const = 0;
  [[nodiscard]] virtual std::string name() const = 0;
  [[nodiscard]] virtual int dimension() const noexcept = 0;

  [[nodiscard]] std::vector<double> apply(std::span<const double> in) const {
    std::vector<double> out(in.size());
    apply(in, out);
    return out;
  }
};

using PreconditionerPtr = std::shared_ptr<const Preconditioner>;

PreconditionerPtr make_identity(int n);
// gamma as given: apply(v) = v / gamma.
PreconditionerPtr make_scaled_identity(int n, double gamma);
// Throws std::runtime_error naming the row on a zero diagonal.
PreconditionerPtr make_jacobi(const SparseMatrix& a);
// SSOR splitting (D + wL) D^{-1} (D + wU) / (w(2-w)); omega in (0, 2).
PreconditionerPtr make_ssor(const SparseMatrix& a, double omega = 1.0);
// Incomplete LU with zero fill-in on A's sparsity pattern. Throws
// std::runtime_error naming the row when a pivot falls below
// 1e-14 * max|a_ij|.
PreconditionerPtr make_ilu0(const SparseMatrix& a);
// Weighted sum of child inverse actions; requires sum |w_i| > 0.
PreconditionerPtr make_combination(std::vector<double> weights,
                                   std::vector<PreconditionerPtr> children);

// Builds a preconditioner from a CLI spec string:
//   identity | jacobi | ssor:omega=1.0 | ilu0 |
//   badscale:gamma=100 | combo:0.5*ilu0+0.5*jacobi
// badscale:gamma=g maps to a scaled identity with gamma = g * max|diag(A)|.
// Throws std::invalid_argument on malformed specs.
PreconditionerPtr make_preconditioner(const std::string& spec, const SparseMatrix& a);

}  // namespace mpk
