#include "mpk/block_orthogonalize.hpp"

#include <cassert>
#include <stdexcept>
#include <vector>

#include "mpk/kernels.hpp"

namespace mpk {

BlockOrthogonalizeResult block_orthogonalize(const ColumnBlock& w, const ColumnBlock& basis,
                                             double deflate_tol, int iteration) {
  if (deflate_tol <= 0.0) throw std::invalid_argument("block_orthogonalize: deflate_tol must be > 0");
  if (w.cols() > 0 && basis.cols() > 0 && w.rows() != basis.rows()) {
    throw std::invalid_argument("block_orthogonalize: row count mismatch");
  }
  assert(basis.orthonormality_defect() <= 1e-8 && "basis must be orthonormal");

  const std::size_t n = w.rows();
  const std::size_t nb = basis.cols();
  const std::size_t m = w.cols();

  BlockOrthogonalizeResult res;
  res.v_new = ColumnBlock(n);
  res.survivor_of.assign(m, -1);

  // Coefficients are collected per candidate column; rows for survivors that
  // appear later stay zero for earlier candidates.
  std::vector<std::vector<double>> cols(m);

  std::vector<double> v(n);
  for (std::size_t j = 0; j < m; ++j) {
    auto wj = w.col(j);
    v.assign(wj.begin(), wj.end());
    const double pre_norm = kernels::nrm2(n, v.data());

    std::vector<double> h(nb + res.v_new.cols(), 0.0);
    // Two MGS passes; the second mops up cancellation from the first.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t q = 0; q < nb; ++q) {
        const double hq = kernels::dot(n, basis.col(q).data(), v.data());
        kernels::axpy(n, -hq, basis.col(q).data(), v.data());
        h[q] += hq;
      }
      for (std::size_t q = 0; q < res.v_new.cols(); ++q) {
        const double hq = kernels::dot(n, res.v_new.col(q).data(), v.data());
        kernels::axpy(n, -hq, res.v_new.col(q).data(), v.data());
        h[nb + q] += hq;
      }
    }

    const double post_norm = kernels::nrm2(n, v.data());
    const double threshold = deflate_tol * pre_norm;
    if (post_norm < threshold || pre_norm == 0.0) {
      DeflationEvent ev;
      ev.iteration = iteration;
      ev.candidate_index = static_cast<int>(j);
      ev.norm_before = post_norm;
      // A zero input column has no meaningful relative threshold.
      ev.threshold = pre_norm == 0.0 ? deflate_tol : threshold;
      res.events.push_back(ev);
      cols[j] = std::move(h);
    } else {
      kernels::scal(n, 1.0 / post_norm, v.data());
      res.v_new.append_column(v);
      res.survivor_of[j] = static_cast<int>(res.v_new.cols()) - 1;
      h.push_back(post_norm);
      cols[j] = std::move(h);
    }
  }

  // Assemble the dense coefficient matrix, zero-padding each candidate's
  // column to the final row count.
  res.coeff_rows = nb + res.v_new.cols();
  res.coeffs.assign(res.coeff_rows * m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t r = 0; r < cols[j].size(); ++r) {
      res.coeffs[j * res.coeff_rows + r] = cols[j][r];
    }
  }
  return res;
}

}  // namespace mpk
