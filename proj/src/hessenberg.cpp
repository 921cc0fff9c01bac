#include "mpk/hessenberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mpk/kernels.hpp"

namespace mpk {

void HessenbergStore::grow_rows(std::size_t new_rows) {
  if (new_rows < rows_) throw std::invalid_argument("HessenbergStore: rows cannot shrink");
  if (new_rows == rows_) return;
  std::vector<double> grown(new_rows * cols_, 0.0);
  for (std::size_t c = 0; c < cols_; ++c) {
    std::copy_n(entries_.data() + c * rows_, rows_, grown.data() + c * new_rows);
  }
  entries_ = std::move(grown);
  rows_ = new_rows;
}

void HessenbergStore::append_column(std::span<const double> col) {
  if (col.size() != rows_) throw std::invalid_argument("HessenbergStore: column length mismatch");
  entries_.insert(entries_.end(), col.begin(), col.end());
  ++cols_;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// One-sided Jacobi SVD of a tall column-major G (m x k, m >= k):
// G = U * diag(sigma) * V^T. On return g holds U*diag(sigma) (columns are
// orthogonal, norms = sigma), v is k x k column-major.
void jacobi_svd_inplace(std::size_t m, std::size_t k, std::vector<double>& g,
                        std::vector<double>& sigma, std::vector<double>& v) {
  v.assign(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) v[i * k + i] = 1.0;

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        double* gp = g.data() + p * m;
        double* gq = g.data() + q * m;
        const double app = kernels::dot(m, gp, gp);
        const double aqq = kernels::dot(m, gq, gq);
        const double apq = kernels::dot(m, gp, gq);
        if (std::abs(apq) <= 1e2 * kEps * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double a = gp[i];
          const double b = gq[i];
          gp[i] = c * a - s * b;
          gq[i] = s * a + c * b;
        }
        double* vp = v.data() + p * k;
        double* vq = v.data() + q * k;
        for (std::size_t i = 0; i < k; ++i) {
          const double a = vp[i];
          const double b = vq[i];
          vp[i] = c * a - s * b;
          vq[i] = s * a + c * b;
        }
      }
    }
    if (!rotated) break;
  }

  sigma.resize(k);
  for (std::size_t j = 0; j < k; ++j) sigma[j] = kernels::nrm2(m, g.data() + j * m);
}

// Minimum-norm least-squares solution via Jacobi SVD; handles any shape and
// rank. Returns y and whether the matrix was rank-deficient.
LsqSolution svd_min_norm(std::size_t rows, std::size_t cols, std::span<const double> a,
                         std::span<const double> rhs) {
  LsqSolution out;
  out.y.assign(cols, 0.0);

  const bool wide = rows < cols;
  const std::size_t m = wide ? cols : rows;  // tall dimension
  const std::size_t k = wide ? rows : cols;

  std::vector<double> g(m * k);
  if (wide) {
    // Work on A^T, which is tall.
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t r = 0; r < rows; ++r) g[r * cols + c] = a[c * rows + r];
    }
  } else {
    g.assign(a.begin(), a.end());
  }

  std::vector<double> sigma;
  std::vector<double> v;
  jacobi_svd_inplace(m, k, g, sigma, v);

  double smax = 0.0;
  for (double s : sigma) smax = std::max(smax, s);
  const double tol = static_cast<double>(std::max(rows, cols)) * kEps * smax;

  std::size_t rank = 0;
  // A (if tall):   A = U S V^T, y = V S^+ U^T rhs, U = g columns / sigma.
  // A^T (if wide): A = V S U^T, y = U S^+ V^T rhs.
  for (std::size_t j = 0; j < k; ++j) {
    if (sigma[j] <= tol || sigma[j] == 0.0) continue;
    ++rank;
    if (!wide) {
      const double uj_dot_rhs = kernels::dot(m, g.data() + j * m, rhs.data()) / sigma[j];
      kernels::axpy(cols, uj_dot_rhs / sigma[j], v.data() + j * k, out.y.data());
    } else {
      const double vj_dot_rhs = kernels::dot(k, v.data() + j * k, rhs.data());
      kernels::axpy(cols, vj_dot_rhs / (sigma[j] * sigma[j]), g.data() + j * m, out.y.data());
    }
  }
  out.rank_deficient = rank < std::min(rows, cols);

  std::vector<double> residual(rhs.begin(), rhs.end());
  std::vector<double> neg_y(out.y);
  kernels::scal(cols, -1.0, neg_y.data());
  kernels::gemv_colmajor(rows, cols, a.data(), neg_y.data(), residual.data());
  out.resnorm = kernels::nrm2(rows, residual.data());
  return out;
}

}  // namespace

LsqSolution dense_lsq_min_norm(std::size_t rows, std::size_t cols,
                               std::span<const double> a_colmajor,
                               std::span<const double> rhs) {
  if (a_colmajor.size() != rows * cols) {
    throw std::invalid_argument("dense_lsq_min_norm: matrix size mismatch");
  }
  if (rhs.size() != rows) throw std::invalid_argument("dense_lsq_min_norm: rhs size mismatch");

  LsqSolution out;
  if (cols == 0) {
    out.resnorm = kernels::nrm2(rows, rhs.data());
    return out;
  }
  if (rows < cols) return svd_min_norm(rows, cols, a_colmajor, rhs);

  // Householder QR fast path.
  std::vector<double> r(a_colmajor.begin(), a_colmajor.end());
  std::vector<double> qtb(rhs.begin(), rhs.end());
  std::vector<double> hv(rows);

  for (std::size_t j = 0; j < cols; ++j) {
    double* colj = r.data() + j * rows;
    const std::size_t len = rows - j;
    const double xnorm = kernels::nrm2(len, colj + j);
    if (xnorm == 0.0) {
      // Exactly dependent column; the pivoting-free path cannot continue.
      return svd_min_norm(rows, cols, a_colmajor, rhs);
    }
    const double alpha = colj[j] >= 0.0 ? -xnorm : xnorm;
    for (std::size_t i = 0; i < len; ++i) hv[i] = colj[j + i];
    hv[0] -= alpha;
    const double vtv = kernels::dot(len, hv.data(), hv.data());
    colj[j] = alpha;
    for (std::size_t i = 1; i < len; ++i) colj[j + i] = 0.0;
    if (vtv > 0.0) {
      for (std::size_t c = j + 1; c < cols; ++c) {
        double* colc = r.data() + c * rows + j;
        const double f = 2.0 * kernels::dot(len, hv.data(), colc) / vtv;
        kernels::axpy(len, -f, hv.data(), colc);
      }
      const double f = 2.0 * kernels::dot(len, hv.data(), qtb.data() + j) / vtv;
      kernels::axpy(len, -f, hv.data(), qtb.data() + j);
    }
  }

  double dmax = 0.0;
  for (std::size_t j = 0; j < cols; ++j) dmax = std::max(dmax, std::abs(r[j * rows + j]));
  const double dtol = static_cast<double>(std::max(rows, cols)) * kEps * dmax;
  for (std::size_t j = 0; j < cols; ++j) {
    if (std::abs(r[j * rows + j]) <= dtol) {
      return svd_min_norm(rows, cols, a_colmajor, rhs);
    }
  }

  out.y.assign(cols, 0.0);
  for (std::size_t jj = cols; jj-- > 0;) {
    double s = qtb[jj];
    for (std::size_t c = jj + 1; c < cols; ++c) s -= r[c * rows + jj] * out.y[c];
    out.y[jj] = s / r[jj * rows + jj];
  }
  out.resnorm = kernels::nrm2(rows - cols, qtb.data() + cols);
  return out;
}

LsqSolution hessenberg_lsq(const HessenbergStore& h, double beta) {
  if (beta < 0.0) throw std::invalid_argument("hessenberg_lsq: beta must be >= 0");
  std::vector<double> rhs(h.rows(), 0.0);
  if (!rhs.empty()) rhs[0] = beta;
  return dense_lsq_min_norm(h.rows(), h.cols(), h.entries(), rhs);
}

HessenbergQr::HessenbergQr(double beta) : beta_(beta) {
  if (beta < 0.0) throw std::invalid_argument("HessenbergQr: beta must be >= 0");
}

void HessenbergQr::grow_rows(std::size_t new_rows) {
  if (new_rows < rows_) throw std::invalid_argument("HessenbergQr: rows cannot shrink");
  if (new_rows == rows_) return;
  qt_rhs_.resize(new_rows, 0.0);
  if (rows_ == 0) qt_rhs_[0] = beta_;
  rows_ = new_rows;
}

void HessenbergQr::append_column(std::span<const double> col) {
  if (col.size() != rows_) throw std::invalid_argument("HessenbergQr: column length mismatch");
  std::vector<double> work(col.begin(), col.end());
  col_scale_ = std::max(col_scale_, kernels::nrm2(rows_, work.data()));

  for (const auto& h : reflectors_) {
    double* seg = work.data() + h.start;
    const double f = h.two_over_vtv * kernels::dot(h.v.size(), h.v.data(), seg);
    kernels::axpy(h.v.size(), -f, h.v.data(), seg);
  }

  const std::size_t tail = rows_ - rank_;
  const double tail_norm = kernels::nrm2(tail, work.data() + rank_);
  const double tol =
      static_cast<double>(std::max(rows_, pivot_row_.size() + 1)) * kEps * col_scale_;
  if (tail == 0 || tail_norm <= tol) {
    pivot_row_.push_back(-1);
    r_cols_.emplace_back();
    return;
  }

  std::vector<double> v(work.begin() + static_cast<std::ptrdiff_t>(rank_), work.end());
  const double alpha = v[0] >= 0.0 ? -tail_norm : tail_norm;
  v[0] -= alpha;
  const double two_over_vtv = 2.0 / kernels::dot(tail, v.data(), v.data());

  const double f = two_over_vtv * kernels::dot(tail, v.data(), qt_rhs_.data() + rank_);
  kernels::axpy(tail, -f, v.data(), qt_rhs_.data() + rank_);

  std::vector<double> rcol(work.begin(),
                           work.begin() + static_cast<std::ptrdiff_t>(rank_) + 1);
  rcol[rank_] = alpha;
  r_cols_.push_back(std::move(rcol));
  pivot_row_.push_back(static_cast<int>(rank_));
  reflectors_.push_back(Reflector{rank_, std::move(v), two_over_vtv});
  ++rank_;
}

double HessenbergQr::resnorm() const noexcept {
  if (rows_ == 0) return beta_;
  return kernels::nrm2(rows_ - rank_, qt_rhs_.data() + rank_);
}

std::vector<double> HessenbergQr::solve() const {
  std::vector<double> y(cols(), 0.0);
  std::vector<double> rhs(qt_rhs_.begin(),
                          qt_rhs_.begin() + static_cast<std::ptrdiff_t>(rank_));
  for (std::size_t j = cols(); j-- > 0;) {
    const int p = pivot_row_[j];
    if (p < 0) continue;
    const auto& rcol = r_cols_[j];
    const auto pr = static_cast<std::size_t>(p);
    y[j] = rhs[pr] / rcol[pr];
    kernels::axpy(pr, -y[j], rcol.data(), rhs.data());
  }
  return y;
}

}  // namespace mpk
