#include "mpk/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mpk/kernels.hpp"

namespace mpk {

const char* variant_name(Variant v) noexcept {
  switch (v) {
    case Variant::Gmres:
      return "gmres";
    case Variant::Fgmres:
      return "fgmres";
    case Variant::FgmresCyclic:
      return "fgmres_cyclic";
    case Variant::MpgmresComplete:
      return "mpgmres_complete";
    case Variant::MpgmresSelective:
      return "mpgmres_selective";
  }
  return "unknown";
}

const char* stop_reason_name(StopReason r) noexcept {
  switch (r) {
    case StopReason::Converged:
      return "converged";
    case StopReason::MaxIterations:
      return "maxit";
    case StopReason::Stagnated:
      return "stagnated";
    case StopReason::BlockCapExceeded:
      return "block_cap";
  }
  return "unknown";
}

Variant parse_variant(const std::string& text) {
  if (text == "gmres") return Variant::Gmres;
  if (text == "fgmres") return Variant::Fgmres;
  if (text == "fgmres_cyclic") return Variant::FgmresCyclic;
  if (text == "mpgmres" || text == "mpgmres_complete") return Variant::MpgmresComplete;
  if (text == "smpgmres" || text == "mpgmres_selective") {
    return Variant::MpgmresSelective;
  }
  throw std::invalid_argument("unknown variant '" + text + "'");
}

void SolverConfig::validate(size_t num_preconds) const {
  if (num_preconds == 0) {
    throw std::invalid_argument("solver needs at least one preconditioner");
  }
  if (!(tol > 0.0 && tol < 1.0)) {
    throw std::invalid_argument("tol must lie in (0, 1)");
  }
  if (maxit < 1) throw std::invalid_argument("maxit must be >= 1");
  if (!(deflate_tol > 0.0)) throw std::invalid_argument("deflate_tol must be > 0");
  if (max_block_cols < 1) throw std::invalid_argument("max_block_cols must be >= 1");
  if ((variant == Variant::Gmres || variant == Variant::Fgmres) && num_preconds != 1) {
    throw std::invalid_argument(std::string(variant_name(variant)) +
                                " takes exactly one preconditioner");
  }
  if (!ordering.empty()) {
    if (ordering.size() != num_preconds) {
      throw std::invalid_argument("ordering must list every preconditioner index");
    }
    std::vector<bool> seen(num_preconds, false);
    for (int idx : ordering) {
      if (idx < 0 || static_cast<size_t>(idx) >= num_preconds || seen[idx]) {
        throw std::invalid_argument("ordering must be a permutation of 0.." +
                                    std::to_string(num_preconds - 1));
      }
      seen[idx] = true;
    }
  }
  if (!alpha.empty()) {
    if (alpha.size() != num_preconds) {
      throw std::invalid_argument("alpha needs one weight per preconditioner");
    }
    double sum = 0.0;
    for (double w : alpha) {
      if (!(w > 0.0) || w > 1.0 || (num_preconds > 1 && w >= 1.0)) {
        throw std::invalid_argument("alpha entries must lie in (0,1)");
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("alpha entries must sum to 1");
    }
  }
  if (!selectors.empty()) {
    if (selectors.size() != num_preconds) {
      throw std::invalid_argument("selectors need one entry per preconditioner");
    }
    for (int s : selectors) {
      if (s < 0) throw std::invalid_argument("selectors must be >= 0");
    }
  }
}

void initial_block(const std::vector<PreconditionerPtr>& preconds,
                   std::span<const double> r0, ColumnBlock& v1, ColumnBlock& z1,
                   double& beta) {
  if (preconds.empty()) {
    throw std::invalid_argument("initial_block needs at least one preconditioner");
  }
  beta = kernels::nrm2(r0.size(), r0.data());
  if (beta == 0.0) {
    throw std::invalid_argument("initial_block: zero initial residual");
  }
  std::vector<double> v(r0.begin(), r0.end());
  kernels::scal(v.size(), 1.0 / beta, v.data());
  v1 = ColumnBlock(r0.size());
  v1.append_column(v);
  z1 = ColumnBlock(r0.size());
  std::vector<double> z(r0.size());
  for (const auto& p : preconds) {
    p->apply(v, z);
    z1.append_column(z);
  }
}

ColumnBlock expand_complete(const std::vector<PreconditionerPtr>& preconds,
                            const ColumnBlock& v_block) {
  if (preconds.empty() || v_block.cols() == 0) {
    throw std::invalid_argument("expand_complete needs preconditioners and columns");
  }
  ColumnBlock z(v_block.rows());
  z.reserve_cols(preconds.size() * v_block.cols());
  for (const auto& p : preconds) {
    for (size_t j = 0; j < v_block.cols(); ++j) {
      z.append_zero_column();
      p->apply(v_block.col(j), z.col(z.cols() - 1));
    }
  }
  return z;
}

ColumnBlock expand_selective_columns(const std::vector<PreconditionerPtr>& preconds,
                                     const ColumnBlock& v_block,
                                     std::span<const int> selectors,
                                     std::vector<std::string>* clamp_notes) {
  if (preconds.empty() || v_block.cols() == 0) {
    throw std::invalid_argument(
        "expand_selective_columns needs preconditioners and columns");
  }
  if (selectors.size() != preconds.size()) {
    throw std::invalid_argument("need one selector per preconditioner");
  }
  ColumnBlock z(v_block.rows());
  z.reserve_cols(preconds.size());
  for (size_t i = 0; i < preconds.size(); ++i) {
    size_t s = selectors[i] < 0 ? 0 : static_cast<size_t>(selectors[i]);
    if (s >= v_block.cols()) {
      s = v_block.cols() - 1;
      if (clamp_notes) {
        clamp_notes->push_back("selector " + std::to_string(selectors[i]) +
                               " for preconditioner " + std::to_string(i) +
                               " clamped to column " + std::to_string(s));
      }
    }
    z.append_zero_column();
    preconds[i]->apply(v_block.col(s), z.col(z.cols() - 1));
  }
  return z;
}

ColumnBlock expand_selective_lincomb(const std::vector<PreconditionerPtr>& preconds,
                                     const ColumnBlock& v_block,
                                     std::span<const double> alpha) {
  if (preconds.empty() || v_block.cols() == 0) {
    throw std::invalid_argument(
        "expand_selective_lincomb needs preconditioners and columns");
  }
  if (alpha.size() != v_block.cols()) {
    throw std::invalid_argument("alpha needs one weight per block column");
  }
  bool any = false;
  for (double w : alpha) any = any || w != 0.0;
  if (!any) throw std::invalid_argument("alpha must not be all zero");

  std::vector<double> w(v_block.rows(), 0.0);
  kernels::gemv_colmajor(v_block.rows(), v_block.cols(), v_block.data(),
                         alpha.data(), w.data());
  ColumnBlock z(v_block.rows());
  z.reserve_cols(preconds.size());
  for (const auto& p : preconds) {
    z.append_zero_column();
    p->apply(w, z.col(z.cols() - 1));
  }
  return z;
}

namespace {

std::vector<PreconditionerPtr> apply_ordering(
    const std::vector<PreconditionerPtr>& preconds, const SolverConfig& config) {
  if (config.ordering.empty()) return preconds;
  std::vector<PreconditionerPtr> out(preconds.size());
  for (size_t i = 0; i < preconds.size(); ++i) out[i] = preconds[config.ordering[i]];
  return out;
}

// Candidate column c of the raw Z block maps back to a preconditioner slot;
// the provenance feeds the post-deflation alpha truncation rule.
int candidate_slot(const SolverConfig& config, int cycle_slot, size_t source_width,
                   size_t c) {
  switch (config.variant) {
    case Variant::Gmres:
    case Variant::Fgmres:
      return 0;
    case Variant::FgmresCyclic:
      return cycle_slot;
    case Variant::MpgmresComplete:
      return static_cast<int>(c / source_width);
    case Variant::MpgmresSelective:
      return static_cast<int>(c);
  }
  return 0;
}

}  // namespace

SolveReport mp_solve(const SparseMatrix& a, std::span<const double> b,
                     const std::vector<PreconditionerPtr>& preconds,
                     const SolverConfig& config, std::span<const double> x0) {
  const auto t_start = std::chrono::steady_clock::now();
  a.validate();
  config.validate(preconds.size());
  const size_t n = static_cast<size_t>(a.n);
  if (b.size() != n) {
    throw std::invalid_argument("rhs length " + std::to_string(b.size()) +
                                " does not match matrix dimension " +
                                std::to_string(n));
  }
  if (!x0.empty() && x0.size() != n) {
    throw std::invalid_argument("x0 length does not match matrix dimension");
  }
  for (const auto& p : preconds) {
    if (!p) throw std::invalid_argument("null preconditioner");
    if (static_cast<size_t>(p->dimension()) != n) {
      throw std::invalid_argument("preconditioner '" + p->name() +
                                  "' dimension does not match the matrix");
    }
  }

  const auto effective = apply_ordering(preconds, config);
  const size_t ell = effective.size();

  SolveReport rep;
  auto finish = [&](SolveReport& r) {
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                t_start)
                      .count();
  };

  std::vector<double> x(n, 0.0);
  if (!x0.empty()) std::copy(x0.begin(), x0.end(), x.begin());

  std::vector<double> r0(b.begin(), b.end());
  if (!x0.empty()) {
    std::vector<double> ax = spmv(a, x);
    for (size_t i = 0; i < n; ++i) r0[i] -= ax[i];
  }
  const double beta = kernels::nrm2(n, r0.data());
  const double norm_b = kernels::nrm2(n, b.data());

  if (beta == 0.0) {
    rep.converged = true;
    rep.stop_reason = StopReason::Converged;
    rep.residual_history = {0.0};
    rep.basis_columns_history = {0};
    rep.final_x = std::move(x);
    finish(rep);
    return rep;
  }

  const bool store_directions = config.keep_state || config.variant != Variant::Gmres;

  ColumnBlock basis(n);
  ColumnBlock directions(n);
  HessenbergStore hess;
  std::vector<int> block_starts{0};

  {
    std::vector<double> v1(r0);
    kernels::scal(n, 1.0 / beta, v1.data());
    basis.append_column(v1);
  }
  rep.residual_history.push_back(1.0);
  rep.basis_columns_history.push_back(1);

  // newest basis block and the preconditioner slot that produced each column
  size_t block_begin = 0;
  size_t block_width = 1;
  std::vector<int> block_slots{-1};

  std::mt19937_64 selector_rng(config.seed);
  HessenbergQr qr(beta);
  rep.stop_reason = StopReason::MaxIterations;

  for (int k = 1; k <= config.maxit; ++k) {
    size_t z_width = 0;
    switch (config.variant) {
      case Variant::Gmres:
      case Variant::Fgmres:
      case Variant::FgmresCyclic:
        z_width = 1;
        break;
      case Variant::MpgmresComplete:
        z_width = ell * block_width;
        break;
      case Variant::MpgmresSelective:
        z_width = ell;
        break;
    }
    if (z_width > static_cast<size_t>(config.max_block_cols)) {
      rep.stop_reason = StopReason::BlockCapExceeded;
      rep.warnings.push_back("candidate block of " + std::to_string(z_width) +
                             " columns exceeds max_block_cols=" +
                             std::to_string(config.max_block_cols) +
                             "; stopping before iteration " + std::to_string(k));
      break;
    }

    ColumnBlock v_block(n);
    v_block.reserve_cols(block_width);
    for (size_t j = 0; j < block_width; ++j) {
      v_block.append_column(basis.col(block_begin + j));
    }

    int cycle_slot = 0;
    ColumnBlock zk(n);
    switch (config.variant) {
      case Variant::Gmres:
      case Variant::Fgmres: {
        zk.append_zero_column();
        effective[0]->apply(v_block.col(v_block.cols() - 1), zk.col(0));
        break;
      }
      case Variant::FgmresCyclic: {
        cycle_slot = static_cast<int>((k - 1) % ell);
        zk.append_zero_column();
        effective[cycle_slot]->apply(v_block.col(v_block.cols() - 1), zk.col(0));
        break;
      }
      case Variant::MpgmresComplete:
        zk = expand_complete(effective, v_block);
        break;
      case Variant::MpgmresSelective: {
        if (config.selection == Selection::Columns) {
          std::vector<int> sel(ell);
          if (config.random_selectors) {
            for (size_t i = 0; i < ell; ++i) {
              sel[i] = static_cast<int>(selector_rng() % v_block.cols());
            }
          } else if (!config.selectors.empty()) {
            sel = config.selectors;
          } else {
            for (size_t i = 0; i < ell; ++i) sel[i] = static_cast<int>(i);
          }
          zk = expand_selective_columns(effective, v_block, sel, &rep.warnings);
        } else {
          // weights follow each surviving column's preconditioner of origin,
          // renormalized to sum 1; the initial block is unweighted
          std::vector<double> weights(v_block.cols());
          if (v_block.cols() == 1) {
            weights[0] = 1.0;
          } else {
            double sum = 0.0;
            for (size_t j = 0; j < v_block.cols(); ++j) {
              const int slot = block_slots[j];
              const double w = config.alpha.empty()
                                   ? 1.0 / static_cast<double>(ell)
                                   : config.alpha[static_cast<size_t>(slot)];
              weights[j] = w;
              sum += w;
            }
            for (double& w : weights) w /= sum;
          }
          zk = expand_selective_lincomb(effective, v_block, weights);
        }
        break;
      }
    }

    ColumnBlock w(n);
    w.reserve_cols(zk.cols());
    for (size_t j = 0; j < zk.cols(); ++j) {
      w.append_zero_column();
      spmv(a, zk.col(j), w.col(j));
    }

    auto orth = block_orthogonalize(w, basis, config.deflate_tol, k);
    for (const auto& ev : orth.events) rep.deflation_events.push_back(ev);

    block_starts.push_back(static_cast<int>(basis.cols()));
    for (size_t j = 0; j < orth.v_new.cols(); ++j) {
      basis.append_column(orth.v_new.col(j));
    }
    hess.grow_rows(basis.cols());
    qr.grow_rows(basis.cols());
    for (size_t c = 0; c < zk.cols(); ++c) {
      const std::span<const double> coeffs(orth.coeffs.data() + c * orth.coeff_rows,
                                           orth.coeff_rows);
      hess.append_column(coeffs);
      qr.append_column(coeffs);
      if (store_directions) directions.append_column(zk.col(c));
    }

    if (qr.rank_deficient()) ++rep.lsq_rank_deficient_count;
    const double rel = qr.resnorm() / beta;
    rep.residual_history.push_back(rel);
    rep.basis_columns_history.push_back(static_cast<int>(basis.cols()));
    rep.iterations = k;

    if (rel <= config.tol) {
      rep.converged = true;
      rep.stop_reason = StopReason::Converged;
      break;
    }
    if (orth.v_new.cols() == 0) {
      rep.stagnated = true;
      rep.stop_reason = StopReason::Stagnated;
      rep.warnings.push_back("every candidate direction deflated at iteration " +
                             std::to_string(k));
      break;
    }

    std::vector<int> next_slots(orth.v_new.cols(), -1);
    for (size_t c = 0; c < orth.survivor_of.size(); ++c) {
      if (orth.survivor_of[c] >= 0) {
        next_slots[static_cast<size_t>(orth.survivor_of[c])] =
            candidate_slot(config, cycle_slot, block_width, c);
      }
    }
    block_begin = basis.cols() - orth.v_new.cols();
    block_width = orth.v_new.cols();
    block_slots = std::move(next_slots);
  }

  const std::vector<double> y = qr.cols() > 0 ? qr.solve() : std::vector<double>{};
  if (!y.empty()) {
    if (config.variant == Variant::Gmres && !config.keep_state) {
      // right preconditioning never materializes directions: x = x0 + P^{-1}(V y)
      std::vector<double> u(n, 0.0);
      kernels::gemv_colmajor(n, y.size(), basis.data(), y.data(), u.data());
      std::vector<double> pu(n);
      effective[0]->apply(u, pu);
      for (size_t i = 0; i < n; ++i) x[i] += pu[i];
    } else {
      kernels::gemv_colmajor(n, y.size(), directions.data(), y.data(), x.data());
    }
  }
  rep.final_x = std::move(x);

  std::vector<double> ax = spmv(a, rep.final_x);
  std::vector<double> rtrue(n);
  for (size_t i = 0; i < n; ++i) rtrue[i] = b[i] - ax[i];
  const double true_abs = kernels::nrm2(n, rtrue.data());
  rep.true_relative_residual = norm_b > 0.0 ? true_abs / norm_b : true_abs;
  // evaluated residual of y in the coefficient space; agreement with the true
  // residual is limited by rounding that scales with the minimizer size
  double hess_abs = beta;
  double noise_floor = 0.0;
  if (!y.empty()) {
    std::vector<double> small(hess.rows(), 0.0);
    small[0] = beta;
    std::vector<double> neg_y(y);
    kernels::scal(neg_y.size(), -1.0, neg_y.data());
    kernels::gemv_colmajor(hess.rows(), hess.cols(), hess.entries().data(),
                           neg_y.data(), small.data());
    hess_abs = kernels::nrm2(hess.rows(), small.data());
    const double hess_fro =
        kernels::nrm2(hess.entries().size(), hess.entries().data());
    noise_floor = std::numeric_limits<double>::epsilon() *
                  static_cast<double>(std::max(hess.rows(), hess.cols())) *
                  hess_fro * kernels::nrm2(y.size(), y.data());
  }
  if (std::abs(true_abs - hess_abs) >
      1e-6 * std::max(true_abs, hess_abs) + 1e-12 + noise_floor) {
    std::ostringstream msg;
    msg << "true residual " << true_abs << " disagrees with least-squares estimate "
        << hess_abs;
    rep.residual_mismatch = true;
    rep.warnings.push_back(msg.str());
  }

  if (config.keep_state) {
    ArnoldiSnapshot snap;
    snap.basis = std::move(basis);
    snap.directions = std::move(directions);
    snap.hess = std::move(hess);
    snap.block_starts = std::move(block_starts);
    snap.beta = beta;
    rep.snapshot = std::move(snap);
  }
  finish(rep);
  return rep;
}

}  // namespace mpk
