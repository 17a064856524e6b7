#pragma once

// Thick-restart Lanczos for the k smallest eigenpairs of a symmetric
// positive semi-definite operator given only through matrix-vector products.
//
// The solver iterates on the folded operator B = mu I - A, mu the supplied
// spectrum bound, so the wanted eigenvalues of A become the dominant ones of
// B. Basis vectors are fully reorthogonalized. Eigenvalues a single start
// vector cannot see (multiplicities) are recovered by a probe on the
// orthogonal complement of the converged vectors.

#include "fairsc/dense.hpp"
#include "fairsc/error.hpp"
#include "fairsc/matrix.hpp"
#include "fairsc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace fairsc {

struct LanczosConfig {
  Index k = 1;
  Index max_basis = 0; // 0 selects max(2k + 10, 20)
  double tol = 1e-8;
  int max_restarts = 2000;
  std::uint64_t seed = 42;

  Index basis_size() const { return max_basis ? max_basis : std::max<Index>(2 * k + 10, 20); }

  void validate() const {
    require(k >= 1, ErrorKind::InvalidArgument, "k must be >= 1");
    require(basis_size() >= k + 2, ErrorKind::InvalidArgument, "max_basis must be >= k + 2");
    require(tol > 0.0, ErrorKind::InvalidArgument, "tol must be positive");
    require(max_restarts >= 1, ErrorKind::InvalidArgument, "max_restarts must be >= 1");
  }
};

struct EigResult {
  Vector eigenvalues;       // ascending
  DenseMatrix eigenvectors; // n x k, orthonormal columns
  Vector residuals;         // ||A x - lambda x|| per pair
  int iterations = 0;       // Lanczos steps
  int restarts = 0;
  Index matvec_count = 0;
  Index peak_workspace_doubles = 0;
  // Per restart: residual estimate and eigenvalue estimate of the smallest
  // wanted pair.
  std::vector<double> restart_residuals;
  std::vector<double> restart_ritz_values;
};

class ConvergenceFailure : public Error {
public:
  ConvergenceFailure(const std::string &what, Vector best_residuals)
      : Error(ErrorKind::ConvergenceFailure, what),
        best_residuals_(std::move(best_residuals)) {}

  const Vector &best_residuals() const noexcept { return best_residuals_; }

private:
  Vector best_residuals_;
};

/// y = A x for a symmetric operator of dimension n.
using OperatorFn = std::function<void(std::span<const double>, std::span<double>)>;
/// In-place filter applied once to the random start vector.
using StartFilter = std::function<void(std::span<double>)>;

namespace detail {

/// Uniform doubles in [-0.5, 0.5) from the top 53 bits of mt19937_64, so
/// streams agree across standard library implementations.
inline void fill_uniform(std::mt19937_64 &rng, std::span<double> x) {
  for (double &v : x)
    v = unit_uniform(rng) - 0.5;
}

class LanczosRun {
public:
  LanczosRun(const OperatorFn &op, Index n, double mu, double tol_abs,
             Index basis, const DenseMatrix *locked, EigResult &stats)
      : op_(op), n_(n), mu_(mu), tol_abs_(tol_abs), m_(basis), locked_(locked),
        stats_(stats), v_(n, basis), t_(basis, basis), f_(n) {
    const Index locked_cols = locked_ ? locked_->cols() : 0;
    stats_.peak_workspace_doubles = std::max(
        stats_.peak_workspace_doubles,
        n * (2 * basis + 2) + basis * basis + n * locked_cols);
  }

  // Builds the Krylov basis from `start`, restarting until `want` dominant
  // pairs of B converge or `max_cycles` is reached. With `max_cycles` = 1
  // and track == false it performs a single probe cycle.
  // Returns the number of converged pairs among the top `want`.
  Index solve(std::span<const double> start, Index want, int max_cycles,
              bool track, std::mt19937_64 &rng) {
    std::copy(start.begin(), start.end(), v_.col(0).begin());
    orthogonalize(v_.col(0), 0);
    double nrm = norm2(v_.col(0));
    require(nrm > 0.0, ErrorKind::InvalidArgument, "start vector vanished after filtering");
    scale(1.0 / nrm, v_.col(0));

    Index filled = 0;
    Index converged = 0;
    for (int cycle = 0; cycle < max_cycles; ++cycle) {
      extend(filled, rng);
      ritz_ = symmetric_eig_dense(symmetrized(active_));
      // Dominant pairs of B first.
      order_.resize(active_);
      std::iota(order_.begin(), order_.end(), Index{0});
      std::reverse(order_.begin(), order_.end());
      resid_.assign(active_, 0.0);
      for (Index r = 0; r < active_; ++r)
        resid_[r] = std::abs(beta_ * ritz_.vectors(active_ - 1, order_[r]));

      const Index top = std::min(want, active_);
      converged = 0;
      for (Index r = 0; r < top; ++r)
        if (resid_[r] <= tol_abs_)
          ++converged;
      if (track) {
        stats_.restart_residuals.push_back(resid_[0]);
        stats_.restart_ritz_values.push_back(mu_ - ritz_.values[order_[0]]);
      }
      if (converged == top || exhaustive())
        return top;
      if (cycle + 1 == max_cycles)
        break;
      filled = restart(want);
      ++stats_.restarts;
    }
    return converged;
  }

  // Ritz value (of B) and vector for the r-th dominant pair.
  double theta(Index r) const { return ritz_.values[order_[r]]; }
  double residual_estimate(Index r) const { return resid_[r]; }
  Index active() const { return active_; }

  Vector ritz_vector(Index r) const {
    Vector x(n_, 0.0);
    const auto y = ritz_.vectors.col(order_[r]);
    for (Index j = 0; j < active_; ++j)
      axpy(y[j], v_.col(j), x);
    return x;
  }

private:
  // The basis spans the whole complement of the locked vectors.
  bool exhaustive() const {
    const Index locked_cols = locked_ ? locked_->cols() : 0;
    return active_ == n_ - locked_cols;
  }

  Index available() const {
    const Index locked_cols = locked_ ? locked_->cols() : 0;
    return std::min(m_, n_ - locked_cols);
  }

  void apply_b(std::span<const double> x, std::span<double> y) {
    op_(x, y);
    ++stats_.matvec_count;
    for (Index i = 0; i < n_; ++i)
      y[i] = mu_ * x[i] - y[i];
  }

  // Two passes of classical Gram-Schmidt against locked vectors and the
  // first `count` basis vectors. Returns accumulated basis coefficients.
  Vector orthogonalize(std::span<double> w, Index count) {
    Vector coef(count, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      if (locked_)
        for (Index j = 0; j < locked_->cols(); ++j)
          axpy(-dot(locked_->col(j), w), locked_->col(j), w);
      for (Index j = 0; j < count; ++j) {
        const double c = dot(v_.col(j), w);
        coef[j] += c;
        axpy(-c, v_.col(j), w);
      }
    }
    return coef;
  }

  // Extends the basis from `from` columns to the full available size.
  void extend(Index from, std::mt19937_64 &rng) {
    const Index limit = available();
    for (Index j = from; j < limit; ++j) {
      apply_b(v_.col(j), f_);
      ++stats_.iterations;
      const auto coef = orthogonalize(f_, j + 1);
      for (Index i = 0; i <= j; ++i)
        t_(i, j) = coef[i];
      beta_ = norm2(f_);
      if (j + 1 == limit) {
        active_ = limit;
        return;
      }
      if (beta_ <= breakdown_threshold()) {
        // Invariant subspace: continue from a fresh orthogonal direction.
        beta_ = 0.0;
        for (int attempt = 0; attempt < 5 && beta_ <= breakdown_threshold(); ++attempt) {
          fill_uniform(rng, f_);
          orthogonalize(f_, j + 1);
          beta_ = norm2(f_);
        }
        require(beta_ > 0.0, ErrorKind::ConvergenceFailure,
                "could not extend Krylov basis after breakdown");
        t_(j + 1, j) = 0.0;
        std::copy(f_.begin(), f_.end(), v_.col(j + 1).begin());
        scale(1.0 / beta_, v_.col(j + 1));
        beta_ = 0.0;
        continue;
      }
      t_(j + 1, j) = beta_;
      std::copy(f_.begin(), f_.end(), v_.col(j + 1).begin());
      scale(1.0 / beta_, v_.col(j + 1));
    }
    active_ = limit;
  }

  double breakdown_threshold() const {
    return 64.0 * std::numeric_limits<double>::epsilon() * std::max(mu_, 1.0);
  }

  // The strictly lower part of T holds the subdiagonal and restart
  // couplings, the upper part the Gram-Schmidt coefficients. Both describe
  // the same symmetric matrix up to rounding.
  DenseMatrix symmetrized(Index size) const {
    DenseMatrix s(size, size);
    for (Index j = 0; j < size; ++j) {
      s(j, j) = t_(j, j);
      for (Index i = j + 1; i < size; ++i) {
        const double lower = t_(i, j);
        const double upper = t_(j, i);
        const double v = (lower != 0.0 && upper != 0.0) ? 0.5 * (lower + upper)
                                                        : lower + upper;
        s(i, j) = v;
        s(j, i) = v;
      }
    }
    return s;
  }

  // Thick restart: keep the dominant `keep` Ritz vectors and continue from
  // the residual direction. Returns the new number of filled columns.
  Index restart(Index want) {
    const Index keep = std::min(want + (active_ - want) / 2, active_ - 1);
    DenseMatrix kept(n_, keep);
    for (Index r = 0; r < keep; ++r) {
      const auto y = ritz_.vectors.col(order_[r]);
      auto dst = kept.col(r);
      for (Index j = 0; j < active_; ++j)
        axpy(y[j], v_.col(j), dst);
    }
    t_ = DenseMatrix(m_, m_);
    for (Index r = 0; r < keep; ++r) {
      std::copy(kept.col(r).begin(), kept.col(r).end(), v_.col(r).begin());
      t_(r, r) = ritz_.values[order_[r]];
      t_(keep, r) = beta_ * ritz_.vectors(active_ - 1, order_[r]);
    }
    if (beta_ > 0.0) {
      std::copy(f_.begin(), f_.end(), v_.col(keep).begin());
      scale(1.0 / beta_, v_.col(keep));
    } else {
      // Exact invariant subspace: residual direction is arbitrary.
      std::mt19937_64 rng(static_cast<std::uint64_t>(stats_.iterations) + 17u);
      fill_uniform(rng, v_.col(keep));
      orthogonalize(v_.col(keep), keep);
      scale(1.0 / norm2(v_.col(keep)), v_.col(keep));
    }
    return keep;
  }

  const OperatorFn &op_;
  Index n_;
  double mu_;
  double tol_abs_;
  Index m_;
  const DenseMatrix *locked_;
  EigResult &stats_;

  DenseMatrix v_;
  DenseMatrix t_;
  Vector f_;
  double beta_ = 0.0;
  Index active_ = 0;
  SymmetricEigen ritz_;
  std::vector<Index> order_;
  Vector resid_;
};

struct Pair {
  double lambda;
  Vector x;
};

} // namespace detail

/// k smallest eigenpairs of the symmetric PSD operator `apply` with spectrum
/// in [0, spectrum_upper_bound]. Deterministic for a fixed seed.
inline EigResult smallest_eigs(const OperatorFn &apply, Index n,
                               const LanczosConfig &cfg,
                               double spectrum_upper_bound,
                               const StartFilter &start_filter = {}) {
  cfg.validate();
  require(cfg.k <= n, ErrorKind::InvalidArgument, "k exceeds operator dimension");
  require(spectrum_upper_bound > 0.0, ErrorKind::InvalidArgument,
          "spectrum upper bound must be positive");

  const double mu = spectrum_upper_bound;
  const double tol_abs = cfg.tol * spectrum_upper_bound;
  const Index k = cfg.k;
  const Index basis = std::min(cfg.basis_size(), n);

  EigResult result;
  std::mt19937_64 rng(cfg.seed);

  Vector start(n);
  detail::fill_uniform(rng, start);
  if (start_filter)
    start_filter(start);

  // Main run.
  std::vector<detail::Pair> pairs;
  {
    detail::LanczosRun run(apply, n, mu, tol_abs, basis, nullptr, result);
    const Index got = run.solve(start, k, cfg.max_restarts, true, rng);
    if (got < std::min(k, run.active())) {
      Vector best(k);
      for (Index r = 0; r < k && r < run.active(); ++r)
        best[r] = run.residual_estimate(r);
      throw ConvergenceFailure("Lanczos did not converge within " +
                                   std::to_string(cfg.max_restarts) + " restarts",
                               std::move(best));
    }
    for (Index r = 0; r < std::min(k, run.active()); ++r)
      pairs.push_back({mu - run.theta(r), run.ritz_vector(r)});
  }

  // Probe the complement of the converged vectors for eigenvalues the
  // Krylov space could not reach, and lock them in.
  for (Index round = 0; round < k + 1; ++round) {
    if (pairs.size() >= n)
      break;
    DenseMatrix locked(n, pairs.size());
    for (Index j = 0; j < pairs.size(); ++j)
      std::copy(pairs[j].x.begin(), pairs[j].x.end(), locked.col(j).begin());
    const Index room = n - pairs.size();
    const Index probe_basis = std::min(basis, room);
    if (probe_basis == 0)
      break;

    Vector fresh(n);
    detail::fill_uniform(rng, fresh);
    if (start_filter)
      start_filter(fresh);

    detail::LanczosRun probe(apply, n, mu, tol_abs, probe_basis, &locked, result);
    probe.solve(fresh, 1, 1, false, rng);
    const double worst_wanted = pairs.size() < k ? std::numeric_limits<double>::infinity()
                                                 : pairs.back().lambda;
    const double candidate = mu - probe.theta(0);
    if (!(candidate < worst_wanted - tol_abs))
      break;

    // A missed eigenvalue exists below the current k-th one. Converge it
    // on the complement and merge.
    Vector restart_vec = probe.ritz_vector(0);
    const Index run_basis = std::min(std::max<Index>(basis, 3), room);
    detail::LanczosRun fix(apply, n, mu, tol_abs, run_basis, &locked, result);
    const Index got = fix.solve(restart_vec, 1, cfg.max_restarts, false, rng);
    if (got < 1)
      throw ConvergenceFailure("Lanczos probe for a missed eigenvalue did not converge",
                               Vector{fix.residual_estimate(0)});
    pairs.push_back({mu - fix.theta(0), fix.ritz_vector(0)});
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto &a, const auto &b) { return a.lambda < b.lambda; });
    if (pairs.size() > k)
      pairs.pop_back();
  }

  // Rayleigh-Ritz on the final vectors restores orthonormality and pairs
  // eigenvalues with explicit residuals.
  const Index got = pairs.size();
  DenseMatrix x(n, got);
  for (Index j = 0; j < got; ++j)
    std::copy(pairs[j].x.begin(), pairs[j].x.end(), x.col(j).begin());
  {
    // Modified Gram-Schmidt, twice.
    for (int pass = 0; pass < 2; ++pass)
      for (Index j = 0; j < got; ++j) {
        for (Index i = 0; i < j; ++i)
          axpy(-dot(x.col(i), x.col(j)), x.col(i), x.col(j));
        scale(1.0 / norm2(x.col(j)), x.col(j));
      }
  }
  DenseMatrix ax(n, got);
  for (Index j = 0; j < got; ++j) {
    apply(x.col(j), ax.col(j));
    ++result.matvec_count;
  }
  const auto small = symmetric_eig_dense(
      [&] {
        auto g = multiply_transposed(x, ax);
        for (Index j = 0; j < got; ++j)
          for (Index i = 0; i < j; ++i)
            g(i, j) = g(j, i) = 0.5 * (g(i, j) + g(j, i));
        return g;
      }());
  result.eigenvalues = small.values;
  result.eigenvectors = multiply(x, small.vectors);
  const DenseMatrix ay = multiply(ax, small.vectors);
  result.residuals.assign(got, 0.0);
  for (Index j = 0; j < got; ++j) {
    Vector r(ay.col(j).begin(), ay.col(j).end());
    axpy(-result.eigenvalues[j], result.eigenvectors.col(j), r);
    result.residuals[j] = norm2(r);
  }
  return result;
}

} // namespace fairsc
