#pragma once

// Eigenproblems behind the three spectral clustering variants:
//  - sfairsc_eigs: matrix-free, Lanczos on the deflated projected operator;
//  - variant_oracle_eigs: dense reduction V^T L_n V onto null(C^T);
//  - fairsc_dense_pipeline: the dense FairSC baseline with the matrix
//    square root (Z^T D Z)^{1/2}.

#include "fairsc/dense.hpp"
#include "fairsc/fair_operator.hpp"
#include "fairsc/graph.hpp"
#include "fairsc/lanczos.hpp"

#include <cmath>
#include <memory>
#include <optional>
#include <string>

namespace fairsc {

/// Smallest eigenpairs of L_n through the Lanczos solver (plain SC).
inline EigResult laplacian_eigs(const LaplacianPair &lap, const LanczosConfig &cfg) {
  const CsrMatrix &ln = lap.normalized;
  OperatorFn op = [&ln](std::span<const double> x, std::span<double> y) { spmv(ln, x, y); };
  return smallest_eigs(op, lap.n(), cfg, 2.0);
}

/// k = cfg.k smallest eigenpairs of the deflated operator
/// P(L_n - sigma I)P + sigma I. `sigma` defaults to ||L_n||_1.
inline EigResult sfairsc_eigs(const LaplacianPair &lap, const FairnessConstraint &fc,
                              const LanczosConfig &cfg,
                              std::optional<double> sigma = std::nullopt) {
  const Index n = lap.n();
  require(fc.n() == n, ErrorKind::DimensionMismatch, "constraint size differs from graph size");
  require(cfg.k + fc.constraints() <= n, ErrorKind::InvalidArgument,
          "k exceeds the dimension of the feasible subspace");
  const double shift = sigma.value_or(choose_shift(lap));
  require(shift >= 0.0, ErrorKind::InvalidArgument, "shift must be nonnegative");

  const ShiftedProjectedOperator aop(lap.normalized, fc, shift);
  OperatorFn op;
  StartFilter filter;
  double upper = 2.0;
  if (fc.constraints() == 0) {
    // No constraints: the operator is L_n itself.
    const CsrMatrix &ln = lap.normalized;
    op = [&ln](std::span<const double> x, std::span<double> y) { spmv(ln, x, y); };
  } else {
    auto scratch = std::make_shared<Vector>(n);
    op = [&aop, scratch](std::span<const double> x, std::span<double> y) {
      aop.apply(x, y, *scratch);
    };
    filter = [&aop](std::span<double> x) { aop.projector().apply(x, x); };
    upper = shift + 2.0;
  }

  EigResult res = smallest_eigs(op, n, cfg, upper, filter);

  if (fc.constraints() > 0) {
    for (double lambda : res.eigenvalues)
      if (lambda >= shift - cfg.tol * shift)
        throw Error(ErrorKind::ShiftTooSmall,
                    "eigenvalue " + std::to_string(lambda) + " reaches the shift " +
                        std::to_string(shift) + "; increase sigma");
    // Ritz assembly accumulates roundoff outside range(P) in proportion to
    // ||C||; one more projection plus MGS (keeps order and signs) removes it.
    DenseMatrix &x = res.eigenvectors;
    for (Index j = 0; j < x.cols(); ++j) {
      aop.projector().apply(x.col(j), x.col(j));
      for (Index i = 0; i < j; ++i)
        axpy(-dot(x.col(i), x.col(j)), x.col(i), x.col(j));
      scale(1.0 / norm2(x.col(j)), x.col(j));
    }
    const DenseMatrix ctx = multiply_transposed(fc.c, res.eigenvectors);
    const double leak = frobenius_norm(ctx);
    const double size = frobenius_norm(res.eigenvectors);
    if (leak > 1e-8 * size)
      throw Error(ErrorKind::ConvergenceFailure,
                  "eigenvectors violate the fairness constraint: ||C^T X|| = " +
                      std::to_string(leak));
  }
  return res;
}

struct DenseEigOptions {
  Index guard = 3000;
};

/// Dense reference: V spans null(C^T) (trailing columns of a full QR of C),
/// eigenpairs of V^T L_n V lifted back as X = V Y.
inline EigResult variant_oracle_eigs(const LaplacianPair &lap, const FairnessConstraint &fc,
                                     Index k, DenseEigOptions opts = {2000}) {
  const Index n = lap.n();
  if (n > opts.guard)
    throw Error(ErrorKind::TooLargeForDense,
                "n = " + std::to_string(n) + " exceeds dense guard " + std::to_string(opts.guard));
  const Index p = fc.constraints();
  require(k + p <= n, ErrorKind::InvalidArgument, "k exceeds the feasible dimension");

  const DenseMatrix v = p == 0 ? DenseMatrix::identity(n) : qr_tall(fc.c).complement();
  const DenseMatrix lv = multiply_transposed(v, multiply(lap.normalized, v));
  const auto eig = symmetric_eig_dense(lv);

  EigResult out;
  out.eigenvalues.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(k));
  out.eigenvectors = multiply(v, eig.vectors.columns(0, k));
  out.residuals.assign(k, 0.0);
  return out;
}

/// Dense FairSC: Z spans null(F^T), Q = (Z^T D Z)^{1/2},
/// M = Q^{-1} Z^T L Z Q^{-1}. Returns the k smallest eigenvalues of M and
/// the embedding Z Q^{-1} X as eigenvectors.
inline EigResult fairsc_dense_pipeline(const LaplacianPair &lap, const FairnessConstraint &fc,
                                       Index k, DenseEigOptions opts = {}) {
  const Index n = lap.n();
  if (n > opts.guard)
    throw Error(ErrorKind::TooLargeForDense,
                "n = " + std::to_string(n) + " exceeds dense guard " + std::to_string(opts.guard));
  const Index p = fc.constraints();
  require(k + p <= n, ErrorKind::InvalidArgument, "k exceeds the feasible dimension");

  const DenseMatrix z = p == 0 ? DenseMatrix::identity(n) : qr_tall(fc.f).complement();
  const Index q = z.cols();

  DenseMatrix dz = z;
  for (Index j = 0; j < q; ++j) {
    auto col = dz.col(j);
    for (Index i = 0; i < n; ++i)
      col[i] *= lap.degrees[i];
  }
  const auto gram = symmetric_eig_dense(multiply_transposed(z, dz));
  for (double lambda : gram.values)
    if (!(lambda > 0.0))
      throw Error(ErrorKind::NotPositiveDefinite,
                  "Z^T D Z is not positive definite (eigenvalue " + std::to_string(lambda) + ")");

  // Q^{-1} = U diag(lambda^{-1/2}) U^T.
  DenseMatrix scaled_u = gram.vectors;
  for (Index j = 0; j < q; ++j)
    scale(1.0 / std::sqrt(gram.values[j]), scaled_u.col(j));
  const DenseMatrix q_inv = multiply(scaled_u, gram.vectors.transpose());

  const DenseMatrix ztlz = multiply_transposed(z, multiply(lap.laplacian, z));
  const DenseMatrix m = multiply(q_inv, multiply(ztlz, q_inv));
  const auto eig = symmetric_eig_dense([&] {
    DenseMatrix s = m;
    for (Index j = 0; j < q; ++j)
      for (Index i = 0; i < j; ++i)
        s(i, j) = s(j, i) = 0.5 * (m(i, j) + m(j, i));
    return s;
  }());

  EigResult out;
  out.eigenvalues.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(k));
  out.eigenvectors = multiply(z, multiply(q_inv, eig.vectors.columns(0, k)));
  out.residuals.assign(k, 0.0);
  return out;
}

} // namespace fairsc
