#pragma once

// Matrix-free nullspace projection and the deflated operator
//   A_sigma w = P (L_n - sigma I) P w + sigma w,
// where P is the orthogonal projector onto null(C^T).

#include "fairsc/dense.hpp"
#include "fairsc/graph.hpp"
#include "fairsc/matrix.hpp"

#include <span>
#include <vector>

namespace fairsc {

/// Orthogonal projector onto null(C^T), applied as w - C z with
/// z = argmin ||C z - w|| solved through the cached Cholesky factor of C^T C.
/// Never forms P.
class Projector {
public:
  explicit Projector(const FairnessConstraint &fc) : fc_(&fc) {}

  Index n() const noexcept { return fc_->n(); }

  void apply(std::span<const double> w, std::span<double> out) const {
    require(w.size() == n() && out.size() == n(), ErrorKind::DimensionMismatch,
            "projector dimension mismatch");
    if (out.data() != w.data())
      std::copy(w.begin(), w.end(), out.begin());
    if (fc_->constraints() == 0)
      return;
    const auto rhs = multiply_transposed(fc_->c, w);
    const auto z = cholesky_solve(fc_->gram_factor, rhs);
    for (Index j = 0; j < z.size(); ++j)
      axpy(-z[j], fc_->c.col(j), out);
  }

  Vector operator()(std::span<const double> w) const {
    Vector out(w.size());
    apply(w, out);
    return out;
  }

  const FairnessConstraint &constraint() const noexcept { return *fc_; }

private:
  const FairnessConstraint *fc_;
};

inline Vector project(const Projector &p, std::span<const double> w) { return p(w); }

/// The shifted projected operator. Holds references to L_n and the
/// constraint; both must outlive it.
class ShiftedProjectedOperator {
public:
  ShiftedProjectedOperator(const CsrMatrix &normalized_laplacian,
                           const FairnessConstraint &fc, double sigma)
      : ln_(&normalized_laplacian), projector_(fc), sigma_(sigma) {
    require(ln_->rows() == fc.n(), ErrorKind::DimensionMismatch,
            "constraint size differs from Laplacian size");
  }

  Index n() const noexcept { return ln_->rows(); }
  double sigma() const noexcept { return sigma_; }
  const Projector &projector() const noexcept { return projector_; }

  /// out = P(L_n(Pw)) - sigma Pw + sigma w. `scratch` needs n entries and
  /// must not alias w or out.
  void apply(std::span<const double> w, std::span<double> out,
             std::span<double> scratch) const {
    require(w.size() == n() && out.size() == n() && scratch.size() == n(),
            ErrorKind::DimensionMismatch, "operator dimension mismatch");
    projector_.apply(w, scratch);   // Pw
    spmv(*ln_, scratch, out);       // L_n P w
    projector_.apply(out, out);     // P L_n P w
    for (Index i = 0; i < n(); ++i)
      out[i] += sigma_ * (w[i] - scratch[i]);
  }

  Vector operator()(std::span<const double> w) const {
    Vector out(n()), scratch(n());
    apply(w, out, scratch);
    return out;
  }

private:
  const CsrMatrix *ln_;
  Projector projector_;
  double sigma_;
};

/// Shift sigma = ||L_n||_1, an upper bound on the spectral radius of L_n.
inline double choose_shift(const LaplacianPair &lap) { return one_norm(lap.normalized); }

} // namespace fairsc
