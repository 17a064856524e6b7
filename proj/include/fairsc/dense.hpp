#pragma once

// Small dense factorizations: Cholesky, Householder QR and the symmetric
// eigensolver (Householder tridiagonalization + implicit QL).

#include "fairsc/error.hpp"
#include "fairsc/matrix.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace fairsc {

/// Lower Cholesky factor of a symmetric positive definite matrix. Only the
/// lower triangle of `a` is read.
inline DenseMatrix cholesky_spd(const DenseMatrix &a) {
  require(a.rows() == a.cols(), ErrorKind::DimensionMismatch,
          "cholesky needs a square matrix");
  const Index n = a.rows();
  DenseMatrix l(n, n);
  for (Index j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (Index p = 0; p < j; ++p)
      diag -= l(j, p) * l(j, p);
    if (!(diag > 0.0))
      throw Error(ErrorKind::NotPositiveDefinite,
                  "non-positive pivot " + std::to_string(diag) + " at column " +
                      std::to_string(j));
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Index p = 0; p < j; ++p)
        s -= l(i, p) * l(j, p);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

/// Solves (L L^T) x = b given the lower factor L.
inline Vector cholesky_solve(const DenseMatrix &l, std::span<const double> b) {
  const Index n = l.rows();
  require(b.size() == n, ErrorKind::DimensionMismatch,
          "cholesky_solve dimension mismatch");
  Vector x(b.begin(), b.end());
  for (Index i = 0; i < n; ++i) {
    double s = x[i];
    for (Index p = 0; p < i; ++p)
      s -= l(i, p) * x[p];
    x[i] = s / l(i, i);
  }
  for (Index i = n; i-- > 0;) {
    double s = x[i];
    for (Index p = i + 1; p < n; ++p)
      s -= l(p, i) * x[p];
    x[i] = s / l(i, i);
  }
  return x;
}

/// Householder QR of a tall matrix, A = Q R with Q = H_0 H_1 ... H_{p-1}.
class QrFactorization {
public:
  explicit QrFactorization(const DenseMatrix &a) : rows_(a.rows()), cols_(a.cols()) {
    require(cols_ <= rows_, ErrorKind::DimensionMismatch,
            "qr_tall needs rows >= cols");
    DenseMatrix work = a;
    r_ = DenseMatrix(cols_, cols_);
    reflectors_.reserve(cols_);
    betas_.reserve(cols_);
    for (Index j = 0; j < cols_; ++j) {
      Vector v(rows_ - j);
      for (Index i = j; i < rows_; ++i)
        v[i - j] = work(i, j);
      const double xnorm = norm2(v);
      double alpha = 0.0;
      double beta = 0.0;
      if (xnorm > 0.0) {
        alpha = v[0] > 0.0 ? -xnorm : xnorm;
        v[0] -= alpha;
        const double vv = dot(v, v);
        beta = vv > 0.0 ? 2.0 / vv : 0.0;
      }
      // Apply H_j to the trailing columns.
      for (Index c = j; c < cols_; ++c) {
        double s = 0.0;
        for (Index i = j; i < rows_; ++i)
          s += v[i - j] * work(i, c);
        s *= beta;
        for (Index i = j; i < rows_; ++i)
          work(i, c) -= s * v[i - j];
      }
      for (Index i = 0; i <= j; ++i)
        r_(i, j) = work(i, j);
      reflectors_.push_back(std::move(v));
      betas_.push_back(beta);
    }
  }

  const DenseMatrix &r() const noexcept { return r_; }

  /// Columns [first, first+count) of the full orthogonal factor.
  DenseMatrix q_columns(Index first, Index count) const {
    require(first + count <= rows_, ErrorKind::DimensionMismatch,
            "q_columns out of range");
    DenseMatrix q(rows_, count);
    for (Index c = 0; c < count; ++c) {
      auto col = q.col(c);
      col[first + c] = 1.0;
      for (Index j = cols_; j-- > 0;)
        apply_reflector(j, col);
    }
    return q;
  }

  DenseMatrix thin_q() const { return q_columns(0, cols_); }

  /// Orthonormal basis of the orthogonal complement of range(A), valid when
  /// A has full column rank.
  DenseMatrix complement() const { return q_columns(cols_, rows_ - cols_); }

  /// Number of diagonal entries of R above `rel_tol * scale`.
  Index numerical_rank(double rel_tol, double scale) const {
    Index rank = 0;
    for (Index j = 0; j < cols_; ++j)
      if (std::abs(r_(j, j)) > rel_tol * scale)
        ++rank;
    return rank;
  }

private:
  void apply_reflector(Index j, std::span<double> x) const {
    const auto &v = reflectors_[j];
    double s = 0.0;
    for (Index i = j; i < rows_; ++i)
      s += v[i - j] * x[i];
    s *= betas_[j];
    if (s == 0.0)
      return;
    for (Index i = j; i < rows_; ++i)
      x[i] -= s * v[i - j];
  }

  Index rows_;
  Index cols_;
  DenseMatrix r_;
  std::vector<Vector> reflectors_;
  std::vector<double> betas_;
};

inline QrFactorization qr_tall(const DenseMatrix &a) { return QrFactorization(a); }

struct SymmetricEigen {
  Vector values; // ascending
  DenseMatrix vectors;
};

namespace detail {

// Householder reduction of the symmetric matrix held in v to tridiagonal
// form. On exit v holds the accumulated orthogonal transform, d the diagonal
// and e the subdiagonal (e[0] unused).
inline void tridiagonalize(DenseMatrix &v, Vector &d, Vector &e) {
  const Index n = v.rows();
  for (Index j = 0; j < n; ++j)
    d[j] = v(n - 1, j);

  for (Index i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (Index k = 0; k < i; ++k)
      scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (Index j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (Index k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0)
        g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (Index j = 0; j < i; ++j)
        e[j] = 0.0;
      for (Index j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (Index k = j + 1; k < i; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (Index j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (Index j = 0; j < i; ++j)
        e[j] -= hh * d[j];
      for (Index j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (Index k = j; k < i; ++k)
          v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (Index i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (Index k = 0; k <= i; ++k)
        d[k] = v(k, i + 1) / h;
      for (Index j = 0; j <= i; ++j) {
        double g = 0.0;
        for (Index k = 0; k <= i; ++k)
          g += v(k, i + 1) * v(k, j);
        for (Index k = 0; k <= i; ++k)
          v(k, j) -= g * d[k];
      }
    }
    for (Index k = 0; k <= i; ++k)
      v(k, i + 1) = 0.0;
  }
  for (Index j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL iterations on the tridiagonal (d, e), rotating the columns of v.
inline void tridiagonal_ql(DenseMatrix &v, Vector &d, Vector &e,
                           int max_iter_per_value) {
  const Index n = v.rows();
  for (Index i = 1; i < n; ++i)
    e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    Index m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1)
        break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_iter_per_value)
          throw Error(ErrorKind::ConvergenceFailure,
                      "dense QL did not converge for eigenvalue " +
                          std::to_string(l) + ", off-diagonal residual " +
                          std::to_string(std::abs(e[l])));
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0)
          r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (Index i = l + 2; i < n; ++i)
          d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (Index i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          auto vi = v.col(i);
          auto vi1 = v.col(i + 1);
          for (Index k = 0; k < n; ++k) {
            h = vi1[k];
            vi1[k] = s * vi[k] + c * h;
            vi[k] = c * vi[k] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

} // namespace detail

/// All eigenpairs of a symmetric matrix, eigenvalues ascending. The input is
/// symmetrized as (A + A^T)/2; asymmetry above 1e-12 relative is rejected.
inline SymmetricEigen symmetric_eig_dense(const DenseMatrix &a,
                                          int max_iter_per_value = 60) {
  require(a.rows() == a.cols(), ErrorKind::DimensionMismatch,
          "symmetric_eig_dense needs a square matrix");
  const Index n = a.rows();
  SymmetricEigen out;
  if (n == 0)
    return out;

  DenseMatrix v(n, n);
  double max_abs = 0.0;
  double max_asym = 0.0;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      max_abs = std::max(max_abs, std::abs(a(i, j)));
      max_asym = std::max(max_asym, std::abs(a(i, j) - a(j, i)));
      v(i, j) = 0.5 * (a(i, j) + a(j, i));
    }
  require(max_asym <= 1e-12 * std::max(max_abs, 1.0), ErrorKind::InvalidArgument,
          "matrix is not symmetric (asymmetry " + std::to_string(max_asym) + ")");

  Vector d(n), e(n);
  detail::tridiagonalize(v, d, e);
  detail::tridiagonal_ql(v, d, e, max_iter_per_value);

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return d[x] < d[y]; });
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (Index j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    auto src = v.col(order[j]);
    std::copy(src.begin(), src.end(), out.vectors.col(j).begin());
  }
  return out;
}

} // namespace fairsc
