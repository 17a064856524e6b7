#pragma once

// Random instance generators and dense reference computations used only by
// the tests. Nothing here calls into the solver paths it is used to check.

#include "fairsc/graph.hpp"
#include "fairsc/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace fairsc::testing {

inline double uniform(std::mt19937_64 &rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vector random_vector(std::mt19937_64 &rng, Index n) {
  Vector v(n);
  for (double &x : v)
    x = uniform(rng, -1.0, 1.0);
  return v;
}

inline DenseMatrix random_dense(std::mt19937_64 &rng, Index rows, Index cols) {
  DenseMatrix m(rows, cols);
  for (double &x : m.values())
    x = uniform(rng, -1.0, 1.0);
  return m;
}

inline DenseMatrix random_symmetric(std::mt19937_64 &rng, Index n) {
  DenseMatrix m(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= j; ++i)
      m(i, j) = m(j, i) = uniform(rng, -1.0, 1.0);
  return m;
}

/// Random sparse triplets with roughly `density` fill, symmetric if asked.
inline std::vector<Triplet> random_triplets(std::mt19937_64 &rng, Index n, double density,
                                            bool symmetric) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i)
    for (Index j = symmetric ? i : 0; j < n; ++j)
      if (uniform(rng) < density) {
        const double v = uniform(rng, -1.0, 1.0);
        t.push_back({i, j, v});
        if (symmetric && i != j)
          t.push_back({j, i, v});
      }
  return t;
}

/// Connected random weighted graph: a spanning path plus random extra edges.
inline WeightedGraph random_graph(std::mt19937_64 &rng, Index n, double density) {
  std::vector<Triplet> t;
  for (Index i = 0; i + 1 < n; ++i) {
    const double w = uniform(rng, 0.1, 1.0);
    t.push_back({i, i + 1, w});
    t.push_back({i + 1, i, w});
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 2; j < n; ++j)
      if (uniform(rng) < density) {
        const double w = uniform(rng, 0.1, 1.0);
        t.push_back({i, j, w});
        t.push_back({j, i, w});
      }
  return WeightedGraph(csr_from_coo(t, n, n));
}

/// Random partition with every group nonempty.
inline GroupPartition random_partition(std::mt19937_64 &rng, Index n, int h) {
  std::vector<int> m(n);
  for (Index i = 0; i < n; ++i)
    m[i] = i < static_cast<Index>(h) ? static_cast<int>(i)
                                     : static_cast<int>(rng() % static_cast<unsigned>(h));
  std::shuffle(m.begin(), m.end(), rng);
  return GroupPartition(std::move(m), h);
}

inline DenseMatrix dense_multiply(const DenseMatrix &a, const DenseMatrix &b) {
  DenseMatrix c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Index p = 0; p < a.cols(); ++p)
        s += a(i, p) * b(p, j);
      c(i, j) = s;
    }
  return c;
}

inline Vector dense_apply(const DenseMatrix &a, const Vector &x) {
  Vector y(a.rows(), 0.0);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      y[i] += a(i, j) * x[j];
  return y;
}

inline double max_abs_diff(const DenseMatrix &a, const DenseMatrix &b) {
  double m = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline double max_abs_diff(const Vector &a, const Vector &b) {
  double m = 0.0;
  for (Index i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double vec_norm(const Vector &v) {
  double s = 0.0;
  for (double x : v)
    s += x * x;
  return std::sqrt(s);
}

/// Dense projector I - C (C^T C)^{-1} C^T via Gauss-Jordan inversion of the
/// small Gram matrix.
inline DenseMatrix dense_projector(const DenseMatrix &c) {
  const Index n = c.rows(), p = c.cols();
  DenseMatrix g(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j)
      for (Index r = 0; r < n; ++r)
        g(i, j) += c(r, i) * c(r, j);
  DenseMatrix inv = DenseMatrix::identity(p);
  for (Index col = 0; col < p; ++col) {
    Index piv = col;
    for (Index r = col + 1; r < p; ++r)
      if (std::abs(g(r, col)) > std::abs(g(piv, col)))
        piv = r;
    for (Index j = 0; j < p; ++j) {
      std::swap(g(col, j), g(piv, j));
      std::swap(inv(col, j), inv(piv, j));
    }
    const double d = g(col, col);
    for (Index j = 0; j < p; ++j) {
      g(col, j) /= d;
      inv(col, j) /= d;
    }
    for (Index r = 0; r < p; ++r)
      if (r != col) {
        const double f = g(r, col);
        for (Index j = 0; j < p; ++j) {
          g(r, j) -= f * g(col, j);
          inv(r, j) -= f * inv(col, j);
        }
      }
  }
  DenseMatrix proj = DenseMatrix::identity(n);
  const DenseMatrix ci = dense_multiply(c, inv);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index a = 0; a < p; ++a)
        proj(i, j) -= ci(i, a) * c(j, a);
  return proj;
}

} // namespace fairsc::testing
