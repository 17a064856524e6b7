#pragma once

// Weighted graphs, Laplacians and the group-fairness constraint F^T H = 0.

#include "fairsc/dense.hpp"
#include "fairsc/error.hpp"
#include "fairsc/matrix.hpp"
#include "fairsc/partition.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace fairsc {

/// Undirected graph with nonnegative weights, zero diagonal and no isolated
/// vertices.
class WeightedGraph {
public:
  WeightedGraph() = default;

  explicit WeightedGraph(CsrMatrix adjacency) : adjacency_(std::move(adjacency)) {
    require(adjacency_.rows() == adjacency_.cols(), ErrorKind::InvalidArgument,
            "adjacency must be square");
    const Index n = adjacency_.rows();
    const auto offsets = adjacency_.row_offsets();
    const auto cols = adjacency_.col_indices();
    const auto vals = adjacency_.values();
    degrees_.assign(n, 0.0);
    for (Index i = 0; i < n; ++i) {
      for (Index p = offsets[i]; p < offsets[i + 1]; ++p) {
        const Index j = cols[p];
        require(j != i, ErrorKind::InvalidArgument,
                "self-loop at vertex " + std::to_string(i));
        require(vals[p] > 0.0, ErrorKind::InvalidArgument,
                "negative weight on edge (" + std::to_string(i) + ", " +
                    std::to_string(j) + ")");
        require(adjacency_.at(j, i) == vals[p], ErrorKind::InvalidArgument,
                "adjacency not symmetric at (" + std::to_string(i) + ", " +
                    std::to_string(j) + ")");
        degrees_[i] += vals[p];
      }
      if (degrees_[i] <= 0.0)
        throw Error(ErrorKind::IsolatedVertex,
                    "vertex " + std::to_string(i) + " has zero degree");
    }
  }

  Index n() const noexcept { return adjacency_.rows(); }
  const CsrMatrix &adjacency() const noexcept { return adjacency_; }
  const Vector &degrees() const noexcept { return degrees_; }

  /// Number of undirected edges.
  Index edges() const noexcept { return adjacency_.nnz() / 2; }

private:
  CsrMatrix adjacency_;
  Vector degrees_;
};

/// L = D - W and L_n = D^{-1/2} L D^{-1/2}.
struct LaplacianPair {
  CsrMatrix laplacian;
  CsrMatrix normalized;
  Vector degrees;
  Vector inv_sqrt_degrees;

  Index n() const noexcept { return laplacian.rows(); }
};

inline LaplacianPair build_laplacians(const WeightedGraph &g) {
  const Index n = g.n();
  const auto &w = g.adjacency();
  const auto &d = g.degrees();
  LaplacianPair out;
  out.degrees = d;
  out.inv_sqrt_degrees.resize(n);
  for (Index i = 0; i < n; ++i) {
    if (!(d[i] > 0.0))
      throw Error(ErrorKind::IsolatedVertex,
                  "vertex " + std::to_string(i) + " has zero degree");
    out.inv_sqrt_degrees[i] = 1.0 / std::sqrt(d[i]);
  }

  // W has a zero diagonal, so each row gains exactly one diagonal entry,
  // inserted in column order.
  const auto offsets = w.row_offsets();
  const auto cols = w.col_indices();
  const auto vals = w.values();
  std::vector<Index> lo(n + 1, 0);
  std::vector<Index> lc;
  std::vector<double> lv, nv;
  lc.reserve(w.nnz() + n);
  lv.reserve(w.nnz() + n);
  nv.reserve(w.nnz() + n);
  const auto &s = out.inv_sqrt_degrees;
  for (Index i = 0; i < n; ++i) {
    bool placed = false;
    for (Index p = offsets[i]; p < offsets[i + 1]; ++p) {
      const Index j = cols[p];
      if (!placed && j > i) {
        lc.push_back(i);
        lv.push_back(d[i]);
        nv.push_back(1.0);
        placed = true;
      }
      lc.push_back(j);
      lv.push_back(-vals[p]);
      nv.push_back(-vals[p] * s[i] * s[j]);
    }
    if (!placed) {
      lc.push_back(i);
      lv.push_back(d[i]);
      nv.push_back(1.0);
    }
    lo[i + 1] = lc.size();
  }
  out.laplacian = CsrMatrix(n, n, lo, lc, std::move(lv));
  out.normalized = CsrMatrix(n, n, std::move(lo), std::move(lc), std::move(nv));
  return out;
}

/// Group indicator G (n x h): g_is = 1 iff vertex i belongs to group s.
inline DenseMatrix build_group_indicator(const GroupPartition &p) {
  return p.indicator();
}

/// F = (G - 1 z^T)(:, 0:h-1) and C = D^{-1/2} F, with the Cholesky factor of
/// C^T C kept for projections. For h = 1 both matrices have zero columns.
struct FairnessConstraint {
  DenseMatrix f;
  DenseMatrix c;
  DenseMatrix gram_factor;
  Vector group_fractions; // empty when built from an explicit F

  Index constraints() const noexcept { return c.cols(); }
  Index n() const noexcept { return c.rows(); }
};

namespace detail {

inline FairnessConstraint finish_constraint(DenseMatrix f,
                                            const LaplacianPair &lap,
                                            Vector fractions) {
  const Index n = lap.n();
  require(f.rows() == n, ErrorKind::DimensionMismatch,
          "constraint rows differ from vertex count");
  FairnessConstraint fc;
  fc.group_fractions = std::move(fractions);
  fc.c = DenseMatrix(n, f.cols());
  for (Index j = 0; j < f.cols(); ++j)
    for (Index i = 0; i < n; ++i)
      fc.c(i, j) = lap.inv_sqrt_degrees[i] * f(i, j);
  if (f.cols() > 0) {
    const auto qr = qr_tall(f);
    const Index rank = qr.numerical_rank(1e-10, frobenius_norm(f));
    if (rank < f.cols())
      throw Error(ErrorKind::RankDeficientConstraint,
                  "constraint matrix has rank " + std::to_string(rank) +
                      " < " + std::to_string(f.cols()));
    try {
      fc.gram_factor = cholesky_spd(multiply_transposed(fc.c, fc.c));
    } catch (const Error &e) {
      throw Error(ErrorKind::RankDeficientConstraint, e.what());
    }
  }
  fc.f = std::move(f);
  return fc;
}

} // namespace detail

inline FairnessConstraint build_fairness_constraint(const GroupPartition &p,
                                                    const LaplacianPair &lap) {
  const Index n = p.size();
  const auto h = static_cast<Index>(p.groups());
  require(n == lap.n(), ErrorKind::DimensionMismatch,
          "partition size differs from graph size");
  const auto sizes = p.sizes();
  Vector z(h);
  for (Index s = 0; s < h; ++s)
    z[s] = static_cast<double>(sizes[s]) / static_cast<double>(n);

  DenseMatrix f(n, h - 1);
  for (Index s = 0; s + 1 < h; ++s)
    for (Index i = 0; i < n; ++i)
      f(i, s) = (static_cast<Index>(p[i]) == s ? 1.0 : 0.0) - z[s];
  return detail::finish_constraint(std::move(f), lap, std::move(z));
}

/// Constraint from an arbitrary full-column-rank F (used for the random
/// Laplacian benchmark, where F is a placeholder).
inline FairnessConstraint fairness_constraint_from_matrix(DenseMatrix f,
                                                          const LaplacianPair &lap) {
  return detail::finish_constraint(std::move(f), lap, {});
}

struct FairnessCheck {
  bool fair = false;
  double max_deviation = 0.0;
  bool has_empty_cluster = false;
};

/// Statistical parity check: every nonempty cluster holds each group in the
/// global proportion. Fairness is decided in exact integer arithmetic.
inline FairnessCheck check_group_fairness(const Clustering &clustering,
                                          const GroupPartition &groups) {
  require(clustering.size() == groups.size(), ErrorKind::DimensionMismatch,
          "clustering and groups differ in size");
  const Index n = clustering.size();
  const auto k = static_cast<Index>(clustering.k());
  const auto h = static_cast<Index>(groups.groups());
  std::vector<Index> counts(h * k, 0);
  for (Index i = 0; i < n; ++i)
    ++counts[static_cast<Index>(groups[i]) * k + static_cast<Index>(clustering[i])];
  const auto csize = clustering.sizes();
  const auto gsize = groups.sizes();

  FairnessCheck out;
  out.fair = true;
  for (Index l = 0; l < k; ++l) {
    if (csize[l] == 0) {
      out.has_empty_cluster = true;
      continue;
    }
    for (Index s = 0; s < h; ++s) {
      const Index m = counts[s * k + l];
      if (m * n != gsize[s] * csize[l])
        out.fair = false;
      const double dev = std::abs(static_cast<double>(m) / static_cast<double>(csize[l]) -
                                  static_cast<double>(gsize[s]) / static_cast<double>(n));
      out.max_deviation = std::max(out.max_deviation, dev);
    }
  }
  return out;
}

} // namespace fairsc
