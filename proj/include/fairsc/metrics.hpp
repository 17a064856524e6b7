#pragma once

// Accuracy and fairness scores: matched error rate, balance, group
// fractions per cluster and the normalized cut.

#include "fairsc/error.hpp"
#include "fairsc/graph.hpp"
#include "fairsc/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fairsc {

/// counts(r, c) = |{i : row_labels[i] = r and col_labels[i] = c}|.
struct ContingencyTable {
  Index rows = 0, cols = 0;
  std::vector<Index> counts; // row-major

  Index operator()(Index r, Index c) const { return counts[r * cols + c]; }
  Index row_sum(Index r) const {
    Index s = 0;
    for (Index c = 0; c < cols; ++c)
      s += (*this)(r, c);
    return s;
  }
  Index col_sum(Index c) const {
    Index s = 0;
    for (Index r = 0; r < rows; ++r)
      s += (*this)(r, c);
    return s;
  }
};

inline ContingencyTable contingency(const Labeling &row_labels, const Labeling &col_labels) {
  require(row_labels.size() == col_labels.size(), ErrorKind::DimensionMismatch,
          "labelings have different sizes");
  ContingencyTable t;
  t.rows = static_cast<Index>(row_labels.count());
  t.cols = static_cast<Index>(col_labels.count());
  t.counts.assign(t.rows * t.cols, 0);
  for (Index i = 0; i < row_labels.size(); ++i)
    ++t.counts[static_cast<Index>(row_labels[i]) * t.cols + static_cast<Index>(col_labels[i])];
  return t;
}

/// Minimum-cost perfect matching on a square cost matrix (row-major).
/// Returns assignment[row] = column. O(k^3) shortest augmenting paths.
inline std::vector<Index> hungarian_min(const std::vector<double> &cost, Index k) {
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; p[j] = row matched to column j.
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0), minv(k + 1);
  std::vector<Index> p(k + 1, 0), way(k + 1, 0);
  std::vector<char> used(k + 1);
  for (Index i = 1; i <= k; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= k; ++j) {
        if (used[j])
          continue;
        const double cur = cost[(i0 - 1) * k + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> assignment(k);
  for (Index j = 1; j <= k; ++j)
    assignment[p[j] - 1] = j - 1;
  return assignment;
}

struct ErrorRate {
  double err = 0.0;                   // (1/n) min_J ||H_hat J - H||_F^2
  double misclustered_fraction = 0.0; // unmatched vertices / n
  std::vector<int> permutation;       // computed label -> truth label
};

/// Err = (1/n) min over permutations J of ||H_hat J - H||_F^2. Each vertex
/// whose relabeled cluster differs from the truth contributes 2, so err is
/// twice the misclustered fraction; both are reported.
inline ErrorRate error_rate(const Clustering &computed, const Clustering &truth) {
  require(computed.size() == truth.size(), ErrorKind::DimensionMismatch,
          "clusterings have different sizes");
  require(computed.k() == truth.k(), ErrorKind::InvalidK,
          "cluster counts differ: " + std::to_string(computed.k()) + " vs " +
              std::to_string(truth.k()));
  const Index n = computed.size(), k = static_cast<Index>(truth.k());
  const auto table = contingency(computed, truth);
  std::vector<double> cost(k * k);
  for (Index i = 0; i < k * k; ++i)
    cost[i] = -static_cast<double>(table.counts[i]);
  const auto match = hungarian_min(cost, k);

  ErrorRate out;
  out.permutation.resize(k);
  Index matched = 0;
  for (Index r = 0; r < k; ++r) {
    out.permutation[r] = static_cast<int>(match[r]);
    matched += table(r, match[r]);
  }
  // Literal Frobenius norm of H_hat J - H.
  double fro = 0.0;
  for (Index i = 0; i < n; ++i)
    if (out.permutation[static_cast<Index>(computed[i])] != truth[i])
      fro += 2.0;
  out.err = n == 0 ? 0.0 : fro / static_cast<double>(n);
  out.misclustered_fraction =
      n == 0 ? 0.0 : static_cast<double>(n - matched) / static_cast<double>(n);
  return out;
}

struct BalanceReport {
  std::vector<double> per_cluster;
  double average = 0.0;
  std::vector<int> empty_clusters;
};

/// balance(C) = min over s != s' of |V_s ∩ C| / |V_s' ∩ C|, i.e. smallest
/// over largest group count. 0 if some group is absent (including empty
/// clusters, which are also flagged); 1 with a single group.
inline BalanceReport balance(const Clustering &clustering, const GroupPartition &groups) {
  const auto t = contingency(groups, clustering);
  BalanceReport out;
  for (Index c = 0; c < t.cols; ++c) {
    Index lo = std::numeric_limits<Index>::max(), hi = 0;
    for (Index s = 0; s < t.rows; ++s) {
      lo = std::min(lo, t(s, c));
      hi = std::max(hi, t(s, c));
    }
    if (hi == 0)
      out.empty_clusters.push_back(static_cast<int>(c));
    double b = 0.0;
    if (hi > 0)
      b = t.rows == 1 ? 1.0 : static_cast<double>(lo) / static_cast<double>(hi);
    out.per_cluster.push_back(b);
  }
  double s = 0.0;
  for (double b : out.per_cluster)
    s += b;
  out.average = out.per_cluster.empty() ? 0.0 : s / static_cast<double>(out.per_cluster.size());
  return out;
}

/// min over s != s' of |V_s| / |V_s'|. Every clustering has some cluster
/// with balance at or below this; exactly fair clusterings attain it in
/// every cluster.
inline double balance_upper_bound(const GroupPartition &groups) {
  const auto sizes = groups.sizes();
  if (sizes.size() == 1)
    return 1.0;
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  return static_cast<double>(*lo) / static_cast<double>(*hi);
}

struct FractionTable {
  DenseMatrix table; // h x k, entry (s, l) = |V_s ∩ C_l| / |C_l|
  std::vector<int> empty_clusters;
};

inline FractionTable fairness_fractions(const Clustering &clustering,
                                        const GroupPartition &groups) {
  const auto t = contingency(groups, clustering);
  FractionTable out{DenseMatrix(t.rows, t.cols), {}};
  for (Index c = 0; c < t.cols; ++c) {
    const Index size = t.col_sum(c);
    if (size == 0) {
      out.empty_clusters.push_back(static_cast<int>(c));
      continue;
    }
    for (Index s = 0; s < t.rows; ++s)
      out.table(s, c) = static_cast<double>(t(s, c)) / static_cast<double>(size);
  }
  return out;
}

/// NCut = sum_l Cut(C_l, V \ C_l) / vol(C_l).
inline double ncut_value(const Clustering &clustering, const WeightedGraph &g) {
  require(clustering.size() == g.n(), ErrorKind::DimensionMismatch,
          "clustering size differs from graph size");
  const Index k = static_cast<Index>(clustering.k());
  std::vector<double> cut(k, 0.0), vol(k, 0.0);
  const auto &w = g.adjacency();
  for (Index i = 0; i < g.n(); ++i) {
    const auto ci = static_cast<Index>(clustering[i]);
    vol[ci] += g.degrees()[i];
    for (Index p = w.row_offsets()[i]; p < w.row_offsets()[i + 1]; ++p)
      if (clustering[w.col_indices()[p]] != clustering[i])
        cut[ci] += w.values()[p];
  }
  double s = 0.0;
  for (Index l = 0; l < k; ++l) {
    require(vol[l] > 0.0, ErrorKind::InvalidArgument,
            "cluster " + std::to_string(l) + " has zero volume");
    s += cut[l] / vol[l];
  }
  return s;
}

struct EvaluationReport {
  std::optional<ErrorRate> error;
  BalanceReport balance;
  FractionTable fractions;
  std::optional<double> ncut; // absent when some cluster has zero volume
};

inline EvaluationReport evaluate(const Clustering &clustering, const GroupPartition &groups,
                                 const WeightedGraph *graph = nullptr,
                                 const Clustering *truth = nullptr) {
  EvaluationReport r;
  if (truth)
    r.error = error_rate(clustering, *truth);
  r.balance = balance(clustering, groups);
  r.fractions = fairness_fractions(clustering, groups);
  if (graph && r.balance.empty_clusters.empty())
    r.ncut = ncut_value(clustering, *graph);
  return r;
}

} // namespace fairsc
