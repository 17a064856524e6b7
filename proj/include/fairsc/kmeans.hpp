#pragma once

// Lloyd's k-means with k-means++ seeding on the rows of an embedding.

#include "fairsc/error.hpp"
#include "fairsc/matrix.hpp"
#include "fairsc/partition.hpp"
#include "fairsc/rng.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace fairsc {

struct KMeansConfig {
  int k = 2;
  int max_iters = 300;
  int n_restarts = 10;
  std::uint64_t seed = 42;
  double tol = 1e-10; // on max centroid movement
  int threads = 1;    // restarts run concurrently; result does not depend on it

  void validate() const {
    require(k >= 1, ErrorKind::InvalidK, "k must be >= 1");
    require(n_restarts >= 1, ErrorKind::InvalidArgument, "n_restarts must be >= 1");
    require(max_iters >= 1, ErrorKind::InvalidArgument, "max_iters must be >= 1");
    require(tol >= 0.0, ErrorKind::InvalidArgument, "tol must be nonnegative");
  }
};

struct KMeansResult {
  Clustering clustering;
  DenseMatrix centroids; // k x d
  double wcss = 0.0;
  int iterations = 0;
  int best_restart = 0;
  std::vector<double> history; // objective after each Lloyd step, best restart
};

namespace detail {

inline double row_dist2(const DenseMatrix &x, Index i, const DenseMatrix &c, Index j) {
  double s = 0.0;
  for (Index t = 0; t < x.cols(); ++t) {
    const double d = x(i, t) - c(j, t);
    s += d * d;
  }
  return s;
}

inline DenseMatrix kmeanspp_seed(const DenseMatrix &x, Index k, Rng &rng) {
  const Index n = x.rows(), d = x.cols();
  DenseMatrix c(k, d);
  auto take = [&](Index row, Index j) {
    for (Index t = 0; t < d; ++t)
      c(j, t) = x(row, t);
  };
  take(uniform_index(rng, n), 0);
  std::vector<double> best(n);
  for (Index i = 0; i < n; ++i)
    best[i] = row_dist2(x, i, c, 0);
  for (Index j = 1; j < k; ++j) {
    double total = 0.0;
    for (double b : best)
      total += b;
    Index pick = 0;
    if (total > 0.0) {
      double r = unit_uniform(rng) * total;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        r -= best[i];
        if (r < 0.0) {
          pick = i;
          break;
        }
      }
      // Never pick a zero-weight point because of rounding at the tail.
      while (best[pick] == 0.0 && pick > 0)
        --pick;
    } else {
      pick = uniform_index(rng, n); // all points coincide with chosen centers
    }
    take(pick, j);
    for (Index i = 0; i < n; ++i)
      best[i] = std::min(best[i], row_dist2(x, i, c, j));
  }
  return c;
}

inline KMeansResult lloyd(const DenseMatrix &x, DenseMatrix c, const KMeansConfig &cfg) {
  const Index n = x.rows(), d = x.cols(), k = c.rows();
  std::vector<int> assign(n, -1);
  std::vector<double> dist(n);
  KMeansResult out;

  auto assign_all = [&] {
    double obj = 0.0;
    for (Index i = 0; i < n; ++i) {
      Index arg = 0;
      double best = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < k; ++j) {
        const double dd = row_dist2(x, i, c, j);
        if (dd < best) {
          best = dd;
          arg = j;
        }
      }
      assign[i] = static_cast<int>(arg);
      dist[i] = best;
      obj += best;
    }
    return obj;
  };

  double obj = assign_all();
  out.history.push_back(obj);
  for (int it = 0; it < cfg.max_iters; ++it) {
    out.iterations = it + 1;
    DenseMatrix next(k, d);
    std::vector<Index> count(k, 0);
    for (Index i = 0; i < n; ++i) {
      const auto j = static_cast<Index>(assign[i]);
      ++count[j];
      for (Index t = 0; t < d; ++t)
        next(j, t) += x(i, t);
    }
    for (Index j = 0; j < k; ++j) {
      if (count[j] > 0) {
        for (Index t = 0; t < d; ++t)
          next(j, t) /= static_cast<double>(count[j]);
        continue;
      }
      // Empty cluster: move its centroid onto the worst-served point.
      Index far = 0;
      for (Index i = 1; i < n; ++i)
        if (dist[i] > dist[far])
          far = i;
      for (Index t = 0; t < d; ++t)
        next(j, t) = x(far, t);
      dist[far] = 0.0;
    }
    double moved = 0.0;
    for (Index j = 0; j < k; ++j)
      moved = std::max(moved, std::sqrt(row_dist2(next, j, c, j)));
    c = std::move(next);

    const double prev = obj;
    obj = assign_all();
    out.history.push_back(obj);
    if (obj > prev * (1.0 + 1e-12) + 1e-300)
      throw Error(ErrorKind::ConvergenceFailure,
                  "k-means objective increased from " + std::to_string(prev) + " to " +
                      std::to_string(obj));
    if (moved <= cfg.tol)
      break;
  }
  out.clustering = Clustering(std::move(assign), static_cast<int>(k));
  out.centroids = std::move(c);
  out.wcss = obj;
  return out;
}

} // namespace detail

/// Best of cfg.n_restarts k-means++/Lloyd runs by within-cluster sum of
/// squares. Restart r draws from a generator seeded with seed + r, so runs
/// are independent of each other and of evaluation order.
inline KMeansResult kmeans_detailed(const DenseMatrix &rows, const KMeansConfig &cfg) {
  cfg.validate();
  const Index n = rows.rows();
  require(static_cast<Index>(cfg.k) <= n, ErrorKind::InvalidK,
          "k = " + std::to_string(cfg.k) + " exceeds number of points " + std::to_string(n));
  std::vector<KMeansResult> runs(static_cast<Index>(cfg.n_restarts));
  std::vector<std::exception_ptr> errors(runs.size());
  auto run = [&](Index r) {
    try {
      Rng rng(cfg.seed + r);
      runs[r] = detail::lloyd(rows, detail::kmeanspp_seed(rows, static_cast<Index>(cfg.k), rng), cfg);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };
  const Index workers = std::min<Index>(static_cast<Index>(std::max(cfg.threads, 1)), runs.size());
  if (workers <= 1) {
    for (Index r = 0; r < runs.size(); ++r)
      run(r);
  } else {
    std::vector<std::thread> pool;
    for (Index w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (Index r = w; r < runs.size(); r += workers)
          run(r);
      });
    for (auto &t : pool)
      t.join();
  }
  Index best = 0;
  for (Index r = 0; r < runs.size(); ++r) {
    if (errors[r])
      std::rethrow_exception(errors[r]);
    if (runs[r].wcss < runs[best].wcss) // first restart wins ties
      best = r;
  }
  runs[best].best_restart = static_cast<int>(best);
  return std::move(runs[best]);
}

inline Clustering kmeans(const DenseMatrix &rows, const KMeansConfig &cfg) {
  return kmeans_detailed(rows, cfg).clustering;
}

} // namespace fairsc
