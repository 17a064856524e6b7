#pragma once

// End-to-end pipelines: SC, scalable FairSC (deflated Lanczos) and the
// dense FairSC baseline. Each ends with k-means on the embedding rows.

#include "fairsc/eigensolver.hpp"
#include "fairsc/kmeans.hpp"

#include <chrono>
#include <optional>

namespace fairsc {

struct PipelineConfig {
  LanczosConfig lanczos;          // k is taken from the pipeline argument
  KMeansConfig kmeans;            // likewise
  std::optional<double> sigma;    // deflation shift; default ||L_n||_1
  DenseEigOptions dense{};
};

struct PhaseTimes {
  double build = 0.0, eigs = 0.0, kmeans = 0.0;
  double total() const { return build + eigs + kmeans; }
};

struct PipelineResult {
  Clustering clustering;
  DenseMatrix embedding; // rows fed to k-means
  Vector eigenvalues;
  PhaseTimes seconds;
  Index matvec_count = 0;
  int restarts = 0;
  double sigma = 0.0; // s-FairSC only
};

namespace detail {

class Stopwatch {
public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline LanczosConfig with_k(LanczosConfig c, Index k) {
  c.k = k;
  return c;
}

// H = D^{-1/2} X.
inline DenseMatrix unnormalize(const LaplacianPair &lap, DenseMatrix x) {
  for (Index j = 0; j < x.cols(); ++j) {
    auto col = x.col(j);
    for (Index i = 0; i < x.rows(); ++i)
      col[i] *= lap.inv_sqrt_degrees[i];
  }
  return x;
}

inline void finish(PipelineResult &r, EigResult eig, DenseMatrix embedding, Index k,
                   const PipelineConfig &cfg, Stopwatch &clock) {
  r.eigenvalues = std::move(eig.eigenvalues);
  r.matvec_count = eig.matvec_count;
  r.restarts = eig.restarts;
  r.embedding = std::move(embedding);
  KMeansConfig km = cfg.kmeans;
  km.k = static_cast<int>(k);
  r.clustering = kmeans(r.embedding, km);
  r.seconds.kmeans = clock.lap();
}

} // namespace detail

/// Normalized spectral clustering on L_n.
inline PipelineResult sc(const WeightedGraph &g, Index k, const PipelineConfig &cfg = {}) {
  detail::Stopwatch clock;
  PipelineResult r;
  const auto lap = build_laplacians(g);
  r.seconds.build = clock.lap();
  auto eig = laplacian_eigs(lap, detail::with_k(cfg.lanczos, k));
  r.seconds.eigs = clock.lap();
  auto h = detail::unnormalize(lap, eig.eigenvectors);
  detail::finish(r, std::move(eig), std::move(h), k, cfg, clock);
  return r;
}

/// s-FairSC for an arbitrary constraint matrix (already wrapped with the
/// graph's degrees). Build time covers only what this call constructs.
inline PipelineResult sfairsc(const LaplacianPair &lap, const FairnessConstraint &fc, Index k,
                              const PipelineConfig &cfg = {}) {
  detail::Stopwatch clock;
  PipelineResult r;
  r.sigma = cfg.sigma.value_or(choose_shift(lap));
  r.seconds.build = clock.lap();
  auto eig = sfairsc_eigs(lap, fc, detail::with_k(cfg.lanczos, k), r.sigma);
  r.seconds.eigs = clock.lap();
  auto h = detail::unnormalize(lap, eig.eigenvectors);
  detail::finish(r, std::move(eig), std::move(h), k, cfg, clock);
  return r;
}

inline PipelineResult sfairsc(const WeightedGraph &g, const GroupPartition &groups, Index k,
                              const PipelineConfig &cfg = {}) {
  detail::Stopwatch clock;
  const auto lap = build_laplacians(g);
  const auto fc = build_fairness_constraint(groups, lap);
  const double build = clock.lap();
  auto r = sfairsc(lap, fc, k, cfg);
  r.seconds.build += build;
  return r;
}

inline PipelineResult fairsc(const LaplacianPair &lap, const FairnessConstraint &fc, Index k,
                             const PipelineConfig &cfg = {}) {
  detail::Stopwatch clock;
  PipelineResult r;
  auto eig = fairsc_dense_pipeline(lap, fc, k, cfg.dense);
  r.seconds.eigs = clock.lap();
  auto h = eig.eigenvectors;
  detail::finish(r, std::move(eig), std::move(h), k, cfg, clock);
  return r;
}

/// Dense FairSC baseline; throws TooLargeForDense past cfg.dense.guard.
inline PipelineResult fairsc(const WeightedGraph &g, const GroupPartition &groups, Index k,
                             const PipelineConfig &cfg = {}) {
  require(g.n() <= cfg.dense.guard, ErrorKind::TooLargeForDense,
          "n = " + std::to_string(g.n()) + " exceeds dense guard " +
              std::to_string(cfg.dense.guard));
  detail::Stopwatch clock;
  const auto lap = build_laplacians(g);
  const auto fc = build_fairness_constraint(groups, lap);
  const double build = clock.lap();
  auto r = fairsc(lap, fc, k, cfg);
  r.seconds.build += build;
  return r;
}

} // namespace fairsc
