#pragma once

// Random graphs with planted clusters: the SBM, the m-SBM with a fair
// ground truth, and unstructured random Laplacians for timing sweeps.
//
// Stream order: pairs (i, j) with i < j are visited row-major and each pair
// consumes exactly one unit_uniform draw, so an instance depends only on the
// spec and seed.

#include "fairsc/error.hpp"
#include "fairsc/graph.hpp"
#include "fairsc/partition.hpp"
#include "fairsc/rng.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace fairsc {

struct SbmSpec {
  std::vector<Index> u; // block sizes
  double a = 0.6, b = 0.2;
  double alpha = 1.0, beta = 1.0;
  std::uint64_t seed = 0;
};

/// u[i][j] = |V_j ∩ C_i|; vertices are laid out cluster by cluster, and by
/// group inside a cluster.
struct MsbmSpec {
  std::vector<std::vector<Index>> u;
  double a = 0.6, b = 0.4, c = 0.2, d = 0.1;
  double alpha = 1.5, beta = 1.0;
  std::uint64_t seed = 0;

  Index k() const { return u.size(); }
  Index h() const { return u.empty() ? 0 : u.front().size(); }
  Index n() const {
    Index s = 0;
    for (const auto &row : u)
      for (Index x : row)
        s += x;
    return s;
  }
};

struct SyntheticInstance {
  WeightedGraph graph;
  Clustering ground_truth;
  GroupPartition groups;
};

namespace detail {

inline void check_probability(double p, const char *name) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::InvalidArgument,
          std::string("probability ") + name + " = " + std::to_string(p) + " outside [0, 1]");
}

inline void check_weights(double alpha, double beta) {
  require(beta > 0.0 && alpha >= beta, ErrorKind::InvalidArgument,
          "weights must satisfy alpha >= beta > 0");
}

// Shared sampler: prob(i, j) and weight(i, j) for i < j.
template <class Prob, class Weight>
CsrMatrix sample_adjacency(Index n, std::uint64_t seed, Prob prob, Weight weight) {
  Rng rng(seed);
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (unit_uniform(rng) < prob(i, j)) {
        const double w = weight(i, j);
        t.push_back({i, j, w});
        t.push_back({j, i, w});
      }
  return csr_from_coo(t, n, n);
}

} // namespace detail

inline void validate(const SbmSpec &s) {
  require(!s.u.empty(), ErrorKind::InvalidArgument, "SBM needs at least one block");
  for (Index x : s.u)
    require(x > 0, ErrorKind::InvalidArgument, "SBM block sizes must be positive");
  detail::check_probability(s.a, "a");
  detail::check_probability(s.b, "b");
  require(s.a >= s.b, ErrorKind::InvalidArgument, "SBM requires a >= b");
  detail::check_weights(s.alpha, s.beta);
}

inline void validate(const MsbmSpec &s) {
  require(s.k() >= 1 && s.h() >= 1, ErrorKind::InvalidArgument, "m-SBM needs k, h >= 1");
  for (const auto &row : s.u)
    require(row.size() == s.h(), ErrorKind::InvalidArgument,
            "every cluster needs one count per group");
  for (const auto &[p, name] : {std::pair{s.a, "a"}, {s.b, "b"}, {s.c, "c"}, {s.d, "d"}})
    detail::check_probability(p, name);
  require(s.a >= s.b && s.b >= s.c && s.c >= s.d, ErrorKind::InvalidArgument,
          "m-SBM requires a >= b >= c >= d");
  detail::check_weights(s.alpha, s.beta);

  // u_i^(j) / |C_i| = |V_j| / n, cross-multiplied in integers.
  const Index n = s.n();
  std::vector<Index> cluster(s.k(), 0), group(s.h(), 0);
  for (Index i = 0; i < s.k(); ++i)
    for (Index j = 0; j < s.h(); ++j) {
      cluster[i] += s.u[i][j];
      group[j] += s.u[i][j];
    }
  for (Index i = 0; i < s.k(); ++i) {
    require(cluster[i] > 0, ErrorKind::InvalidArgument,
            "cluster " + std::to_string(i) + " is empty");
    for (Index j = 0; j < s.h(); ++j)
      if (s.u[i][j] * n != cluster[i] * group[j])
        throw Error(ErrorKind::FairBlockViolation,
                    "block (" + std::to_string(i) + ", " + std::to_string(j) + ") has " +
                        std::to_string(s.u[i][j]) + " vertices; fairness needs " +
                        std::to_string(cluster[i]) + "*" + std::to_string(group[j]) + "/" +
                        std::to_string(n));
  }
}

inline std::vector<int> sbm_blocks(const SbmSpec &s) {
  std::vector<int> c;
  for (Index i = 0; i < s.u.size(); ++i)
    c.insert(c.end(), s.u[i], static_cast<int>(i));
  return c;
}

/// (cluster, group) label of every vertex.
inline std::pair<std::vector<int>, std::vector<int>> msbm_labels(const MsbmSpec &s) {
  std::vector<int> cluster, group;
  for (Index i = 0; i < s.k(); ++i)
    for (Index j = 0; j < s.h(); ++j) {
      cluster.insert(cluster.end(), s.u[i][j], static_cast<int>(i));
      group.insert(group.end(), s.u[i][j], static_cast<int>(j));
    }
  return {cluster, group};
}

inline CsrMatrix sample_sbm_adjacency(const SbmSpec &s) {
  validate(s);
  const auto c = sbm_blocks(s);
  return detail::sample_adjacency(
      c.size(), s.seed, [&](Index i, Index j) { return c[i] == c[j] ? s.a : s.b; },
      [&](Index i, Index j) { return c[i] == c[j] ? s.alpha : s.beta; });
}

/// Edge probability: a same cluster and group, b different clusters but
/// same group, c same cluster but different groups, d neither. Weight alpha
/// within clusters, beta across.
inline CsrMatrix sample_msbm_adjacency(const MsbmSpec &s) {
  validate(s);
  const auto [c, g] = msbm_labels(s);
  return detail::sample_adjacency(
      c.size(), s.seed,
      [&](Index i, Index j) {
        const bool sc = c[i] == c[j], sg = g[i] == g[j];
        return sc ? (sg ? s.a : s.c) : (sg ? s.b : s.d);
      },
      [&](Index i, Index j) { return c[i] == c[j] ? s.alpha : s.beta; });
}

/// Throws IsolatedVertex if the draw leaves a vertex without edges.
inline SyntheticInstance generate_sbm(const SbmSpec &s) {
  auto w = sample_sbm_adjacency(s);
  const Index n = w.rows();
  return {WeightedGraph(std::move(w)), Clustering(sbm_blocks(s), static_cast<int>(s.u.size())),
          GroupPartition(std::vector<int>(n, 0), 1)};
}

inline SyntheticInstance generate_msbm(const MsbmSpec &s) {
  auto w = sample_msbm_adjacency(s);
  auto [c, g] = msbm_labels(s);
  return {WeightedGraph(std::move(w)), Clustering(std::move(c), static_cast<int>(s.k())),
          GroupPartition(std::move(g), static_cast<int>(s.h()))};
}

struct ProbabilityScales {
  double a = 10.0, b = 7.0, c = 4.0, d = 1.0;
};

/// Equal fair blocks u_i^(j) = n/(k h) with probabilities
/// scales * (log n / n)^{2/3}.
inline MsbmSpec msbm_spec_for_experiment(Index n, Index k, Index h, std::uint64_t seed = 0,
                                         ProbabilityScales scales = {}, double alpha = 1.5,
                                         double beta = 1.0) {
  require(k >= 1 && h >= 1, ErrorKind::InvalidArgument, "k and h must be >= 1");
  if (n % (k * h) != 0)
    throw Error(ErrorKind::IndivisibleSize, "n = " + std::to_string(n) +
                                                " is not divisible by k*h = " +
                                                std::to_string(k * h));
  MsbmSpec s;
  s.u.assign(k, std::vector<Index>(h, n / (k * h)));
  const double q = std::pow(std::log(static_cast<double>(n)) / static_cast<double>(n), 2.0 / 3.0);
  s.a = scales.a * q;
  s.b = scales.b * q;
  s.c = scales.c * q;
  s.d = scales.d * q;
  s.alpha = alpha;
  s.beta = beta;
  s.seed = seed;
  validate(s);
  return s;
}

struct RandomLaplacianInstance {
  WeightedGraph graph;
  DenseMatrix f; // n x (h-1) random placeholder constraint
};

/// Random sparse symmetric W with about `avg_degree` neighbours per vertex
/// and uniform (0, 1] weights, plus a random F. Each vertex draws
/// avg_degree/2 partners, so no vertex is isolated.
inline RandomLaplacianInstance random_laplacian_instance(Index n, Index h, Index avg_degree,
                                                         std::uint64_t seed) {
  require(n >= 2 && h >= 1, ErrorKind::InvalidArgument, "need n >= 2 and h >= 1");
  Rng rng(seed);
  const Index per = std::max<Index>(1, avg_degree / 2);
  std::vector<Triplet> t;
  t.reserve(2 * n * per);
  for (Index i = 0; i < n; ++i)
    for (Index e = 0; e < per; ++e) {
      Index j = uniform_index(rng, n - 1);
      if (j >= i)
        ++j;
      const double w = 1.0 - unit_uniform(rng);
      t.push_back({i, j, w});
      t.push_back({j, i, w});
    }
  RandomLaplacianInstance out{WeightedGraph(csr_from_coo(t, n, n)), DenseMatrix(n, h - 1)};
  for (double &v : out.f.values())
    v = unit_uniform(rng) - 0.5;
  return out;
}

} // namespace fairsc
