#include "fairsc/graph.hpp"
#include "fairsc/lanczos.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace fairsc {
namespace {

using testing::vec_norm;

OperatorFn dense_op(const DenseMatrix &a) {
  return [&a](std::span<const double> x, std::span<double> y) {
    const auto r = multiply(a, x);
    std::copy(r.begin(), r.end(), y.begin());
  };
}

// Random symmetric PSD matrix with spectrum in [0, bound].
DenseMatrix random_psd(std::mt19937_64 &rng, Index n, double &bound) {
  DenseMatrix a = testing::random_symmetric(rng, n);
  const auto e = symmetric_eig_dense(a);
  for (Index i = 0; i < n; ++i)
    a(i, i) -= e.values.front();
  bound = e.values.back() - e.values.front() + 1e-3;
  return a;
}

void expect_orthonormal(const DenseMatrix &x, double tol) {
  const auto g = multiply_transposed(x, x);
  EXPECT_LE(testing::max_abs_diff(g, DenseMatrix::identity(x.cols())), tol);
}

TEST(SmallestEigs, DiagonalOperator) {
  const Index n = 20;
  OperatorFn op = [](std::span<const double> x, std::span<double> y) {
    for (Index i = 0; i < x.size(); ++i)
      y[i] = static_cast<double>(i + 1) * x[i];
  };
  LanczosConfig cfg;
  cfg.k = 3;
  cfg.max_basis = 10;
  const auto res = smallest_eigs(op, n, cfg, 21.0);
  ASSERT_EQ(res.eigenvalues.size(), 3u);
  for (Index j = 0; j < 3; ++j) {
    EXPECT_NEAR(res.eigenvalues[j], static_cast<double>(j + 1), 1e-8);
    EXPECT_NEAR(std::abs(res.eigenvectors(j, j)), 1.0, 1e-8);
  }
}

TEST(SmallestEigs, TwoComponentGraphFindsBothNullVectors) {
  // Two disjoint paths of 30 vertices.
  const Index half = 30, n = 2 * half;
  std::vector<Triplet> t;
  for (Index base : {Index{0}, half})
    for (Index i = 0; i + 1 < half; ++i) {
      t.push_back({base + i, base + i + 1, 1.0});
      t.push_back({base + i + 1, base + i, 1.0});
    }
  const auto lap = build_laplacians(WeightedGraph(csr_from_coo(t, n, n)));
  OperatorFn op = [&](std::span<const double> x, std::span<double> y) {
    spmv(lap.normalized, x, y);
  };
  LanczosConfig cfg;
  cfg.k = 2;
  const auto res = smallest_eigs(op, n, cfg, 2.0);
  EXPECT_NEAR(res.eigenvalues[0], 0.0, 1e-8);
  EXPECT_NEAR(res.eigenvalues[1], 0.0, 1e-8);
  // The span equals span{D^{1/2} 1_{C1}, D^{1/2} 1_{C2}}.
  DenseMatrix basis(n, 2);
  for (Index i = 0; i < n; ++i)
    basis(i, i < half ? 0 : 1) = std::sqrt(lap.degrees[i]);
  for (Index j = 0; j < 2; ++j)
    scale(1.0 / norm2(basis.col(j)), basis.col(j));
  const auto overlap = multiply_transposed(basis, res.eigenvectors);
  const auto sv = symmetric_eig_dense(multiply_transposed(overlap, overlap));
  EXPECT_NEAR(sv.values[0], 1.0, 1e-8);
  EXPECT_NEAR(sv.values[1], 1.0, 1e-8);
}

TEST(SmallestEigs, MatchesDenseSolverOnRandomOperator) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 3; ++trial) {
    double bound = 0.0;
    const auto a = random_psd(rng, 80, bound);
    LanczosConfig cfg;
    cfg.k = 5;
    cfg.seed = 100 + static_cast<std::uint64_t>(trial);
    const auto res = smallest_eigs(dense_op(a), 80, cfg, bound);
    const auto ref = symmetric_eig_dense(a);
    for (Index j = 0; j < 5; ++j) {
      EXPECT_NEAR(res.eigenvalues[j], ref.values[j], 1e-8);
      EXPECT_LE(res.residuals[j], cfg.tol * bound);
    }
    expect_orthonormal(res.eigenvectors, 1e-10);
  }
}

TEST(SmallestEigs, ResidualContractOnGraphLaplacian) {
  std::mt19937_64 rng(62);
  const auto lap = build_laplacians(testing::random_graph(rng, 400, 0.02));
  OperatorFn op = [&](std::span<const double> x, std::span<double> y) {
    spmv(lap.normalized, x, y);
  };
  LanczosConfig cfg;
  cfg.k = 6;
  const auto res = smallest_eigs(op, 400, cfg, 2.0);
  ASSERT_EQ(res.residuals.size(), 6u);
  for (Index j = 0; j < 6; ++j) {
    Vector x(res.eigenvectors.col(j).begin(), res.eigenvectors.col(j).end());
    auto r = spmv(lap.normalized, x);
    axpy(-res.eigenvalues[j], x, r);
    EXPECT_LE(vec_norm(r), cfg.tol * 2.0);
    if (j > 0) {
      EXPECT_LE(res.eigenvalues[j - 1], res.eigenvalues[j]);
    }
  }
  expect_orthonormal(res.eigenvectors, 1e-10);

  const auto ref = symmetric_eig_dense(lap.normalized.to_dense());
  for (Index j = 0; j < 6; ++j)
    EXPECT_NEAR(res.eigenvalues[j], ref.values[j], 1e-8);
}

TEST(SmallestEigs, RitzValuesImproveMonotonicallyAcrossRestarts) {
  std::mt19937_64 rng(63);
  const auto lap = build_laplacians(testing::random_graph(rng, 600, 0.01));
  OperatorFn op = [&](std::span<const double> x, std::span<double> y) {
    spmv(lap.normalized, x, y);
  };
  LanczosConfig cfg;
  cfg.k = 4;
  cfg.max_basis = 12;
  const auto res = smallest_eigs(op, 600, cfg, 2.0);
  ASSERT_GE(res.restart_ritz_values.size(), 2u);
  for (Index r = 1; r < res.restart_ritz_values.size(); ++r) {
    EXPECT_LE(res.restart_ritz_values[r], res.restart_ritz_values[r - 1] + 1e-12);
    EXPECT_LE(res.restart_residuals[r], res.restart_residuals[r - 1] * (1.0 + 1e-6) + 1e-14);
  }
}

TEST(SmallestEigs, DeterministicForFixedSeed) {
  std::mt19937_64 rng(64);
  const auto lap = build_laplacians(testing::random_graph(rng, 300, 0.03));
  OperatorFn op = [&](std::span<const double> x, std::span<double> y) {
    spmv(lap.normalized, x, y);
  };
  LanczosConfig cfg;
  cfg.k = 3;
  const auto a = smallest_eigs(op, 300, cfg, 2.0);
  const auto b = smallest_eigs(op, 300, cfg, 2.0);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(testing::max_abs_diff(a.eigenvectors, b.eigenvectors), 0.0);
  EXPECT_EQ(a.matvec_count, b.matvec_count);
}

TEST(SmallestEigs, WorkspaceIsLinearInDimension) {
  std::mt19937_64 rng(65);
  const Index n = 2000;
  const auto lap = build_laplacians(testing::random_graph(rng, n, 0.003));
  OperatorFn op = [&](std::span<const double> x, std::span<double> y) {
    spmv(lap.normalized, x, y);
  };
  LanczosConfig cfg;
  cfg.k = 5;
  const auto res = smallest_eigs(op, n, cfg, 2.0);
  const Index m = cfg.basis_size();
  EXPECT_LE(res.peak_workspace_doubles, n * (3 * m + 4) + m * m);
  EXPECT_LT(res.peak_workspace_doubles, n * n / 10);
}

TEST(SmallestEigs, ReportsConvergenceFailureWithResiduals) {
  std::mt19937_64 rng(66);
  const auto lap = build_laplacians(testing::random_graph(rng, 500, 0.01));
  OperatorFn op = [&](std::span<const double> x, std::span<double> y) {
    spmv(lap.normalized, x, y);
  };
  LanczosConfig cfg;
  cfg.k = 5;
  cfg.max_basis = 8;
  cfg.max_restarts = 1;
  cfg.tol = 1e-14;
  try {
    smallest_eigs(op, 500, cfg, 2.0);
    FAIL() << "expected ConvergenceFailure";
  } catch (const ConvergenceFailure &e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConvergenceFailure);
    EXPECT_EQ(e.best_residuals().size(), 5u);
  }
}

TEST(SmallestEigs, RejectsInvalidConfig) {
  OperatorFn op = [](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), y.begin());
  };
  LanczosConfig cfg;
  cfg.k = 0;
  EXPECT_THROW(smallest_eigs(op, 10, cfg, 1.0), Error);
  cfg.k = 5;
  cfg.max_basis = 6;
  EXPECT_THROW(smallest_eigs(op, 10, cfg, 1.0), Error);
  cfg.max_basis = 0;
  cfg.tol = 0.0;
  EXPECT_THROW(smallest_eigs(op, 10, cfg, 1.0), Error);
}

TEST(SmallestEigs, SmallOperatorSolvedExactly) {
  std::mt19937_64 rng(67);
  double bound = 0.0;
  const auto a = random_psd(rng, 6, bound);
  LanczosConfig cfg;
  cfg.k = 6;
  const auto res = smallest_eigs(dense_op(a), 6, cfg, bound);
  const auto ref = symmetric_eig_dense(a);
  for (Index j = 0; j < 6; ++j)
    EXPECT_NEAR(res.eigenvalues[j], ref.values[j], 1e-10);
}

} // namespace
} // namespace fairsc
