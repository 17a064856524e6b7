#include "fairsc/matrix.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace fairsc {
namespace {

TEST(CsrFromCoo, SumsDuplicates) {
  const auto a = csr_from_coo(std::vector<Triplet>{{0, 0, 1.0}, {0, 0, 2.0}}, 1, 1);
  ASSERT_EQ(a.nnz(), 1u);
  EXPECT_EQ(a.values()[0], 3.0);
}

TEST(CsrFromCoo, EmptyInput) {
  const auto a = csr_from_coo(std::vector<Triplet>{}, 3, 3);
  EXPECT_EQ(a.nnz(), 0u);
  EXPECT_EQ(std::vector<Index>(a.row_offsets().begin(), a.row_offsets().end()),
            (std::vector<Index>{0, 0, 0, 0}));
}

TEST(CsrFromCoo, PrunesCancellingEntries) {
  const auto a = csr_from_coo(std::vector<Triplet>{{1, 0, 2.0}, {1, 0, -2.0}, {0, 1, 1.0}}, 2, 2);
  EXPECT_EQ(a.nnz(), 1u);
  EXPECT_EQ(a.at(0, 1), 1.0);
  EXPECT_EQ(a.at(1, 0), 0.0);
}

TEST(CsrFromCoo, RejectsOutOfRange) {
  EXPECT_THROW(csr_from_coo(std::vector<Triplet>{{0, 3, 1.0}}, 3, 3), Error);
  EXPECT_THROW(csr_from_coo(std::vector<Triplet>{{5, 0, 1.0}}, 3, 3), Error);
}

TEST(CsrFromCoo, MatchesDenseAccumulation) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Triplet> t;
    DenseMatrix oracle(8, 8);
    for (int e = 0; e < 40; ++e) {
      const Index i = rng() % 8, j = rng() % 8;
      const double v = static_cast<double>(static_cast<int>(rng() % 9) - 4);
      t.push_back({i, j, v});
      oracle(i, j) += v;
    }
    const auto a = csr_from_coo(t, 8, 8);
    EXPECT_EQ(testing::max_abs_diff(a.to_dense(), oracle), 0.0);
    for (double v : a.values())
      EXPECT_NE(v, 0.0);
    for (Index i = 0; i < 8; ++i)
      for (Index p = a.row_offsets()[i] + 1; p < a.row_offsets()[i + 1]; ++p)
        EXPECT_LT(a.col_indices()[p - 1], a.col_indices()[p]);
  }
}

TEST(CsrMatrix, ConstructorValidatesInvariants) {
  EXPECT_THROW(CsrMatrix(2, 2, {0, 1, 1}, {0}, {0.0}), Error);         // stored zero
  EXPECT_THROW(CsrMatrix(2, 2, {0, 2, 2}, {1, 0}, {1.0, 1.0}), Error); // unsorted
  EXPECT_THROW(CsrMatrix(2, 2, {0, 1, 1}, {2}, {1.0}), Error);         // column range
  EXPECT_THROW(CsrMatrix(2, 2, {0, 1}, {0}, {1.0}), Error);            // offsets length
}

TEST(Spmv, IdentityAndZero) {
  std::vector<Triplet> t;
  for (Index i = 0; i < 5; ++i)
    t.push_back({i, i, 1.0});
  const auto eye = csr_from_coo(t, 5, 5);
  const Vector x{1.5, -2.0, 3.0, 0.25, 7.0};
  EXPECT_EQ(spmv(eye, x), x);
  std::mt19937_64 rng(3);
  const auto a = csr_from_coo(testing::random_triplets(rng, 5, 0.5, false), 5, 5);
  EXPECT_EQ(spmv(a, Vector(5, 0.0)), Vector(5, 0.0));
}

TEST(Spmv, MatchesDenseMultiply) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = csr_from_coo(testing::random_triplets(rng, 10, 0.4, false), 10, 10);
    const auto x = testing::random_vector(rng, 10);
    const auto y = spmv(a, x);
    const auto ref = testing::dense_apply(a.to_dense(), x);
    EXPECT_LE(testing::max_abs_diff(y, ref), 1e-14 * std::max(1.0, testing::vec_norm(ref)));
  }
}

TEST(Spmv, RejectsDimensionMismatch) {
  const auto a = csr_from_coo(std::vector<Triplet>{{0, 0, 1.0}}, 2, 3);
  EXPECT_THROW(spmv(a, Vector(2, 1.0)), Error);
}

TEST(Spmv, LinearityProperty) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 5 + rng() % 30;
    const auto a = csr_from_coo(testing::random_triplets(rng, n, 0.2, false), n, n);
    const auto x = testing::random_vector(rng, n), y = testing::random_vector(rng, n);
    const double alpha = testing::uniform(rng, -3, 3), beta = testing::uniform(rng, -3, 3);
    Vector comb(n);
    for (Index i = 0; i < n; ++i)
      comb[i] = alpha * x[i] + beta * y[i];
    const auto lhs = spmv(a, comb);
    const auto ax = spmv(a, x), ay = spmv(a, y);
    Vector rhs(n);
    for (Index i = 0; i < n; ++i)
      rhs[i] = alpha * ax[i] + beta * ay[i];
    EXPECT_LE(testing::max_abs_diff(lhs, rhs), 1e-13 * std::max(1.0, testing::vec_norm(rhs)));
  }
}

TEST(Spmv, SymmetricBilinearProperty) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 5 + rng() % 30;
    const auto a = csr_from_coo(testing::random_triplets(rng, n, 0.3, true), n, n);
    const auto x = testing::random_vector(rng, n), y = testing::random_vector(rng, n);
    const double xay = dot(x, spmv(a, y));
    const double yax = dot(y, spmv(a, x));
    EXPECT_NEAR(xay, yax, 1e-13 * std::max(1.0, std::abs(xay)));
  }
}

TEST(OneNorm, KnownValues) {
  EXPECT_EQ(one_norm(csr_from_coo(std::vector<Triplet>{}, 4, 4)), 0.0);
  const auto l = csr_from_coo(
      std::vector<Triplet>{{0, 0, 1.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 1.0}}, 2, 2);
  EXPECT_EQ(one_norm(l), 2.0);
}

TEST(OneNorm, MatchesDenseColumnSums) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = csr_from_coo(testing::random_triplets(rng, 6, 0.5, false), 6, 6);
    const auto d = a.to_dense();
    double best = 0.0;
    for (Index j = 0; j < 6; ++j) {
      double s = 0.0;
      for (Index i = 0; i < 6; ++i)
        s += std::abs(d(i, j));
      best = std::max(best, s);
    }
    EXPECT_DOUBLE_EQ(one_norm(a), best);
  }
}

} // namespace
} // namespace fairsc
