#include "fairsc/fair_operator.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace fairsc {
namespace {

using testing::dense_multiply;
using testing::max_abs_diff;
using testing::vec_norm;

struct Instance {
  WeightedGraph graph;
  LaplacianPair lap;
  FairnessConstraint fc;
};

Instance make_instance(std::mt19937_64 &rng, Index n, int h, double density = 0.15) {
  Instance inst;
  inst.graph = testing::random_graph(rng, n, density);
  inst.lap = build_laplacians(inst.graph);
  inst.fc = build_fairness_constraint(testing::random_partition(rng, n, h), inst.lap);
  return inst;
}

DenseMatrix dense_operator(const ShiftedProjectedOperator &op) {
  const Index n = op.n();
  DenseMatrix a(n, n);
  for (Index j = 0; j < n; ++j) {
    Vector e(n, 0.0);
    e[j] = 1.0;
    const auto col = op(e);
    std::copy(col.begin(), col.end(), a.col(j).begin());
  }
  return a;
}

TEST(Projector, FixesRangeAndAnnihilatesConstraints) {
  std::mt19937_64 rng(41);
  const auto inst = make_instance(rng, 40, 4);
  const Projector p(inst.fc);
  const auto w = testing::random_vector(rng, 40);
  const auto pw = p(w);
  EXPECT_LE(max_abs_diff(p(pw), pw), 1e-13 * vec_norm(pw));

  const auto y = testing::random_vector(rng, 3);
  const auto cy = multiply(inst.fc.c, y);
  EXPECT_LE(vec_norm(p(cy)), 1e-12 * vec_norm(cy));
}

TEST(Projector, MatchesDenseProjector) {
  std::mt19937_64 rng(42);
  const auto inst = make_instance(rng, 40, 4);
  const Projector p(inst.fc);
  const auto dense = testing::dense_projector(inst.fc.c);
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = testing::random_vector(rng, 40);
    const auto ref = testing::dense_apply(dense, w);
    EXPECT_LE(max_abs_diff(p(w), ref), 1e-11 * vec_norm(ref));
  }
}

TEST(Projector, IdempotentAndOrthogonalToConstraints) {
  std::mt19937_64 rng(43);
  const auto inst = make_instance(rng, 60, 5);
  const Projector p(inst.fc);
  const double cnorm = frobenius_norm(inst.fc.c);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = testing::random_vector(rng, 60);
    const auto pw = p(w);
    EXPECT_LE(max_abs_diff(p(pw), pw), 1e-12 * vec_norm(w));
    const auto ctpw = multiply_transposed(inst.fc.c, pw);
    EXPECT_LE(vec_norm(ctpw), 1e-10 * cnorm * vec_norm(w));
  }
}

TEST(Projector, SingleGroupIsIdentity) {
  std::mt19937_64 rng(44);
  const auto inst = make_instance(rng, 12, 1);
  const auto w = testing::random_vector(rng, 12);
  EXPECT_EQ(Projector(inst.fc)(w), w);
}

TEST(ShiftedOperator, IdentityLaplacianFixesFeasibleVectors) {
  std::mt19937_64 rng(45);
  const auto inst = make_instance(rng, 20, 3);
  std::vector<Triplet> t;
  for (Index i = 0; i < 20; ++i)
    t.push_back({i, i, 1.0});
  const auto eye = csr_from_coo(t, 20, 20);
  const ShiftedProjectedOperator op(eye, inst.fc, 0.0);
  const auto w = Projector(inst.fc)(testing::random_vector(rng, 20));
  EXPECT_LE(max_abs_diff(op(w), w), 1e-13 * vec_norm(w));
}

TEST(ShiftedOperator, ConstraintRangeIsShiftEigenspace) {
  std::mt19937_64 rng(46);
  const auto inst = make_instance(rng, 30, 4);
  const double sigma = 2.5;
  const ShiftedProjectedOperator op(inst.lap.normalized, inst.fc, sigma);
  const auto cy = multiply(inst.fc.c, testing::random_vector(rng, 3));
  const auto out = op(cy);
  Vector expected = cy;
  scale(sigma, expected);
  EXPECT_LE(max_abs_diff(out, expected), 1e-12 * vec_norm(expected));
}

TEST(ShiftedOperator, MatchesDenseOperator) {
  std::mt19937_64 rng(47);
  const auto inst = make_instance(rng, 50, 3);
  const double sigma = 2.0;
  const ShiftedProjectedOperator op(inst.lap.normalized, inst.fc, sigma);
  const auto p = testing::dense_projector(inst.fc.c);
  DenseMatrix inner = inst.lap.normalized.to_dense();
  for (Index i = 0; i < 50; ++i)
    inner(i, i) -= sigma;
  DenseMatrix ref = dense_multiply(p, dense_multiply(inner, p));
  for (Index i = 0; i < 50; ++i)
    ref(i, i) += sigma;
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = testing::random_vector(rng, 50);
    const auto expected = testing::dense_apply(ref, w);
    EXPECT_LE(max_abs_diff(op(w), expected), 1e-11 * vec_norm(expected));
  }
}

TEST(ShiftedOperator, SymmetricPositiveSemidefinite) {
  std::mt19937_64 rng(48);
  const auto inst = make_instance(rng, 45, 4);
  const ShiftedProjectedOperator op(inst.lap.normalized, inst.fc, choose_shift(inst.lap));
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = testing::random_vector(rng, 45), y = testing::random_vector(rng, 45);
    const double xay = dot(x, op(y)), yax = dot(y, op(x));
    EXPECT_NEAR(xay, yax, 1e-12 * std::max(1.0, std::abs(xay)));
    EXPECT_GE(dot(x, op(x)), -1e-10 * dot(x, x));
  }
}

TEST(ChooseShift, SingleEdgeAndSpectralBound) {
  const auto lap = build_laplacians(
      WeightedGraph(csr_from_coo(std::vector<Triplet>{{0, 1, 1.0}, {1, 0, 1.0}}, 2, 2)));
  EXPECT_EQ(choose_shift(lap), 2.0);

  std::mt19937_64 rng(49);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 5 + rng() % 45;
    const auto inst = make_instance(rng, n, 1 + static_cast<int>(rng() % 4));
    const double sigma = choose_shift(inst.lap);
    const auto eig = symmetric_eig_dense(inst.lap.normalized.to_dense());
    EXPECT_GE(sigma, eig.values.back() - 1e-12);

    // The shift clears the k-th eigenvalue of the reduced problem.
    if (inst.fc.constraints() > 0) {
      const auto v = qr_tall(inst.fc.c).complement();
      const auto lv = dense_multiply(v.transpose(), dense_multiply(inst.lap.normalized.to_dense(), v));
      const auto red = symmetric_eig_dense(lv);
      const Index k = std::min<Index>(5, red.values.size());
      EXPECT_GT(sigma, red.values[k - 1]);
    }
  }
}

// Dense spectrum of the deflated operator is spec(V^T L_n V) plus sigma
// with multiplicity h - 1; wanted eigenvectors are feasible and map to
// eigenvectors of the reduced matrix.
TEST(ShiftedOperator, DeflationSpectrumAndEigenvectorCorrespondence) {
  std::mt19937_64 rng(50);
  for (int trial = 0; trial < 12; ++trial) {
    const Index n = 10 + rng() % 51;
    const int h = 2 + static_cast<int>(rng() % 4);
    const auto inst = make_instance(rng, n, h);
    const double sigma = choose_shift(inst.lap);
    const ShiftedProjectedOperator op(inst.lap.normalized, inst.fc, sigma);
    const auto dense = dense_operator(op);
    const auto spec = symmetric_eig_dense(dense);

    const auto v = qr_tall(inst.fc.c).complement();
    const auto lv = dense_multiply(v.transpose(), dense_multiply(inst.lap.normalized.to_dense(), v));
    const auto red = symmetric_eig_dense(lv);
    Vector expected = red.values;
    for (int s = 0; s + 1 < h; ++s)
      expected.push_back(sigma);
    std::sort(expected.begin(), expected.end());
    ASSERT_EQ(expected.size(), spec.values.size());
    EXPECT_LE(max_abs_diff(expected, spec.values), 1e-9);

    const Index p = inst.fc.constraints();
    for (Index j = 0; j < n; ++j) {
      const double lambda = spec.values[j];
      if (!(lambda < sigma - 1e-6))
        continue;
      const auto x = spec.vectors.col(j);
      const Vector xv(x.begin(), x.end());
      EXPECT_LE(vec_norm(multiply_transposed(inst.fc.c, xv)), 1e-8 * vec_norm(xv));
      const auto y = multiply_transposed(v, xv);
      auto r = testing::dense_apply(lv, y);
      axpy(-lambda, y, r);
      EXPECT_LE(vec_norm(r), 1e-8);
    }
    (void)p;
  }
}

// Wanted eigenvectors do not move when the constraint eigenspace is shifted
// from 0 to sigma.
TEST(ShiftedOperator, HotellingShiftKeepsWantedEigenvectors) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 6; ++trial) {
    const Index n = 30 + rng() % 20;
    const int h = 3;
    const Index k = 4;
    const auto inst = make_instance(rng, n, h, 0.3);
    const double sigma = choose_shift(inst.lap);
    const auto unshifted = symmetric_eig_dense(
        dense_operator(ShiftedProjectedOperator(inst.lap.normalized, inst.fc, 0.0)));
    const auto shifted = symmetric_eig_dense(
        dense_operator(ShiftedProjectedOperator(inst.lap.normalized, inst.fc, sigma)));

    // Unshifted: h - 1 structural zeros plus the trivial zero of the graph.
    // Compare the eigenvectors for lambda_2..lambda_k of the reduced problem.
    const Index skip = static_cast<Index>(h);
    ASSERT_GT(unshifted.values[skip], 1e-3);
    DenseMatrix a(n, k - 1), b(n, k - 1);
    for (Index j = 0; j + 1 < k; ++j) {
      std::copy(unshifted.vectors.col(skip + j).begin(), unshifted.vectors.col(skip + j).end(),
                a.col(j).begin());
      std::copy(shifted.vectors.col(1 + j).begin(), shifted.vectors.col(1 + j).end(),
                b.col(j).begin());
      EXPECT_NEAR(unshifted.values[skip + j], shifted.values[1 + j], 1e-10);
    }
    // sin of the largest principal angle is bounded by ||B - A A^T B||_F.
    const auto proj = dense_multiply(a, dense_multiply(a.transpose(), b));
    DenseMatrix diff = b;
    for (Index j = 0; j < b.cols(); ++j)
      for (Index i = 0; i < n; ++i)
        diff(i, j) -= proj(i, j);
    EXPECT_LE(frobenius_norm(diff), 1e-8);
  }
}

} // namespace
} // namespace fairsc
