#include "helpers.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace s3c;

namespace {

double brute_force_accuracy(const std::vector<int>& est, const std::vector<int>& truth, int n_est, int n_true) {
  // Pad to a square problem and try every bijection.
  const int n = std::max(n_est, n_true);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  int best = 0;
  do {
    int hits = 0;
    for (std::size_t i = 0; i < est.size(); ++i) hits += perm[static_cast<std::size_t>(est[i])] == truth[i] ? 1 : 0;
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return 100.0 * best / static_cast<double>(est.size());
}

Matrix complete(Index m) { return Matrix::Ones(m, m) - Matrix::Identity(m, m); }

}  // namespace

TEST(Accuracy, IdenticalIsHundred) {
  const GroundTruthLabels t({0, 1, 2, 1, 0}, 3);
  EXPECT_DOUBLE_EQ(clustering_accuracy(t.labels(), t), 100.0);
}

TEST(Accuracy, RenamedIsHundred) {
  const GroundTruthLabels t({0, 1, 2, 1, 0, 2}, 3);
  EXPECT_DOUBLE_EQ(clustering_accuracy({2, 0, 1, 0, 2, 1}, t), 100.0);
  EXPECT_DOUBLE_EQ(clustering_accuracy({7, 4, 9, 4, 7, 9}, t), 100.0);
}

TEST(Accuracy, MatchesFactorialOracle) {
  Rng rng(700, Stream::TestData);
  for (int trial = 0; trial < 200; ++trial) {
    const int n_true = 1 + static_cast<int>(rng.below(6));
    const int n_est = 1 + static_cast<int>(rng.below(6));
    const int N = n_true + static_cast<int>(rng.below(30));
    std::vector<int> truth(static_cast<std::size_t>(N)), est(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
      truth[static_cast<std::size_t>(i)] = i < n_true ? i : static_cast<int>(rng.below(static_cast<std::uint64_t>(n_true)));
      est[static_cast<std::size_t>(i)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_est)));
    }
    const auto dense_est = GroundTruthLabels::from_ids(est);
    const double oracle = brute_force_accuracy(dense_est.labels(), truth, dense_est.clusters(), n_true);
    EXPECT_DOUBLE_EQ(clustering_accuracy(est, GroundTruthLabels(truth, n_true)), oracle) << "trial " << trial;
  }
}

TEST(Accuracy, SymmetricUnderRelabeling) {
  const GroundTruthLabels t({0, 0, 1, 1, 2, 2, 2}, 3);
  const std::vector<int> est{1, 0, 0, 2, 2, 2, 1};
  const std::vector<int> t_renamed{2, 2, 0, 0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(clustering_accuracy(est, t), clustering_accuracy(est, GroundTruthLabels(t_renamed, 3)));
}

TEST(Accuracy, LengthMismatch) {
  try {
    clustering_accuracy({0, 1}, GroundTruthLabels({0, 1, 1}, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
  }
}

TEST(Hungarian, RectangularBothWays) {
  Matrix c(2, 3);
  c << 4, 1, 3,  //
      2, 0, 5;
  const auto a = hungarian_min_cost(c);
  EXPECT_EQ(c(0, a[0]) + c(1, a[1]), 3.0);  // (0,1)+(1,0)
  const auto b = hungarian_min_cost(c.transpose());
  int assigned = 0;
  for (auto v : b) assigned += v >= 0 ? 1 : 0;
  EXPECT_EQ(assigned, 2);
}

TEST(Sre, SubspacePreservingIsZero) {
  const GroundTruthLabels t({0, 0, 0, 1, 1}, 2);
  Matrix c = Matrix::Zero(5, 5);
  c(1, 0) = 0.5;
  c(2, 0) = -0.2;
  c(0, 1) = 1;
  c(0, 2) = 3;
  c(4, 3) = -1;
  c(3, 4) = 2;
  EXPECT_EQ(subspace_preserving_error(c.sparseView(), t), 0.0);
}

TEST(Sre, AllWrongIsHundred) {
  const GroundTruthLabels t({0, 0, 1, 1}, 2);
  Matrix c = Matrix::Zero(4, 4);
  c(2, 0) = c(3, 1) = c(0, 2) = c(1, 3) = 1.0;
  EXPECT_DOUBLE_EQ(subspace_preserving_error(c.sparseView(), t), 100.0);
}

TEST(Sre, ThreeQuartersInClusterGivesTwentyFive) {
  const GroundTruthLabels t({0, 0, 1, 1}, 2);
  Matrix c = Matrix::Zero(4, 4);
  for (Index j = 0; j < 4; ++j) {
    const Index same = j ^ 1, other = (j + 2) % 4;
    c(same, j) = 0.75;
    c(other, j) = -0.25;
  }
  EXPECT_DOUBLE_EQ(subspace_preserving_error(c.sparseView(), t), 25.0);
}

TEST(Sre, ZeroColumnCountsFully) {
  const GroundTruthLabels t({0, 0}, 1);
  Matrix c = Matrix::Zero(2, 2);
  c(1, 0) = 1.0;
  EXPECT_DOUBLE_EQ(subspace_preserving_error(c.sparseView(), t), 50.0);
}

TEST(Sre, ColumnScaleInvariant) {
  const auto s = generate_synthetic({3, 4, 9, 20, 701});
  SparseMatrix C = sscomp_matrix(s.data, 5);
  const double e = subspace_preserving_error(C, s.labels);
  for (Index j = 0; j < C.cols(); ++j) C.col(j) *= 1.0 + static_cast<double>(j);
  EXPECT_NEAR(subspace_preserving_error(C, s.labels), e, 1e-10);
}

TEST(Lambda2, DisconnectedClusterIsZero) {
  Matrix w = Matrix::Zero(6, 6);
  w.topLeftCorner(3, 3) = complete(3);
  w(3, 4) = w(4, 3) = 1.0;  // cluster 1 = {3,4,5}, node 5 isolated
  const auto l2 = per_cluster_lambda2(AffinityMatrix::from_dense(w), GroundTruthLabels({0, 0, 0, 1, 1, 1}, 2));
  EXPECT_NEAR(l2[0], 1.5, 1e-12);
  EXPECT_NEAR(l2[1], 0.0, 1e-12);
}

TEST(Lambda2, CompleteGraphValue) {
  for (Index m = 2; m <= 8; ++m) {
    const auto l2 = per_cluster_lambda2(AffinityMatrix::from_dense(complete(m)),
                                        GroundTruthLabels(std::vector<int>(static_cast<std::size_t>(m), 0), 1));
    EXPECT_NEAR(l2[0], static_cast<double>(m) / static_cast<double>(m - 1), 1e-12);
  }
}

TEST(Lambda2, AllZeroClusterIsZero) {
  Matrix w = Matrix::Zero(5, 5);
  w(0, 1) = w(1, 0) = 1.0;
  const auto l2 = per_cluster_lambda2(AffinityMatrix::from_dense(w), GroundTruthLabels({0, 0, 1, 1, 1}, 2));
  EXPECT_EQ(l2[1], 0.0);
}

TEST(Lambda2, MatchesDenseOracleOnRandomGraphs) {
  Rng rng(702, Stream::TestData);
  for (int trial = 0; trial < 10; ++trial) {
    const Index N = 20 + static_cast<Index>(rng.below(31));
    Matrix w = Matrix::Zero(N, N);
    for (Index i = 0; i < N; ++i)
      for (Index j = i + 1; j < N; ++j)
        if (rng.uniform() < 0.2) w(i, j) = w(j, i) = rng.uniform();
    std::vector<int> lab(static_cast<std::size_t>(N));
    for (Index i = 0; i < N; ++i) lab[static_cast<std::size_t>(i)] = static_cast<int>(i % 3);
    const GroundTruthLabels truth(lab, 3);
    const auto A = AffinityMatrix::from_dense(w);
    const auto l2 = per_cluster_lambda2(A, truth);
    for (int c = 0; c < 3; ++c) {
      const auto nodes = truth.members(c);
      const Index m = static_cast<Index>(nodes.size());
      Matrix sub(m, m);
      for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b) sub(a, b) = w(nodes[static_cast<std::size_t>(a)], nodes[static_cast<std::size_t>(b)]);
      // Independent Laplacian construction.
      const Vector d = sub.rowwise().sum();
      Vector dinv(m);
      for (Index a = 0; a < m; ++a) dinv(a) = d(a) > 0 ? 1.0 / std::sqrt(d(a)) : 0.0;
      const Matrix L = dinv.asDiagonal() * (Matrix(d.asDiagonal()) - sub) * dinv.asDiagonal();
      EXPECT_NEAR(l2[static_cast<std::size_t>(c)], test::dense_eigenvalues(L)(1), 1e-8);
    }
  }
}

TEST(Lambda2, SingletonFlaggedAsZero) {
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = 1.0;
  std::vector<char> single;
  const auto l2 = per_cluster_lambda2(AffinityMatrix::from_dense(w), GroundTruthLabels({0, 0, 1}, 2), &single);
  EXPECT_EQ(l2[1], 0.0);
  EXPECT_EQ(single, (std::vector<char>{0, 1}));
}

TEST(Connectivity, MinVersusMean) {
  Matrix w = Matrix::Zero(6, 6);
  w.topLeftCorner(3, 3) = complete(3);
  w(3, 4) = w(4, 3) = 1.0;
  const auto A = AffinityMatrix::from_dense(w);
  const GroundTruthLabels t({0, 0, 0, 1, 1, 1}, 2);
  EXPECT_EQ(connectivity_min(A, t), 0.0);
  EXPECT_GT(connectivity_mean(A, t), 0.0);
}

TEST(Connectivity, UniformCompleteClusters) {
  Matrix w = Matrix::Zero(8, 8);
  w.topLeftCorner(4, 4) = complete(4);
  w.bottomRightCorner(4, 4) = complete(4);
  w(0, 4) = w(4, 0) = 0.3;  // cross edge does not enter induced subgraphs
  const auto A = AffinityMatrix::from_dense(w);
  const GroundTruthLabels t({0, 0, 0, 0, 1, 1, 1, 1}, 2);
  EXPECT_NEAR(connectivity_min(A, t), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(connectivity_mean(A, t), 4.0 / 3.0, 1e-12);
}

TEST(Connectivity, ScaleInvariantAndOrdered) {
  const auto s = generate_synthetic({4, 5, 9, 30, 703});
  const auto A = affinity_from_coefficients(sscomp_matrix(s.data, 5));
  const auto r = connectivity(A, s.labels);
  EXPECT_LE(r.min, r.mean);
  const auto r2 = connectivity(A.scaled(3.0), s.labels);
  EXPECT_NEAR(r.min, r2.min, 1e-10);
  EXPECT_NEAR(r.mean, r2.mean, 1e-10);
}
