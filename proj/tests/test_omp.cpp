#include "helpers.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace s3c;

namespace {

// Independent least-squares oracle for the coefficients on a fixed support.
Vector lstsq(const Matrix& X, const std::vector<Index>& S, Index j) {
  Matrix A(X.rows(), static_cast<Index>(S.size()));
  for (std::size_t k = 0; k < S.size(); ++k) A.col(static_cast<Index>(k)) = X.col(S[k]);
  return A.colPivHouseholderQr().solve(Vector(X.col(j)));
}

}  // namespace

TEST(Omp, ExactOneAtomMatch) {
  Matrix m = test::gaussian(6, 10, 31);
  m.col(7) = m.col(2);
  const auto X = normalize_columns(m);
  OmpTrace tr;
  const auto c = omp_solve(X, 7, 1, 1e-6, &tr);
  ASSERT_EQ(c.support, std::vector<Index>{2});
  EXPECT_NEAR(c.values(0), 1.0, 1e-12);
  EXPECT_NEAR(tr.residual_norms.back(), 0.0, 1e-12);
}

TEST(Omp, SupportSizeAndStrictDecrease) {
  const auto X = test::random_data(9, 60, 32);
  for (Index j : {0, 17, 59}) {
    OmpTrace tr;
    const auto c = omp_solve(X, j, 5, 1e-6, &tr);
    EXPECT_EQ(c.nnz(), 5);
    for (std::size_t k = 1; k < tr.residual_norms.size(); ++k)
      EXPECT_LT(tr.residual_norms[k], tr.residual_norms[k - 1]);
  }
}

TEST(Omp, ResidualOrthogonalToSupportAndMatchesLeastSquares) {
  const auto X = test::random_data(9, 80, 33);
  for (Index j = 0; j < 80; j += 9) {
    OmpTrace tr;
    const auto c = omp_solve(X, j, 5, 1e-6, &tr);
    for (std::size_t k = 0; k < tr.residuals.size(); ++k)
      for (std::size_t a = 0; a <= k; ++a) EXPECT_LE(std::abs(X.col(c.support[a]).dot(tr.residuals[k])), 1e-8);
    EXPECT_LE((c.values - lstsq(X.matrix(), c.support, j)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Omp, SelfIndexExcludedAndNoRepeats) {
  const auto X = test::random_data(9, 40, 34);
  for (Index j = 0; j < 40; ++j) {
    const auto c = omp_solve(X, j, 8, 0.0);
    EXPECT_FALSE(c.contains(j));
    EXPECT_EQ(std::set<Index>(c.support.begin(), c.support.end()).size(), c.support.size());
  }
}

TEST(Omp, EarlyStopOnTolerance) {
  // x_0 lies in the span of x_1, x_2: two atoms suffice.
  Matrix m = test::gaussian(6, 8, 35);
  m.col(0) = 0.6 * m.col(1).normalized() + 0.8 * m.col(2).normalized();
  m.col(1).normalize();
  m.col(2).normalize();
  const auto X = normalize_columns(m);
  const auto c = omp_solve(X, 0, 5, 1e-9);
  EXPECT_EQ(c.nnz(), 2);
}

TEST(Omp, TieGoesToLowestIndex) {
  // Columns 1 and 3 are identical, so their correlations tie exactly.
  Matrix m(3, 4);
  m << 1, 1, 0, 1,  //
      0.2, 0, 1, 0,  //
      0, 0, 0, 0;
  const auto X = normalize_columns(m);
  const auto c = omp_solve(X, 0, 1);
  EXPECT_EQ(c.support.front(), 1);
}

TEST(Omp, DuplicateAtomsDoNotAbort) {
  Matrix m = test::gaussian(4, 6, 36);
  m.col(4) = m.col(3);
  m.col(5) = m.col(3);
  const auto X = normalize_columns(m);
  EXPECT_NO_THROW(sscomp_matrix(X, 3));
}

TEST(Omp, InvalidArguments) {
  const auto X = test::random_data(4, 5, 37);
  EXPECT_THROW(omp_solve(X, 0, 5), Error);
  EXPECT_THROW(omp_solve(X, 0, 0), Error);
  EXPECT_THROW(omp_solve(X, 9, 1), Error);
}

TEST(Sscomp, OrthogonalPairs) {
  Matrix m(2, 4);
  m << 1, -1, 0, 0,  //
      0, 0, 1, 2;
  const auto C = Matrix(sscomp_matrix(normalize_columns(m), 1));
  EXPECT_NEAR(C(1, 0), -1.0, 1e-12);
  EXPECT_NEAR(C(0, 1), -1.0, 1e-12);
  EXPECT_NEAR(C(3, 2), 1.0, 1e-12);
  EXPECT_NEAR(C(2, 3), 1.0, 1e-12);
  EXPECT_EQ((C.array() != 0).count(), 4);
}

TEST(Sscomp, ZeroDiagonalAndSparsityBound) {
  const auto X = test::random_data(9, 100, 38);
  const auto C = sscomp_matrix(X, 5);
  EXPECT_LE(C.nonZeros(), 5 * 100);
  for (Index j = 0; j < 100; ++j) EXPECT_EQ(C.coeff(j, j), 0.0);
}

TEST(Sscomp, ParallelEqualsSequential) {
  const auto X = test::random_data(9, 120, 39);
  const Matrix a = sscomp_matrix(X, 5, 1e-6, 1);
  const Matrix b = sscomp_matrix(X, 5, 1e-6, 4);
  EXPECT_TRUE(a == b);
}

TEST(Sscomp, SyntheticErrorIsSmallButNonzero) {
  const auto s = generate_synthetic({5, 6, 9, 320, 0});
  const double e = subspace_preserving_error(sscomp_matrix(s.data, 5), s.labels);
  EXPECT_GT(e, 0.0);
  EXPECT_LT(e, 40.0);
}
