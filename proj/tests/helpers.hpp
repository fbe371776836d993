#pragma once

#include "s3c/s3c.hpp"

#include <cstdint>

namespace s3c::test {

inline Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed, Stream::TestData);
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
  return m;
}

inline DataMatrix random_data(Index D, Index N, std::uint64_t seed) { return normalize_columns(gaussian(D, N, seed)); }

/// Random sparse coefficient vector over N entries with `nnz` nonzeros,
/// never touching index `skip`.
inline SparseCoefVector random_sparse(Index N, Index nnz, Index skip, std::uint64_t seed) {
  Rng rng(seed, Stream::TestData, 1);
  Vector v = Vector::Zero(N);
  Index placed = 0;
  while (placed < nnz) {
    const auto i = static_cast<Index>(rng.below(static_cast<std::uint64_t>(N)));
    if (i == skip || v(i) != 0.0) continue;
    v(i) = rng.normal();
    ++placed;
  }
  return SparseCoefVector::from_dense(v);
}

/// Dense symmetric eigenvalues, ascending.
inline Vector dense_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return es.eigenvalues();
}

}  // namespace s3c::test
