#pragma once

#include "s3c/common.hpp"
#include "s3c/eigensolver.hpp"
#include "s3c/kmeans.hpp"
#include "s3c/omp.hpp"

#include <cmath>
#include <vector>

namespace s3c {

/// Symmetric, nonnegative, zero-diagonal sparse graph weights.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;

  /// Takes ownership of W. Throws InvalidArgument if W is not square,
  /// exactly symmetric, nonnegative with zero diagonal.
  explicit AffinityMatrix(SparseMatrix w) : w_(std::move(w)) {
    if (w_.rows() != w_.cols()) throw Error(ErrorKind::ShapeMismatch, "affinity must be square");
    w_.prune(0.0);
    w_.makeCompressed();
    for (Index c = 0; c < w_.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(w_, c); it; ++it) {
        if (it.value() < 0 || !std::isfinite(it.value()))
          throw Error(ErrorKind::InvalidArgument, "affinity entries must be finite and >= 0");
        if (it.row() == it.col()) throw Error(ErrorKind::InvalidArgument, "affinity diagonal must be zero");
        if (w_.coeff(it.col(), it.row()) != it.value())
          throw Error(ErrorKind::InvalidArgument, "affinity must be exactly symmetric");
      }
  }

  static AffinityMatrix from_dense(const Matrix& w) { return AffinityMatrix(w.sparseView()); }

  const SparseMatrix& matrix() const noexcept { return w_; }
  Index size() const noexcept { return w_.rows(); }

  Vector degrees() const {
    Vector d = Vector::Zero(w_.rows());
    for (Index c = 0; c < w_.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(w_, c); it; ++it) d(c) += it.value();
    return d;
  }

  /// Induced subgraph on `nodes` (in the given order).
  AffinityMatrix subgraph(const std::vector<Index>& nodes) const {
    std::vector<Index> pos(static_cast<std::size_t>(w_.rows()), -1);
    for (std::size_t k = 0; k < nodes.size(); ++k) pos[static_cast<std::size_t>(nodes[k])] = static_cast<Index>(k);
    std::vector<Triplet> trips;
    for (std::size_t k = 0; k < nodes.size(); ++k)
      for (SparseMatrix::InnerIterator it(w_, nodes[k]); it; ++it) {
        const Index r = pos[static_cast<std::size_t>(it.row())];
        if (r >= 0) trips.emplace_back(r, static_cast<Index>(k), it.value());
      }
    SparseMatrix s(static_cast<Index>(nodes.size()), static_cast<Index>(nodes.size()));
    s.setFromTriplets(trips.begin(), trips.end());
    AffinityMatrix out;
    out.w_ = std::move(s);
    out.w_.makeCompressed();
    return out;
  }

  AffinityMatrix scaled(double alpha) const {
    AffinityMatrix out;
    out.w_ = w_ * alpha;
    return out;
  }

 private:
  SparseMatrix w_;
};

/// a_ij = (|c_ij| + |c_ji|) / 2, diagonal dropped.
inline AffinityMatrix affinity_from_coefficients(const SelfExpressionMatrix& C) {
  if (C.rows() != C.cols()) throw Error(ErrorKind::ShapeMismatch, "coefficient matrix must be square");
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(2 * C.nonZeros()));
  for (Index c = 0; c < C.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(C, c); it; ++it) {
      if (it.row() == it.col() || it.value() == 0.0) continue;
      const double h = 0.5 * std::abs(it.value());
      trips.emplace_back(it.row(), it.col(), h);
      trips.emplace_back(it.col(), it.row(), h);
    }
  // Each entry receives at most the two halves h_ij and h_ji; their sum is
  // commutative, so the result is exactly symmetric.
  SparseMatrix a(C.rows(), C.cols());
  a.setFromTriplets(trips.begin(), trips.end());
  return AffinityMatrix(std::move(a));
}

/// L = I - D^{-1/2} W D^{-1/2}. Zero-degree vertices get D^{-1/2} = 0, so
/// their row of L is the unit row.
inline SparseMatrix normalized_laplacian(const AffinityMatrix& A) {
  const SparseMatrix& W = A.matrix();
  const Index N = W.rows();
  const Vector d = A.degrees();
  Vector dis(N);
  for (Index i = 0; i < N; ++i) dis(i) = d(i) > 0.0 ? 1.0 / std::sqrt(d(i)) : 0.0;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(W.nonZeros() + N));
  // D^-1/2 (D - W) D^-1/2: an isolated node gets an all-zero row, so every
  // connected component (isolated nodes included) adds a zero eigenvalue.
  for (Index i = 0; i < N; ++i) trips.emplace_back(i, i, d(i) > 0.0 ? 1.0 : 0.0);
  for (Index c = 0; c < W.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(W, c); it; ++it) {
      const Index r = it.row();
      // Same operand order for (r, c) and (c, r) keeps L exactly symmetric.
      const double v = r < c ? dis(r) * it.value() * dis(c) : dis(c) * it.value() * dis(r);
      trips.emplace_back(r, c, -v);
    }
  SparseMatrix L(N, N);
  L.setFromTriplets(trips.begin(), trips.end());
  L.makeCompressed();
  return L;
}

struct SpectralOptions {
  Index eigenvectors = 0;  // k_eig; 0 means "same as cluster count"
  std::uint64_t seed = 0;
  KMeansOptions kmeans{};
  EigenSolverOptions eigen{};
};

struct SpectralResult {
  std::vector<int> labels;  // 0-based
  Vector eigenvalues;       // the k_eig smallest
  Matrix embedding;         // N x k_eig, rows normalized
  Index empty_clusters = 0; // clusters in 0..n-1 that received no point
};

/// Normalized-cut spectral clustering: k_eig smallest eigenvectors of the
/// symmetric normalized Laplacian, rows scaled to unit length (rows below
/// 1e-12 stay zero), then k-means into n groups.
inline SpectralResult spectral_cluster(const AffinityMatrix& A, Index n, const SpectralOptions& opt = {}) {
  const Index k = opt.eigenvectors > 0 ? opt.eigenvectors : n;
  if (n < 1 || n > A.size()) throw Error(ErrorKind::InvalidArgument, "cluster count must satisfy 1 <= n <= N");
  if (k < n) throw Error(ErrorKind::InvalidArgument, "k_eig must be >= n");
  const auto eig = smallest_eigenpairs(normalized_laplacian(A), k, opt.eigen);
  SpectralResult out;
  out.eigenvalues = eig.values;
  out.embedding = eig.vectors;
  for (Index i = 0; i < out.embedding.rows(); ++i) {
    const double nrm = out.embedding.row(i).norm();
    if (nrm < 1e-12)
      out.embedding.row(i).setZero();
    else
      out.embedding.row(i) /= nrm;
  }
  out.labels = kmeans(out.embedding, n, opt.seed, opt.kmeans).labels;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int l : out.labels) used[static_cast<std::size_t>(l)] = 1;
  for (char u : used) out.empty_clusters += u ? 0 : 1;
  return out;
}

/// The k smallest eigenvalues of the whole-graph normalized Laplacian.
inline Vector eigen_gap_report(const AffinityMatrix& A, Index k, const EigenSolverOptions& opt = {}) {
  return smallest_eigenpairs(normalized_laplacian(A), k, opt).values;
}

}  // namespace s3c
