#pragma once

#include "s3c/common.hpp"
#include "s3c/rng.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace s3c {

/// k smallest eigenpairs, eigenvalues ascending, eigenvectors as columns.
struct EigenPairs {
  Vector values;
  Matrix vectors;
  Vector residuals;  // ||L v - lambda v|| per pair
};

struct EigenSolverOptions {
  /// Problems up to this size use a dense symmetric decomposition.
  Index dense_threshold = 400;
  double tolerance = 1e-6;
  Index max_restarts = 300;
  /// Extra block vectors beyond k carried by the Krylov solver.
  Index oversampling = 8;
  std::uint64_t seed = 0x5eed;
};

namespace detail {

/// Flips each eigenvector so its largest-magnitude entry is positive.
inline void canonicalize_signs(Matrix& v) {
  for (Index c = 0; c < v.cols(); ++c) {
    Index arg = 0;
    v.col(c).cwiseAbs().maxCoeff(&arg);
    if (v(arg, c) < 0) v.col(c) = -v.col(c);
  }
}

inline Vector residual_norms(const SparseMatrix& L, const Vector& vals, const Matrix& vecs) {
  Vector r(vals.size());
  const Matrix lv = L * vecs;
  for (Index i = 0; i < vals.size(); ++i) r(i) = (lv.col(i) - vals(i) * vecs.col(i)).norm();
  return r;
}

inline EigenPairs dense_smallest(const SparseMatrix& L, Index k) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(L), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "dense eigensolver failed");
  EigenPairs out;
  out.values = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
  canonicalize_signs(out.vectors);
  out.residuals = residual_norms(L, out.values, out.vectors);
  return out;
}

/// Orthonormalizes the columns of W against Q (two passes of classical
/// Gram-Schmidt) and then among themselves. Columns that collapse are
/// replaced by fresh random directions.
inline void orthonormalize_block(const Matrix& Q, Matrix& W, Rng& rng) {
  for (Index c = 0; c < W.cols(); ++c) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double before = W.col(c).norm();
      for (int pass = 0; pass < 2; ++pass) {
        if (Q.cols() > 0) W.col(c) -= Q * (Q.transpose() * W.col(c));
        if (c > 0) W.col(c) -= W.leftCols(c) * (W.leftCols(c).transpose() * W.col(c));
      }
      const double after = W.col(c).norm();
      if (after > 1e-10 * std::max(before, 1e-300) && after > 1e-300) {
        W.col(c) /= after;
        break;
      }
      for (Index r = 0; r < W.rows(); ++r) W(r, c) = rng.normal();
    }
  }
}

/// Block Krylov subspace with Rayleigh-Ritz extraction and thick restarts,
/// applied to the shifted operator sigma I - L so that the wanted end of the
/// spectrum is the dominant one.
inline EigenPairs krylov_smallest(const SparseMatrix& L, Index k, const EigenSolverOptions& opt) {
  const Index N = L.rows();
  double sigma = 0.0;
  for (Index c = 0; c < L.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(L, c); it; ++it) s += std::abs(it.value());
    sigma = std::max(sigma, s);
  }
  sigma += 1.0;

  const Index block = std::min(N, k + opt.oversampling);
  const Index max_basis = std::min(N, std::max<Index>(6 * block, 60));
  Rng rng(opt.seed, Stream::EigenStart);
  Matrix start(N, block);
  for (Index c = 0; c < block; ++c)
    for (Index r = 0; r < N; ++r) start(r, c) = rng.normal();
  orthonormalize_block(Matrix(N, 0), start, rng);

  EigenPairs best;
  for (Index restart = 0; restart < opt.max_restarts; ++restart) {
    Matrix Q(N, max_basis);
    Index used = 0;
    Q.leftCols(block) = start;
    used = block;
    Index last = 0;
    while (used < max_basis) {
      const Index width = std::min(block, max_basis - used);
      Matrix W = sigma * Q.middleCols(last, width) - L * Q.middleCols(last, width);
      orthonormalize_block(Q.leftCols(used), W, rng);
      Q.middleCols(used, width) = W;
      last = used;
      used += width;
    }
    const Matrix LQ = L * Q.leftCols(used);
    Matrix H = Q.leftCols(used).transpose() * LQ;
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    const Matrix ritz = Q.leftCols(used) * es.eigenvectors().leftCols(block);
    best.values = es.eigenvalues().head(k);
    best.vectors = ritz.leftCols(k);
    best.residuals = residual_norms(L, best.values, best.vectors);
    if (best.residuals.maxCoeff() <= opt.tolerance) {
      canonicalize_signs(best.vectors);
      return best;
    }
    if (used == N) break;  // full space: Rayleigh-Ritz is exact up to rounding
    start = ritz;
    orthonormalize_block(Matrix(N, 0), start, rng);
  }
  if (best.residuals.size() > 0 && best.residuals.maxCoeff() <= opt.tolerance) {
    canonicalize_signs(best.vectors);
    return best;
  }
  std::ostringstream msg;
  msg << "residuals after " << opt.max_restarts << " restarts:";
  for (Index i = 0; i < best.residuals.size(); ++i) msg << ' ' << best.residuals(i);
  throw Error(ErrorKind::ConvergenceFailure, msg.str());
}

}  // namespace detail

/// The k algebraically smallest eigenpairs of the symmetric matrix L.
inline EigenPairs smallest_eigenpairs(const SparseMatrix& L, Index k, const EigenSolverOptions& opt = {}) {
  if (L.rows() != L.cols()) throw Error(ErrorKind::ShapeMismatch, "matrix must be square");
  if (k < 1 || k > L.rows()) throw Error(ErrorKind::InvalidArgument, "k must satisfy 1 <= k <= N");
  if (L.rows() <= opt.dense_threshold) return detail::dense_smallest(L, k);
  return detail::krylov_smallest(L, k, opt);
}

}  // namespace s3c
