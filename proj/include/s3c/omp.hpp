#pragma once

#include "s3c/common.hpp"
#include "s3c/dataset.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace s3c {

/// Sparse length-N coefficient vector. `support` keeps selection order;
/// `values[k]` belongs to `support[k]`.
struct SparseCoefVector {
  Index length = 0;
  std::vector<Index> support;
  Vector values;

  Index nnz() const noexcept { return static_cast<Index>(support.size()); }

  Vector dense() const {
    Vector v = Vector::Zero(length);
    for (std::size_t k = 0; k < support.size(); ++k) v(support[k]) = values(static_cast<Index>(k));
    return v;
  }

  bool contains(Index i) const {
    return std::find(support.begin(), support.end(), i) != support.end();
  }

  static SparseCoefVector from_dense(const Vector& v) {
    SparseCoefVector out;
    out.length = v.size();
    std::vector<double> vals;
    for (Index i = 0; i < v.size(); ++i)
      if (v(i) != 0.0) {
        out.support.push_back(i);
        vals.push_back(v(i));
      }
    out.values = Eigen::Map<const Vector>(vals.data(), static_cast<Index>(vals.size()));
    return out;
  }
};

/// N x N coefficient matrix, column j = representation of point j.
using SelfExpressionMatrix = SparseMatrix;

inline SelfExpressionMatrix assemble_columns(const std::vector<SparseCoefVector>& cols, Index n) {
  std::vector<Triplet> trips;
  for (Index j = 0; j < static_cast<Index>(cols.size()); ++j) {
    const auto& c = cols[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < c.support.size(); ++k) {
      const double v = c.values(static_cast<Index>(k));
      if (v != 0.0 && c.support[k] != j) trips.emplace_back(c.support[k], j, v);
    }
  }
  SelfExpressionMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

namespace detail {

/// Solves the small SPD system `A x = rhs`. Cholesky first; if it fails or
/// the system is numerically singular, the least-norm solution from a
/// complete orthogonal decomposition is returned instead.
inline Vector solve_support_system(const Matrix& A, const Vector& rhs) {
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() == Eigen::Success && llt.rcond() > 1e-12) return llt.solve(rhs);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
  Vector x = cod.solve(rhs);
  if (!x.allFinite()) throw Error(ErrorKind::DegenerateSupport, "support system has no finite solution");
  return x;
}

}  // namespace detail

struct OmpTrace {
  std::vector<double> residual_norms;  // ||q^(k)|| for k = 0..steps
  std::vector<Vector> residuals;       // q^(k) for k = 1..steps
};

/// Plain OMP self-expression of column j over all other columns.
/// Picks argmax |x_i' q| (ties to the lowest index), refits by least squares
/// on the grown support, stops after s atoms or once ||q|| <= eps.
inline SparseCoefVector omp_solve(const DataMatrix& X, Index j, Index s, double eps = 1e-6,
                                  OmpTrace* trace = nullptr) {
  const Matrix& M = X.matrix();
  const Index N = M.cols();
  if (j < 0 || j >= N) throw Error(ErrorKind::InvalidArgument, "point index out of range");
  if (s < 1 || s >= N) throw Error(ErrorKind::InvalidArgument, "sparsity must satisfy 1 <= s < N");
  if (eps < 0) throw Error(ErrorKind::InvalidArgument, "eps must be >= 0");

  const auto xj = M.col(j);
  Vector q = xj;
  std::vector<char> used(static_cast<std::size_t>(N), 0);
  used[static_cast<std::size_t>(j)] = 1;

  SparseCoefVector out;
  out.length = N;
  Matrix gram(0, 0);
  Vector rhs(0);
  Vector b(0);
  if (trace) trace->residual_norms.push_back(q.norm());

  while (out.nnz() < s && q.norm() > eps) {
    const Vector corr = M.transpose() * q;
    Index best = -1;
    double best_score = -1.0;
    for (Index i = 0; i < N; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const double score = std::abs(corr(i));
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = 1;

    const Index k = out.nnz();
    out.support.push_back(best);
    gram.conservativeResize(k + 1, k + 1);
    rhs.conservativeResize(k + 1);
    for (Index a = 0; a < k; ++a) {
      const double g = M.col(out.support[static_cast<std::size_t>(a)]).dot(M.col(best));
      gram(a, k) = g;
      gram(k, a) = g;
    }
    gram(k, k) = M.col(best).squaredNorm();
    rhs(k) = M.col(best).dot(xj);

    b = detail::solve_support_system(gram, rhs);
    q = xj;
    for (Index a = 0; a <= k; ++a) q -= b(a) * M.col(out.support[static_cast<std::size_t>(a)]);
    if (trace) {
      trace->residual_norms.push_back(q.norm());
      trace->residuals.push_back(q);
    }
  }
  out.values = b;
  return out;
}

/// SSCOMP: one OMP solve per column.
inline SelfExpressionMatrix sscomp_matrix(const DataMatrix& X, Index s, double eps = 1e-6,
                                          unsigned threads = 1) {
  const Index N = X.size();
  std::vector<SparseCoefVector> cols(static_cast<std::size_t>(N));
  parallel_for(N, threads, [&](Index j) {
    try {
      cols[static_cast<std::size_t>(j)] = omp_solve(X, j, s, eps);
    } catch (const Error& e) {
      throw Error(e.kind(), "column " + std::to_string(j) + ": " + e.what());
    }
  });
  return assemble_columns(cols, N);
}

}  // namespace s3c
