#pragma once

#include "s3c/common.hpp"
#include "s3c/dataset.hpp"
#include "s3c/dropout.hpp"
#include "s3c/omp.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace s3c {

struct DampedOmpParams {
  Index sparsity = 5;
  double lambda = 0.5;
  double eps = 1e-6;
  /// Allow picking dropped atoms (value copied from the consensus vector)
  /// when that lowers the per-step objective more than any kept atom.
  bool union_selection = false;
};

struct DampedOmpTrace {
  std::vector<Index> picks;
  std::vector<char> picked_dropped;  // 1 if the pick came from the dropped set
  /// ||x_j - Xi b||^2 + lambda ||b - c||^2 after each step (entry 0 = b = 0).
  std::vector<double> objective;
  /// Objective value predicted by the one-atom model for the chosen atom.
  std::vector<double> one_atom_objective;
  /// Same quantity for the best kept atom at that step (+inf if none).
  std::vector<double> best_kept_objective;
};

namespace detail {

inline double penalized_objective(const Matrix& M, std::span<const char> keep, Index j, const Vector& c,
                                  const SparseCoefVector& b, double lambda) {
  Vector q = M.col(j);
  double dev = c.squaredNorm();
  for (std::size_t k = 0; k < b.support.size(); ++k) {
    const Index i = b.support[k];
    const double v = b.values(static_cast<Index>(k));
    if (keep[static_cast<std::size_t>(i)]) q -= v * M.col(i);
    dev += (v - c(i)) * (v - c(i)) - c(i) * c(i);
  }
  return q.squaredNorm() + lambda * dev;
}

}  // namespace detail

/// Damped OMP over the masked dictionary Xi, i.e. X with every column i where
/// keep[i] == 0 replaced by zeros.
///
/// Minimizes ||x_j - Xi b||^2 + lambda ||b - c||^2 subject to ||b||_0 <= s,
/// b_j = 0. Each step adds the kept atom maximizing psi_score against the
/// current residual, then refits on the support in closed form:
///   b_S = (Xi_S' Xi_S + lambda I)^{-1} (Xi_S' x_j + lambda c_S).
/// With union_selection a dropped atom may be chosen instead; its column is
/// zero, so the refit returns b_i = c_i for it.
inline SparseCoefVector damped_omp(const DataMatrix& X, std::span<const char> keep, Index j, const Vector& c,
                                   const DampedOmpParams& p, DampedOmpTrace* trace = nullptr) {
  const Matrix& M = X.matrix();
  const Index N = M.cols();
  if (static_cast<Index>(keep.size()) != N || c.size() != N)
    throw Error(ErrorKind::ShapeMismatch, "mask and consensus vector must have length N");
  if (j < 0 || j >= N) throw Error(ErrorKind::InvalidArgument, "point index out of range");
  if (p.sparsity < 1) throw Error(ErrorKind::InvalidArgument, "sparsity must be >= 1");
  if (!(p.lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 0");

  std::vector<char> in_support(static_cast<std::size_t>(N), 0);
  in_support[static_cast<std::size_t>(j)] = 1;
  bool any_candidate = false;
  for (Index i = 0; i < N && !any_candidate; ++i) any_candidate = i != j && keep[static_cast<std::size_t>(i)];
  if (!any_candidate) throw Error(ErrorKind::EmptyCandidates, "no kept atom other than the point itself");

  const auto xj = M.col(j);
  const double lambda = p.lambda;
  Vector q = xj;
  SparseCoefVector b;
  b.length = N;
  b.values.resize(0);
  Matrix system(0, 0);  // Xi_S' Xi_S + lambda I
  Vector rhs(0);        // Xi_S' x_j + lambda c_S
  if (trace) trace->objective.push_back(q.squaredNorm() + lambda * c.squaredNorm());

  Vector corr(N);
  while (b.nnz() < p.sparsity && q.norm() > p.eps) {
    corr.noalias() = M.transpose() * q;

    Index best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < N; ++i) {
      if (in_support[static_cast<std::size_t>(i)] || !keep[static_cast<std::size_t>(i)]) continue;
      const double score = psi_score(corr(i), c(i), lambda);
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }

    const Index kept_best = best;
    bool from_dropped = false;
    if (p.union_selection) {
      bool take_kept = false;
      if (best >= 0) {
        const double t = corr(best) + lambda * c(best);
        take_kept = lambda * c(best) * c(best) - t * t / (1.0 + lambda) < 0.0;
      }
      if (!take_kept) {
        Index drop_best = -1;
        double drop_mag = -1.0;
        for (Index i = 0; i < N; ++i) {
          if (in_support[static_cast<std::size_t>(i)] || keep[static_cast<std::size_t>(i)]) continue;
          if (std::abs(c(i)) > drop_mag) {
            drop_mag = std::abs(c(i));
            drop_best = i;
          }
        }
        if (drop_best >= 0) {
          best = drop_best;
          from_dropped = true;
        }
      }
    }
    if (best < 0) break;

    if (trace) {
      const double t = (from_dropped ? 0.0 : corr(best)) + lambda * c(best);
      const double one_atom = from_dropped ? q.squaredNorm()
                                           : q.squaredNorm() - t * t / (1.0 + lambda) + lambda * c(best) * c(best);
      trace->picks.push_back(best);
      trace->picked_dropped.push_back(from_dropped ? 1 : 0);
      trace->one_atom_objective.push_back(one_atom);
      double kept_obj = std::numeric_limits<double>::infinity();
      if (kept_best >= 0) {
        const double tk = corr(kept_best) + lambda * c(kept_best);
        kept_obj = q.squaredNorm() - tk * tk / (1.0 + lambda) + lambda * c(kept_best) * c(kept_best);
      }
      trace->best_kept_objective.push_back(kept_obj);
    }

    in_support[static_cast<std::size_t>(best)] = 1;
    const Index k = b.nnz();
    b.support.push_back(best);
    system.conservativeResize(k + 1, k + 1);
    rhs.conservativeResize(k + 1);
    const bool best_kept = keep[static_cast<std::size_t>(best)] != 0;
    for (Index a = 0; a < k; ++a) {
      const Index ia = b.support[static_cast<std::size_t>(a)];
      const double g = (best_kept && keep[static_cast<std::size_t>(ia)]) ? M.col(ia).dot(M.col(best)) : 0.0;
      system(a, k) = g;
      system(k, a) = g;
    }
    system(k, k) = (best_kept ? M.col(best).squaredNorm() : 0.0) + lambda;
    rhs(k) = (best_kept ? M.col(best).dot(xj) : 0.0) + lambda * c(best);

    b.values = detail::solve_support_system(system, rhs);
    q = xj;
    for (Index a = 0; a <= k; ++a) {
      const Index ia = b.support[static_cast<std::size_t>(a)];
      if (keep[static_cast<std::size_t>(ia)]) q -= b.values(a) * M.col(ia);
    }
    if (trace) trace->objective.push_back(detail::penalized_objective(M, keep, j, c, b, lambda));
  }
  return b;
}

/// Convenience overload: all columns kept (Xi = X).
inline SparseCoefVector damped_omp(const DataMatrix& X, Index j, const Vector& c, const DampedOmpParams& p,
                                   DampedOmpTrace* trace = nullptr) {
  const std::vector<char> all(static_cast<std::size_t>(X.size()), 1);
  return damped_omp(X, std::span<const char>(all), j, c, p, trace);
}

/// Damped OMP with the dropped-atom selection branch enabled.
inline SparseCoefVector damped_omp_union(const DataMatrix& X, std::span<const char> keep, Index j, const Vector& c,
                                         DampedOmpParams p, DampedOmpTrace* trace = nullptr) {
  p.union_selection = true;
  return damped_omp(X, keep, j, c, p, trace);
}

}  // namespace s3c
