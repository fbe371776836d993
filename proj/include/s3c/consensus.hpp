#pragma once

#include "s3c/common.hpp"
#include "s3c/damped_omp.hpp"
#include "s3c/dataset.hpp"
#include "s3c/dropout.hpp"
#include "s3c/omp.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace s3c {

enum class Averaging {
  Mean,  // c = (1/T) sum_t b^(t)
  Star,  // c_i = (1/r_i) sum_t b_i^(t), r_i = #{t : b_i^(t) != 0}
};

/// Consensus solver settings. lambda in [0.1, 1] is the usual working range.
struct ConsensusParams {
  Index sparsity = 5;
  double lambda = 0.5;
  double eps_inner = 1e-6;
  double eps_outer = 1e-3;
  Index max_outer = 10;
  Averaging averaging = Averaging::Mean;
  bool union_selection = false;
  /// lambda == 0 is only meaningful when checking the reduction to plain OMP.
  bool allow_zero_lambda = false;

  void validate() const {
    if (sparsity < 1) throw Error(ErrorKind::InvalidArgument, "sparsity must be >= 1");
    if (max_outer < 1) throw Error(ErrorKind::InvalidArgument, "max_outer must be >= 1");
    if (eps_inner < 0 || eps_outer < 0) throw Error(ErrorKind::InvalidArgument, "tolerances must be >= 0");
    if (allow_zero_lambda ? !(lambda >= 0.0) : !(lambda > 0.0))
      throw Error(ErrorKind::InvalidArgument, "lambda must be > 0");
  }

  DampedOmpParams inner() const { return {sparsity, lambda, eps_inner, union_selection}; }
};

namespace detail {

inline double relative_change(double diff_norm, double old_norm) { return diff_norm / std::max(old_norm, 1e-12); }

}  // namespace detail

/// One alternating step for column j: T Damped OMP solves against the
/// current consensus, then the averaging update. Subproblems are reduced in
/// ascending t.
inline SparseCoefVector consensus_step(const DataMatrix& X, Index j, const DropoutPlan& plan,
                                       const ConsensusParams& params, const SparseCoefVector& current) {
  const Index N = X.size();
  const Index T = plan.subproblems();
  const Vector c = current.dense();
  const DampedOmpParams inner = params.inner();
  Vector sum = Vector::Zero(N);
  std::vector<int> nonzero(params.averaging == Averaging::Star ? static_cast<std::size_t>(N) : 0, 0);
  for (Index t = 0; t < T; ++t) {
    const SparseCoefVector b = damped_omp(X, plan.mask(t), j, c, inner);
    for (std::size_t k = 0; k < b.support.size(); ++k) {
      const double v = b.values(static_cast<Index>(k));
      sum(b.support[k]) += v;
      if (!nonzero.empty() && v != 0.0) ++nonzero[static_cast<std::size_t>(b.support[k])];
    }
  }
  if (params.averaging == Averaging::Mean) {
    sum /= static_cast<double>(T);
  } else {
    for (Index i = 0; i < N; ++i) {
      const int r = nonzero[static_cast<std::size_t>(i)];
      sum(i) = r > 0 ? sum(i) / r : 0.0;
    }
  }
  sum(j) = 0.0;
  return SparseCoefVector::from_dense(sum);
}

struct ConsensusResult {
  SparseCoefVector coefficients;
  Index iterations = 0;
  bool converged = false;
  /// ||c_k - c_{k-1}|| / max(||c_{k-1}||, 1e-12) for k = 1..iterations
  /// (the first entry is measured against c_0 = 0).
  std::vector<double> relative_changes;
};

/// Consensus OMP for one column: start from c = 0, alternate T Damped OMP
/// solves and averaging until the relative change drops below eps_outer or
/// max_outer iterations have run.
inline ConsensusResult consensus_solve(const DataMatrix& X, Index j, const DropoutPlan& plan,
                                       const ConsensusParams& params) {
  params.validate();
  if (plan.points() != X.size()) throw Error(ErrorKind::ShapeMismatch, "plan size differs from point count");
  ConsensusResult res;
  res.coefficients.length = X.size();
  res.coefficients.values.resize(0);
  for (Index it = 1; it <= params.max_outer; ++it) {
    SparseCoefVector next = consensus_step(X, j, plan, params, res.coefficients);
    const double change = detail::relative_change((next.dense() - res.coefficients.dense()).norm(),
                                                  res.coefficients.values.norm());
    res.coefficients = std::move(next);
    res.iterations = it;
    res.relative_changes.push_back(change);
    if (change < params.eps_outer) {
      res.converged = true;
      break;
    }
  }
  return res;
}

struct ConsensusMatrixResult {
  SelfExpressionMatrix C;
  /// ||C_k - C_{k-1}||_F / ||C_{k-1}||_F for k = 2..outer_iterations.
  std::vector<double> relative_changes;
  Index outer_iterations = 0;
  std::vector<Index> column_iterations;
  bool converged = false;  // every column met eps_outer
};

/// Runs consensus_solve on every column, advancing all still-active columns
/// one outer iteration at a time so the matrix-level change can be recorded.
/// Each column follows exactly the sequence consensus_solve would produce.
inline ConsensusMatrixResult consensus_matrix(const DataMatrix& X, const DropoutPlan& plan,
                                              const ConsensusParams& params, unsigned threads = 1) {
  params.validate();
  const Index N = X.size();
  if (plan.points() != N) throw Error(ErrorKind::ShapeMismatch, "plan size differs from point count");

  std::vector<SparseCoefVector> cols(static_cast<std::size_t>(N));
  for (auto& c : cols) {
    c.length = N;
    c.values.resize(0);
  }
  std::vector<char> active(static_cast<std::size_t>(N), 1);
  std::vector<double> diff2(static_cast<std::size_t>(N), 0.0);
  ConsensusMatrixResult res;
  res.column_iterations.assign(static_cast<std::size_t>(N), 0);

  for (Index it = 1; it <= params.max_outer; ++it) {
    double old_norm2 = 0.0;
    for (const auto& c : cols) old_norm2 += c.values.squaredNorm();

    parallel_for(N, threads, [&](Index j) {
      const auto sj = static_cast<std::size_t>(j);
      diff2[sj] = 0.0;
      if (!active[sj]) return;
      SparseCoefVector next;
      try {
        next = consensus_step(X, j, plan, params, cols[sj]);
      } catch (const Error& e) {
        throw Error(e.kind(), "column " + std::to_string(j) + ": " + e.what());
      }
      const double d2 = (next.dense() - cols[sj].dense()).squaredNorm();
      const double change = detail::relative_change(std::sqrt(d2), cols[sj].values.norm());
      cols[sj] = std::move(next);
      diff2[sj] = d2;
      res.column_iterations[sj] = it;
      if (change < params.eps_outer) active[sj] = 0;
    });

    double total_diff2 = 0.0;
    for (double d : diff2) total_diff2 += d;
    if (it >= 2) res.relative_changes.push_back(detail::relative_change(std::sqrt(total_diff2), std::sqrt(old_norm2)));
    res.outer_iterations = it;
    if (std::none_of(active.begin(), active.end(), [](char a) { return a != 0; })) {
      res.converged = true;
      break;
    }
  }
  res.C = assemble_columns(cols, N);
  return res;
}

/// S3COMP: a single outer iteration of consensus OMP.
inline SelfExpressionMatrix s3comp_matrix(const DataMatrix& X, const DropoutPlan& plan, ConsensusParams params,
                                          unsigned threads = 1) {
  params.max_outer = 1;
  return consensus_matrix(X, plan, params, threads).C;
}

/// S3COMP-C: consensus OMP iterated to convergence.
inline SelfExpressionMatrix s3comp_c_matrix(const DataMatrix& X, const DropoutPlan& plan,
                                            const ConsensusParams& params, unsigned threads = 1) {
  return consensus_matrix(X, plan, params, threads).C;
}

}  // namespace s3c
