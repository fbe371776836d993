#pragma once

#include "s3c/common.hpp"
#include "s3c/dataset.hpp"
#include "s3c/eigensolver.hpp"
#include "s3c/omp.hpp"
#include "s3c/spectral.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace s3c {

/// Minimum-cost assignment on a rows x cols cost matrix (rows <= cols is not
/// required). Returns, for each row, the assigned column or -1 when there are
/// more rows than columns and the row is left out. O(n^2 m) potentials method.
inline std::vector<Index> hungarian_min_cost(const Matrix& cost) {
  const bool transposed = cost.rows() > cost.cols();
  const Matrix a = transposed ? Matrix(cost.transpose()) : cost;
  const Index n = a.rows(), m = a.cols();
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; p[col] = row matched to col.
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<Index> p(static_cast<std::size_t>(m + 1), 0), way(static_cast<std::size_t>(m + 1), 0);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(m + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= m; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) continue;
        const double cur = a(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[sj];
        if (cur < minv[sj]) {
          minv[sj] = cur;
          way[sj] = j0;
        }
        if (minv[sj] < delta) {
          delta = minv[sj];
          j1 = j;
        }
      }
      for (Index j = 0; j <= m; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) {
          u[static_cast<std::size_t>(p[sj])] += delta;
          v[sj] -= delta;
        } else {
          minv[sj] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> row_to_col(static_cast<std::size_t>(n), -1);
  for (Index j = 1; j <= m; ++j)
    if (p[static_cast<std::size_t>(j)] > 0) row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  if (!transposed) return row_to_col;
  std::vector<Index> out(static_cast<std::size_t>(cost.rows()), -1);
  for (Index r = 0; r < n; ++r) out[static_cast<std::size_t>(row_to_col[static_cast<std::size_t>(r)])] = r;
  return out;
}

/// Contingency counts: rows = true clusters, columns = densified estimated ids.
inline Matrix contingency(const std::vector<int>& est, const GroundTruthLabels& truth) {
  if (static_cast<Index>(est.size()) != truth.size())
    throw Error(ErrorKind::LengthMismatch, "estimated and true label vectors differ in length");
  const auto dense = GroundTruthLabels::from_ids(est);
  Matrix m = Matrix::Zero(truth.clusters(), dense.clusters());
  for (Index i = 0; i < truth.size(); ++i) m(truth[i], dense[i]) += 1.0;
  return m;
}

/// Percentage of points correctly labeled under the best one-to-one matching
/// between estimated and true clusters.
inline double clustering_accuracy(const std::vector<int>& est, const GroundTruthLabels& truth) {
  const Matrix counts = contingency(est, truth);
  const auto match = hungarian_min_cost(-counts);
  double hits = 0.0;
  for (Index r = 0; r < counts.rows(); ++r)
    if (match[static_cast<std::size_t>(r)] >= 0) hits += counts(r, match[static_cast<std::size_t>(r)]);
  return 100.0 * hits / static_cast<double>(truth.size());
}

/// e% = (100/N) sum_j (1 - in-cluster l1 mass of c_j / ||c_j||_1).
/// A zero column contributes its full weight of 1.
inline double subspace_preserving_error(const SelfExpressionMatrix& C, const GroundTruthLabels& truth) {
  if (C.cols() != truth.size() || C.rows() != truth.size())
    throw Error(ErrorKind::LengthMismatch, "coefficient matrix and labels differ in size");
  double sum = 0.0;
  for (Index j = 0; j < C.outerSize(); ++j) {
    double total = 0.0, inside = 0.0;
    for (SparseMatrix::InnerIterator it(C, j); it; ++it) {
      const double a = std::abs(it.value());
      total += a;
      if (truth.same(it.row(), j)) inside += a;
    }
    sum += total > 0.0 ? 1.0 - inside / total : 1.0;
  }
  return 100.0 * sum / static_cast<double>(C.cols());
}

struct ConnectivityReport {
  std::vector<double> lambda2;   // per true cluster
  std::vector<char> singleton;   // cluster had one point; lambda2 set to 0
  double min = 0.0;              // c
  double mean = 0.0;             // c-bar
};

/// Second-smallest eigenvalue of the normalized Laplacian of each true
/// cluster's induced subgraph. Single-point clusters are reported as 0.
inline std::vector<double> per_cluster_lambda2(const AffinityMatrix& A, const GroundTruthLabels& truth,
                                               std::vector<char>* singleton = nullptr,
                                               const EigenSolverOptions& opt = {}) {
  if (A.size() != truth.size()) throw Error(ErrorKind::LengthMismatch, "affinity and labels differ in size");
  std::vector<double> out;
  if (singleton) singleton->clear();
  for (int c = 0; c < truth.clusters(); ++c) {
    const auto nodes = truth.members(c);
    if (nodes.size() < 2) {
      out.push_back(0.0);
      if (singleton) singleton->push_back(1);
      continue;
    }
    const auto L = normalized_laplacian(A.subgraph(nodes));
    out.push_back(smallest_eigenpairs(L, 2, opt).values(1));
    if (singleton) singleton->push_back(0);
  }
  return out;
}

inline ConnectivityReport connectivity(const AffinityMatrix& A, const GroundTruthLabels& truth,
                                       const EigenSolverOptions& opt = {}) {
  ConnectivityReport r;
  r.lambda2 = per_cluster_lambda2(A, truth, &r.singleton, opt);
  r.min = *std::min_element(r.lambda2.begin(), r.lambda2.end());
  double s = 0.0;
  for (double v : r.lambda2) s += v;
  r.mean = s / static_cast<double>(r.lambda2.size());
  return r;
}

/// c = min_i lambda2^(i)
inline double connectivity_min(const AffinityMatrix& A, const GroundTruthLabels& truth) {
  return connectivity(A, truth).min;
}

/// c-bar = mean_i lambda2^(i)
inline double connectivity_mean(const AffinityMatrix& A, const GroundTruthLabels& truth) {
  return connectivity(A, truth).mean;
}

struct StageTimes {
  double self_expression_s = 0.0;
  double spectral_s = 0.0;
  double metrics_s = 0.0;
  double total() const { return self_expression_s + spectral_s + metrics_s; }
};

struct ClusteringReport {
  double accuracy_pct = 0.0;
  double sre_pct = 0.0;
  double conn_min = 0.0;
  double conn_mean = 0.0;
  std::vector<double> per_cluster_lambda2;
  std::vector<char> singleton_clusters;
  double wall_time_s = 0.0;
  StageTimes times;
};

}  // namespace s3c
