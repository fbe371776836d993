#pragma once

#include "s3c/common.hpp"
#include "s3c/rng.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace s3c {

/// D x N matrix whose columns are unit-norm data points.
/// Only obtainable through normalize_columns or the synthetic generator, so a
/// DataMatrix in hand always satisfies the unit-norm invariant.
class DataMatrix {
 public:
  DataMatrix() = default;

  const Matrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  Index size() const noexcept { return m_.cols(); }
  auto col(Index j) const { return m_.col(j); }

  /// Wraps a matrix that is already column-normalized. Throws InvalidArgument
  /// if any column norm deviates from 1 by more than `tol`.
  static DataMatrix from_normalized(Matrix m, double tol = 1e-10) {
    check_finite(m);
    for (Index j = 0; j < m.cols(); ++j) {
      const double nrm = m.col(j).norm();
      if (std::abs(nrm - 1.0) > tol)
        throw Error(ErrorKind::InvalidArgument,
                    "column " + std::to_string(j) + " has norm " + std::to_string(nrm));
    }
    DataMatrix d;
    d.m_ = std::move(m);
    return d;
  }

  static void check_finite(const Matrix& m) {
    if (m.rows() < 1 || m.cols() < 1)
      throw Error(ErrorKind::ShapeMismatch, "matrix must have at least one row and one column");
    if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix contains NaN or Inf");
  }

 private:
  friend DataMatrix normalize_columns(const Matrix& raw);
  Matrix m_;
};

/// Divides every column by its l2 norm.
inline DataMatrix normalize_columns(const Matrix& raw) {
  DataMatrix::check_finite(raw);
  DataMatrix out;
  out.m_ = raw;
  for (Index j = 0; j < raw.cols(); ++j) {
    const double nrm = raw.col(j).norm();
    if (nrm < 1e-300) throw Error(ErrorKind::ZeroColumn, "column " + std::to_string(j));
    out.m_.col(j) /= nrm;
  }
  return out;
}

/// Cluster assignment for N points. Stored 0-based (0..n-1); the text file
/// format and reports use 1..n.
class GroundTruthLabels {
 public:
  GroundTruthLabels() = default;

  /// Throws InvalidArgument unless every value lies in [0, n) and every
  /// cluster is used.
  GroundTruthLabels(std::vector<int> labels, int n) : labels_(std::move(labels)), n_(n) {
    if (n_ < 1) throw Error(ErrorKind::InvalidArgument, "cluster count must be >= 1");
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    for (int l : labels_) {
      if (l < 0 || l >= n_)
        throw Error(ErrorKind::InvalidArgument, "label " + std::to_string(l) + " out of range");
      seen[static_cast<std::size_t>(l)] = 1;
    }
    for (int i = 0; i < n_; ++i)
      if (!seen[static_cast<std::size_t>(i)])
        throw Error(ErrorKind::InvalidArgument, "cluster " + std::to_string(i + 1) + " is empty");
  }

  /// Builds labels from arbitrary non-negative ids by densifying them in
  /// increasing id order.
  static GroundTruthLabels from_ids(const std::vector<int>& ids) {
    std::vector<int> sorted(ids);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> dense(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
      dense[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), ids[i]) - sorted.begin());
    return GroundTruthLabels(std::move(dense), static_cast<int>(sorted.size()));
  }

  const std::vector<int>& labels() const noexcept { return labels_; }
  int clusters() const noexcept { return n_; }
  Index size() const noexcept { return static_cast<Index>(labels_.size()); }
  int operator[](Index i) const { return labels_[static_cast<std::size_t>(i)]; }

  /// omega_ij: 1 iff points i and j share a cluster.
  bool same(Index i, Index j) const { return (*this)[i] == (*this)[j]; }

  std::vector<Index> members(int cluster) const {
    std::vector<Index> out;
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == cluster) out.push_back(static_cast<Index>(i));
    return out;
  }

 private:
  std::vector<int> labels_;
  int n_ = 0;
};

struct SyntheticSpec {
  int subspaces = 5;        // n
  int subspace_dim = 6;     // d
  int ambient_dim = 9;      // D
  int points_per_subspace = 30;
  std::uint64_t seed = 0;

  void validate() const {
    if (subspaces < 1 || subspace_dim < 1 || ambient_dim < 1 || points_per_subspace < 1)
      throw Error(ErrorKind::InvalidSpec, "n, d, D and N_i must all be >= 1");
    if (subspace_dim > ambient_dim)
      throw Error(ErrorKind::InvalidSpec, "subspace dimension exceeds ambient dimension");
  }
};

struct SyntheticData {
  DataMatrix data;
  GroundTruthLabels labels;
  std::vector<Matrix> bases;  // D x d orthonormal basis per subspace
};

/// Union-of-subspaces sample. Subspace i has basis Q from the thin QR of a
/// D x d Gaussian matrix (stream Basis, substream i); its points are Q g with
/// g ~ N(0, I_d) (stream Points, substream i), normalized to unit length.
/// Points are laid out subspace by subspace.
inline SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const Index D = spec.ambient_dim, d = spec.subspace_dim, per = spec.points_per_subspace;
  const Index N = per * spec.subspaces;
  Matrix X(D, N);
  std::vector<int> labels(static_cast<std::size_t>(N));
  std::vector<Matrix> bases;
  bases.reserve(static_cast<std::size_t>(spec.subspaces));

  for (int i = 0; i < spec.subspaces; ++i) {
    Rng basis_rng(spec.seed, Stream::Basis, static_cast<std::uint64_t>(i));
    Matrix g(D, d);
    for (Index c = 0; c < d; ++c)
      for (Index r = 0; r < D; ++r) g(r, c) = basis_rng.normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix basis = qr.householderQ() * Matrix::Identity(D, d);

    Rng point_rng(spec.seed, Stream::Points, static_cast<std::uint64_t>(i));
    Vector coef(d);
    for (Index p = 0; p < per; ++p) {
      double nrm = 0.0;
      Vector x;
      do {
        for (Index c = 0; c < d; ++c) coef(c) = point_rng.normal();
        x = basis * coef;
        nrm = x.norm();
      } while (nrm < 1e-12);
      const Index col = i * per + p;
      X.col(col) = x / nrm;
      labels[static_cast<std::size_t>(col)] = i;
    }
    bases.push_back(std::move(basis));
  }
  return {DataMatrix::from_normalized(std::move(X)), GroundTruthLabels(std::move(labels), spec.subspaces),
          std::move(bases)};
}

struct PcaResult {
  Matrix projected;          // target_dim x N, not renormalized
  Matrix directions;         // D x target_dim principal directions
  Vector mean;               // column mean that was subtracted
  Vector singular_values;    // all singular values of the centered data
  double captured_variance = 0.0;  // sum of top-k sigma^2 / total sigma^2
};

/// Mean-subtracts columns and projects onto the top `target_dim` left
/// singular vectors of the centered matrix.
inline PcaResult pca_project(const Matrix& raw, Index target_dim) {
  DataMatrix::check_finite(raw);
  if (target_dim < 1 || target_dim > std::min(raw.rows(), raw.cols()))
    throw Error(ErrorKind::DimTooLarge, "target_dim " + std::to_string(target_dim) +
                                            " not in [1, min(D, N)]");
  PcaResult r;
  r.mean = raw.rowwise().mean();
  const Matrix centered = raw.colwise() - r.mean;
  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU);
  r.singular_values = svd.singularValues();
  r.directions = svd.matrixU().leftCols(target_dim);
  r.projected = r.directions.transpose() * centered;
  const double total = r.singular_values.squaredNorm();
  r.captured_variance = total > 0.0 ? r.singular_values.head(target_dim).squaredNorm() / total : 1.0;
  return r;
}

}  // namespace s3c
