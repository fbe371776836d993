#pragma once

#include "s3c/common.hpp"
#include "s3c/dataset.hpp"
#include "s3c/omp.hpp"
#include "s3c/rng.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace s3c {

/// T Bernoulli column masks over N points. Sampled once and shared by every
/// column solve. Mask t draws from stream (seed, Masks, t); point i is kept
/// when the i-th uniform draw is >= delta.
class DropoutPlan {
 public:
  DropoutPlan() = default;

  Index points() const noexcept { return n_; }
  Index subproblems() const noexcept { return static_cast<Index>(keep_.size()); }
  double rate() const noexcept { return delta_; }
  std::uint64_t seed() const noexcept { return seed_; }

  bool kept(Index t, Index i) const {
    return keep_[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] != 0;
  }
  /// Keep flags of mask t (1 = column kept), length N.
  std::span<const char> mask(Index t) const { return keep_[static_cast<std::size_t>(t)]; }
  /// I^(t), ascending.
  const std::vector<Index>& keep_set(Index t) const { return kept_idx_[static_cast<std::size_t>(t)]; }
  /// J^(t), ascending.
  const std::vector<Index>& drop_set(Index t) const { return dropped_idx_[static_cast<std::size_t>(t)]; }

  /// Builds a plan from explicit keep flags (one vector<char> per subproblem).
  static DropoutPlan from_masks(std::vector<std::vector<char>> keep, double delta = 0.0,
                                std::uint64_t seed = 0) {
    if (keep.empty()) throw Error(ErrorKind::InvalidArgument, "plan needs at least one mask");
    DropoutPlan p;
    p.n_ = static_cast<Index>(keep.front().size());
    p.delta_ = delta;
    p.seed_ = seed;
    for (const auto& m : keep)
      if (static_cast<Index>(m.size()) != p.n_) throw Error(ErrorKind::ShapeMismatch, "mask lengths differ");
    p.keep_ = std::move(keep);
    p.index();
    return p;
  }

  friend DropoutPlan sample_dropout_masks(Index n, double delta, Index t, std::uint64_t seed);

 private:
  void index() {
    kept_idx_.assign(keep_.size(), {});
    dropped_idx_.assign(keep_.size(), {});
    for (std::size_t t = 0; t < keep_.size(); ++t)
      for (Index i = 0; i < n_; ++i)
        (keep_[t][static_cast<std::size_t>(i)] ? kept_idx_[t] : dropped_idx_[t]).push_back(i);
  }

  Index n_ = 0;
  double delta_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<std::vector<char>> keep_;
  std::vector<std::vector<Index>> kept_idx_;
  std::vector<std::vector<Index>> dropped_idx_;
};

inline DropoutPlan sample_dropout_masks(Index n, double delta, Index t, std::uint64_t seed) {
  if (!(delta >= 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "dropout rate must be in [0, 1)");
  if (t < 1) throw Error(ErrorKind::InvalidArgument, "T must be >= 1");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "N must be >= 1");
  DropoutPlan p;
  p.n_ = n;
  p.delta_ = delta;
  p.seed_ = seed;
  p.keep_.assign(static_cast<std::size_t>(t), std::vector<char>(static_cast<std::size_t>(n), 1));
  for (Index k = 0; k < t; ++k) {
    Rng rng(seed, Stream::Masks, static_cast<std::uint64_t>(k));
    for (Index i = 0; i < n; ++i)
      p.keep_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = rng.uniform() >= delta ? 1 : 0;
  }
  p.index();
  return p;
}

/// Ridge weight induced by dropout at rate delta: delta / (1 - delta).
inline double dropout_penalty(double delta) {
  if (delta == 1.0) throw Error(ErrorKind::DivergentRegularizer, "dropout rate 1 gives infinite penalty");
  if (!(delta >= 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "dropout rate must be in [0, 1)");
  return delta / (1.0 - delta);
}

/// ||x_j - sum_i c_i x_i||^2 + delta/(1-delta) * sum_i ||x_i||^2 c_i^2
inline double regularized_objective(const Matrix& X, Index j, const SparseCoefVector& c, double delta) {
  const double lambda = dropout_penalty(delta);
  Vector r = X.col(j);
  double reg = 0.0;
  for (std::size_t k = 0; k < c.support.size(); ++k) {
    const double v = c.values(static_cast<Index>(k));
    r -= v * X.col(c.support[k]);
    reg += X.col(c.support[k]).squaredNorm() * v * v;
  }
  return r.squaredNorm() + lambda * reg;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(samples)
};

/// Sample mean of ||x_j - sum_i xi_i c_i x_i||^2 with xi_i = 1/(1-delta)
/// w.p. 1-delta and 0 otherwise, drawn fresh per sample.
inline MonteCarloEstimate dropout_objective_mc(const Matrix& X, Index j, const SparseCoefVector& c,
                                               double delta, Index samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  if (!(delta >= 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "dropout rate must be in [0, 1)");
  const double scale = 1.0 / (1.0 - delta);
  Rng rng(seed, Stream::MonteCarlo);
  Matrix atoms(X.rows(), c.nnz());
  for (Index k = 0; k < c.nnz(); ++k)
    atoms.col(k) = c.values(k) * scale * X.col(c.support[static_cast<std::size_t>(k)]);
  const Vector xj = X.col(j);

  // Welford accumulation.
  double mean = 0.0, m2 = 0.0;
  Vector r(X.rows());
  for (Index n = 1; n <= samples; ++n) {
    r = xj;
    for (Index k = 0; k < atoms.cols(); ++k)
      if (rng.uniform() >= delta) r -= atoms.col(k);
    const double v = r.squaredNorm();
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  MonteCarloEstimate est;
  est.mean = mean;
  est.std_error = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples)) : 0.0;
  return est;
}

/// Greedy selection score for atom i against residual q and consensus value
/// c_ij: (x_i'q)^2 + 2 lambda (x_i'q) c_ij - lambda c_ij^2. Assumes ||x_i|| = 1.
inline double psi_score(double xq, double c_ij, double lambda) noexcept {
  return xq * xq + 2.0 * lambda * xq * c_ij - lambda * c_ij * c_ij;
}

template <typename DerivedA, typename DerivedB>
double psi_score(const Eigen::MatrixBase<DerivedA>& x_i, const Eigen::MatrixBase<DerivedB>& q, double c_ij,
                 double lambda) {
  return psi_score(x_i.dot(q), c_ij, lambda);
}

}  // namespace s3c
