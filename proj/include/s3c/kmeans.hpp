#pragma once

#include "s3c/common.hpp"
#include "s3c/rng.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace s3c {

struct KMeansOptions {
  Index restarts = 20;
  Index max_iterations = 300;
};

struct KMeansResult {
  std::vector<int> labels;  // 0-based
  Matrix centers;           // n x k, one center per row
  double inertia = std::numeric_limits<double>::infinity();
  Index restart = -1;       // which restart produced the result
};

namespace detail {

/// k-means++ seeding. Returns n distinct row indices. When every remaining
/// point coincides with a chosen center the next center is drawn uniformly
/// from the unchosen rows.
inline std::vector<Index> kmeanspp_seed(const Matrix& rows, Index n, Rng& rng) {
  const Index N = rows.rows();
  std::vector<Index> chosen;
  std::vector<char> taken(static_cast<std::size_t>(N), 0);
  std::vector<double> d2(static_cast<std::size_t>(N), std::numeric_limits<double>::infinity());
  chosen.push_back(static_cast<Index>(rng.below(static_cast<std::uint64_t>(N))));
  taken[static_cast<std::size_t>(chosen.back())] = 1;
  while (static_cast<Index>(chosen.size()) < n) {
    const auto c = rows.row(chosen.back());
    double total = 0.0;
    for (Index i = 0; i < N; ++i) {
      const auto si = static_cast<std::size_t>(i);
      d2[si] = taken[si] ? 0.0 : std::min(d2[si], (rows.row(i) - c).squaredNorm());
      total += d2[si];
    }
    Index pick = -1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Index i = 0; i < N; ++i) {
        acc += d2[static_cast<std::size_t>(i)];
        if (d2[static_cast<std::size_t>(i)] > 0.0 && acc > target) {
          pick = i;
          break;
        }
      }
      if (pick < 0)
        for (Index i = N - 1; i >= 0; --i)
          if (d2[static_cast<std::size_t>(i)] > 0.0) {
            pick = i;
            break;
          }
    } else {
      const Index free = N - static_cast<Index>(chosen.size());
      Index r = static_cast<Index>(rng.below(static_cast<std::uint64_t>(free)));
      for (Index i = 0; i < N; ++i)
        if (!taken[static_cast<std::size_t>(i)] && r-- == 0) {
          pick = i;
          break;
        }
    }
    chosen.push_back(pick);
    taken[static_cast<std::size_t>(pick)] = 1;
  }
  return chosen;
}

inline KMeansResult lloyd(const Matrix& rows, Matrix centers, Index max_iterations) {
  const Index N = rows.rows(), n = centers.rows();
  KMeansResult r;
  r.labels.assign(static_cast<std::size_t>(N), -1);
  std::vector<double> dist(static_cast<std::size_t>(N), 0.0);
  for (Index iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (Index i = 0; i < N; ++i) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (Index c = 0; c < n; ++c) {
        const double d = (rows.row(i) - centers.row(c)).squaredNorm();
        if (d < bd) {
          bd = d;
          best = static_cast<int>(c);
        }
      }
      dist[static_cast<std::size_t>(i)] = bd;
      if (r.labels[static_cast<std::size_t>(i)] != best) {
        r.labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    Matrix sums = Matrix::Zero(n, rows.cols());
    std::vector<Index> count(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < N; ++i) {
      sums.row(r.labels[static_cast<std::size_t>(i)]) += rows.row(i);
      ++count[static_cast<std::size_t>(r.labels[static_cast<std::size_t>(i)])];
    }
    for (Index c = 0; c < n; ++c) {
      if (count[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(count[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: move it onto the point farthest from its center.
      Index far = 0;
      for (Index i = 1; i < N; ++i)
        if (dist[static_cast<std::size_t>(i)] > dist[static_cast<std::size_t>(far)]) far = i;
      centers.row(c) = rows.row(far);
      dist[static_cast<std::size_t>(far)] = 0.0;
      r.labels[static_cast<std::size_t>(far)] = static_cast<int>(c);
    }
  }
  r.inertia = 0.0;
  for (Index i = 0; i < N; ++i) r.inertia += (rows.row(i) - centers.row(r.labels[static_cast<std::size_t>(i)])).squaredNorm();
  r.centers = std::move(centers);
  return r;
}

}  // namespace detail

/// Lloyd's k-means on the rows of `rows`, best inertia over `restarts`
/// k-means++ initializations. Restart r seeds from stream (seed, KMeansInit, r);
/// ties in inertia keep the earliest restart.
inline KMeansResult kmeans(const Matrix& rows, Index n, std::uint64_t seed, const KMeansOptions& opt = {}) {
  if (n < 1 || n > rows.rows()) throw Error(ErrorKind::InvalidArgument, "cluster count must satisfy 1 <= n <= N");
  if (opt.restarts < 1 || opt.max_iterations < 1)
    throw Error(ErrorKind::InvalidArgument, "restarts and max_iterations must be >= 1");
  KMeansResult best;
  for (Index r = 0; r < opt.restarts; ++r) {
    Rng rng(seed, Stream::KMeansInit, static_cast<std::uint64_t>(r));
    const auto init = detail::kmeanspp_seed(rows, n, rng);
    Matrix centers(n, rows.cols());
    for (Index c = 0; c < n; ++c) centers.row(c) = rows.row(init[static_cast<std::size_t>(c)]);
    KMeansResult res = detail::lloyd(rows, std::move(centers), opt.max_iterations);
    res.restart = r;
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best;
}

}  // namespace s3c
