#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace s3c {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Triplet = Eigen::Triplet<double>;

enum class ErrorKind {
  ZeroColumn,
  InvalidSpec,
  DimTooLarge,
  ParseError,
  ShapeMismatch,
  IoError,
  DegenerateSupport,
  DivergentRegularizer,
  EmptyCandidates,
  ConvergenceFailure,
  LengthMismatch,
  InvalidArgument,
  SchemaError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ZeroColumn: return "ZeroColumn";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::DimTooLarge: return "DimTooLarge";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::DegenerateSupport: return "DegenerateSupport";
    case ErrorKind::DivergentRegularizer: return "DivergentRegularizer";
    case ErrorKind::EmptyCandidates: return "EmptyCandidates";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

/// Library error. `kind()` identifies the failure class; `what()` carries the
/// human-readable detail (positions, column indices, stage names).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Runs body(i) for i in [0, n) over `threads` workers using a static
/// contiguous partition. Each index is visited exactly once, so any body that
/// writes only to slot i produces the same result for every thread count.
template <typename Body>
void parallel_for(Index n, unsigned threads, Body&& body) {
  if (threads <= 1 || n < 2) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  const auto workers = static_cast<Index>(std::min<Index>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const Index lo = n * w / workers;
      const Index hi = n * (w + 1) / workers;
      try {
        for (Index i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace s3c
