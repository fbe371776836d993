#pragma once

#include "s3c/common.hpp"
#include "s3c/consensus.hpp"
#include "s3c/dataset.hpp"
#include "s3c/dropout.hpp"
#include "s3c/harness/config.hpp"
#include "s3c/harness/csv.hpp"
#include "s3c/harness/svg.hpp"
#include "s3c/io.hpp"
#include "s3c/metrics.hpp"
#include "s3c/omp.hpp"
#include "s3c/spectral.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace s3c {

struct Dataset {
  DataMatrix data;
  GroundTruthLabels labels;
  std::string name;
  std::vector<std::string> warnings;
};

/// Synthetic data for one trial seed, or the configured files (identical for
/// every trial).
inline Dataset load_dataset(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
  Dataset ds;
  if (cfg.synthetic) {
    SyntheticSpec spec = cfg.synth;
    spec.seed = trial_seed;
    auto syn = generate_synthetic(spec);
    ds.data = std::move(syn.data);
    ds.labels = std::move(syn.labels);
    ds.name = "synthetic";
    return ds;
  }
  Matrix raw = io::load_matrix(cfg.data_path);
  auto lab = io::load_labels(cfg.labels_path);
  if (lab.labels.size() != raw.cols())
    throw Error(ErrorKind::ShapeMismatch, "labels file has " + std::to_string(lab.labels.size()) +
                                              " entries, data has " + std::to_string(raw.cols()) + " columns");
  if (cfg.pca_dim > 0) raw = pca_project(raw, cfg.pca_dim).projected;
  ds.data = normalize_columns(raw);
  ds.labels = std::move(lab.labels);
  ds.warnings = std::move(lab.warnings);
  ds.name = cfg.data_path.filename().string();
  return ds;
}

struct RunResult {
  ExperimentConfig config;
  Index trial = 0;
  std::uint64_t seed = 0;
  std::string dataset;
  Index points = 0;
  int clusters = 0;
  ClusteringReport report;
  std::vector<int> labels;
  SelfExpressionMatrix C;
  AffinityMatrix affinity;
  Vector eigenvalues;                 // smallest max(k_eig, n) + 1 of the whole graph
  std::vector<double> relative_changes;
  Index outer_iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

namespace harness_detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage ") + name + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("stage ") + name + ": " + e.what());
  }
}

}  // namespace harness_detail

/// Full pipeline for trial `trial` (seed = config.seed + trial): data,
/// self-expression, affinity, normalized-cut clustering, metrics.
inline RunResult run_once(const ExperimentConfig& cfg, Index trial = 0) {
  using namespace harness_detail;
  cfg.validate();
  RunResult r;
  r.config = cfg;
  r.trial = trial;
  r.seed = cfg.seed + static_cast<std::uint64_t>(trial);

  const Dataset ds = stage("data", [&] { return load_dataset(cfg, r.seed); });
  r.dataset = ds.name;
  r.warnings = ds.warnings;
  r.points = ds.data.size();
  r.clusters = ds.labels.clusters();

  auto t0 = Clock::now();
  stage("self_expression", [&] {
    if (cfg.method == Method::Sscomp) {
      r.C = sscomp_matrix(ds.data, cfg.params.sparsity, cfg.params.eps_inner, cfg.threads);
      r.outer_iterations = 1;
      r.converged = true;
      return 0;
    }
    const auto plan = sample_dropout_masks(ds.data.size(), cfg.delta, cfg.subproblems, r.seed);
    ConsensusParams p = cfg.params;
    if (cfg.method == Method::S3comp) p.max_outer = 1;
    auto res = consensus_matrix(ds.data, plan, p, cfg.threads);
    r.C = std::move(res.C);
    r.relative_changes = std::move(res.relative_changes);
    r.outer_iterations = res.outer_iterations;
    r.converged = res.converged;
    return 0;
  });
  r.report.times.self_expression_s = seconds_since(t0);

  t0 = Clock::now();
  stage("spectral", [&] {
    r.affinity = affinity_from_coefficients(r.C);
    SpectralOptions so;
    so.eigenvectors = cfg.k_eig;
    so.seed = r.seed;
    so.kmeans.restarts = cfg.kmeans_restarts;
    so.kmeans.max_iterations = cfg.kmeans_iterations;
    r.labels = spectral_cluster(r.affinity, r.clusters, so).labels;
    const Index k = std::min<Index>(std::max<Index>(cfg.k_eig, r.clusters) + 1, r.points);
    r.eigenvalues = eigen_gap_report(r.affinity, k);
    return 0;
  });
  r.report.times.spectral_s = seconds_since(t0);

  t0 = Clock::now();
  stage("metrics", [&] {
    r.report.accuracy_pct = clustering_accuracy(r.labels, ds.labels);
    r.report.sre_pct = subspace_preserving_error(r.C, ds.labels);
    const auto conn = connectivity(r.affinity, ds.labels);
    r.report.conn_min = conn.min;
    r.report.conn_mean = conn.mean;
    r.report.per_cluster_lambda2 = conn.lambda2;
    r.report.singleton_clusters = conn.singleton;
    return 0;
  });
  r.report.times.metrics_s = seconds_since(t0);
  r.report.wall_time_s = r.report.times.total();
  return r;
}

// ---------------------------------------------------------------------------
// CSV rows

/// Parameter echo shared by all per-run rows.
inline std::vector<std::string> param_header() {
  return {"method", "dataset", "N",   "n",         "Ni",        "s",         "lambda",    "delta",
          "T",      "eps_inner", "eps_outer", "max_outer", "averaging", "union_selection", "k_eig", "seed",
          "trial"};
}

inline std::vector<std::string> param_fields(const ExperimentConfig& c, const std::string& dataset, Index N,
                                             int n, std::uint64_t seed, Index trial) {
  using csv::num;
  return {to_string(c.method),
          dataset,
          num(N),
          num(n),
          c.synthetic ? num(c.synth.points_per_subspace) : std::string("NA"),
          num(c.params.sparsity),
          num(c.params.lambda),
          num(c.delta),
          num(c.subproblems),
          num(c.params.eps_inner),
          num(c.params.eps_outer),
          num(c.params.max_outer),
          to_string(c.params.averaging),
          c.params.union_selection ? "1" : "0",
          num(c.k_eig),
          num(seed),
          num(trial)};
}

inline std::vector<std::string> metric_header() {
  return {"accuracy_pct", "sre_pct", "conn_min", "conn_mean", "nnz", "nnz_per_col", "eig_gap", "outer_iterations",
          "converged", "status"};
}

/// Gap between the n-th and (n+1)-th smallest Laplacian eigenvalues.
inline double eigen_gap(const RunResult& r) {
  const auto n = static_cast<Index>(r.clusters);
  return r.eigenvalues.size() > n ? r.eigenvalues(n) - r.eigenvalues(n - 1)
                                  : std::numeric_limits<double>::quiet_NaN();
}

inline std::vector<std::string> metric_fields(const RunResult& r) {
  using csv::num;
  return {num(r.report.accuracy_pct),
          num(r.report.sre_pct),
          num(r.report.conn_min),
          num(r.report.conn_mean),
          num(static_cast<Index>(r.C.nonZeros())),
          num(static_cast<double>(r.C.nonZeros()) / static_cast<double>(r.points)),
          num(eigen_gap(r)),
          num(r.outer_iterations),
          r.converged ? "1" : "0",
          "ok"};
}

inline std::vector<std::string> failed_metric_fields(const std::string& message) {
  std::vector<std::string> f(metric_header().size(), "nan");
  f.back() = "error: " + message;
  return f;
}

inline std::vector<std::string> time_header() { return {"t_self_expression_s", "t_spectral_s", "t_metrics_s", "t_total_s"}; }

inline std::vector<std::string> time_fields(const StageTimes& t) {
  return {csv::num(t.self_expression_s), csv::num(t.spectral_s), csv::num(t.metrics_s), csv::num(t.total())};
}

template <typename... Parts>
std::vector<std::string> concat(Parts&&... parts) {
  std::vector<std::string> out;
  (out.insert(out.end(), parts.begin(), parts.end()), ...);
  return out;
}

/// Deterministic report row (no timings).
inline std::vector<std::string> report_row(const RunResult& r) {
  return concat(param_fields(r.config, r.dataset, r.points, r.clusters, r.seed, r.trial), metric_fields(r));
}

inline csv::Table report_table() {
  csv::Table t;
  t.schema = "run/v1";
  t.header = concat(param_header(), metric_header());
  return t;
}

inline csv::Table timings_table() {
  csv::Table t;
  t.schema = "timings/v1";
  t.header = concat(std::vector<std::string>{"method", "seed", "trial"}, time_header());
  return t;
}

inline csv::Table eigenvalue_table(const Vector& values) {
  csv::Table t;
  t.schema = "eigenvalues/v1";
  t.header = {"index", "eigenvalue"};
  for (Index i = 0; i < values.size(); ++i) t.rows.push_back({csv::num(i + 1), csv::num(values(i))});
  return t;
}

inline csv::Table lambda2_table(const ClusteringReport& rep) {
  csv::Table t;
  t.schema = "lambda2/v1";
  t.header = {"cluster", "lambda2", "singleton"};
  for (std::size_t i = 0; i < rep.per_cluster_lambda2.size(); ++i)
    t.rows.push_back({csv::num(static_cast<Index>(i + 1)), csv::num(rep.per_cluster_lambda2[i]),
                      rep.singleton_clusters.size() > i && rep.singleton_clusters[i] ? "1" : "0"});
  return t;
}

inline csv::Table triplet_table(const SparseMatrix& m) {
  csv::Table t;
  t.schema = "triplets/v1";
  t.header = {"row", "col", "value"};
  t.rows.push_back({csv::num(m.rows()), csv::num(m.cols()), "0"});  // shape record
  for (Index c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it)
      t.rows.push_back({csv::num(it.row() + 1), csv::num(it.col() + 1), csv::num(it.value())});
  return t;
}

/// Inverse of triplet_table. The first data row holds the shape.
inline SparseMatrix sparse_from_triplets(const csv::Table& t) {
  if (csv::schema_kind(t) != "triplets" || t.rows.empty()) throw Error(ErrorKind::SchemaError, "not a triplets table");
  const auto rows = t.numbers("row"), cols = t.numbers("col"), vals = t.numbers("value");
  SparseMatrix m(static_cast<Index>(rows[0]), static_cast<Index>(cols[0]));
  std::vector<Triplet> trips;
  for (std::size_t i = 1; i < rows.size(); ++i)
    trips.emplace_back(static_cast<Index>(rows[i]) - 1, static_cast<Index>(cols[i]) - 1, vals[i]);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

inline csv::Table trace_table() {
  csv::Table t;
  t.schema = "trace/v1";
  t.header = concat(param_header(), std::vector<std::string>{"iteration", "relative_change", "outer_iterations", "converged"});
  return t;
}

inline void append_trace_rows(csv::Table& t, const RunResult& r) {
  const auto params = param_fields(r.config, r.dataset, r.points, r.clusters, r.seed, r.trial);
  for (std::size_t k = 0; k < r.relative_changes.size(); ++k)
    t.rows.push_back(concat(params, std::vector<std::string>{csv::num(static_cast<Index>(k + 2)),
                                                             csv::num(r.relative_changes[k]),
                                                             csv::num(r.outer_iterations), r.converged ? "1" : "0"}));
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream os(tmp);
    if (!os) throw Error(ErrorKind::IoError, "cannot open " + tmp.string());
    os << text;
  }
  std::filesystem::rename(tmp, path);
}

/// Per-run artifacts: labels, eigenvalues, per-cluster lambda2, and
/// optionally C and the affinity as 1-based triplets.
inline void write_run_artifacts(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string tag = to_string(r.config.method) + "_trial" + std::to_string(r.trial);
  io::save_labels(r.labels, dir / ("labels_" + tag + ".txt"));
  csv::write_file(eigenvalue_table(r.eigenvalues), dir / ("eigenvalues_" + tag + ".csv"));
  csv::write_file(lambda2_table(r.report), dir / ("lambda2_" + tag + ".csv"));
  if (r.config.dump_matrices) {
    csv::write_file(triplet_table(r.C), dir / ("C_" + tag + ".csv"));
    csv::write_file(triplet_table(r.affinity.matrix()), dir / ("affinity_" + tag + ".csv"));
  }
}

struct MetricMeans {
  double accuracy = 0, sre = 0, conn_min = 0, conn_mean = 0, nnz_per_col = 0, eig_gap = 0, time = 0;
  Index ok = 0, failed = 0;
};

/// Means over the successful rows of a run/sweep table, straight from the
/// formatted fields so they agree exactly with what a reader recomputes.
inline MetricMeans mean_of_rows(const csv::Table& t, const std::vector<std::size_t>& rows) {
  MetricMeans m;
  const auto status = static_cast<std::size_t>(t.column("status"));
  const bool timed = std::find(t.header.begin(), t.header.end(), "t_total_s") != t.header.end();
  auto val = [&](std::size_t r, const char* col) {
    return io::detail::parse_double(t.rows[r][static_cast<std::size_t>(t.column(col))], r, 0);
  };
  for (auto r : rows) {
    if (t.rows[r][status] != "ok") {
      ++m.failed;
      continue;
    }
    ++m.ok;
    m.accuracy += val(r, "accuracy_pct");
    m.sre += val(r, "sre_pct");
    m.conn_min += val(r, "conn_min");
    m.conn_mean += val(r, "conn_mean");
    m.nnz_per_col += val(r, "nnz_per_col");
    m.eig_gap += val(r, "eig_gap");
    if (timed) m.time += val(r, "t_total_s");
  }
  if (m.ok > 0) {
    const double k = static_cast<double>(m.ok);
    m.accuracy /= k;
    m.sre /= k;
    m.conn_min /= k;
    m.conn_mean /= k;
    m.nnz_per_col /= k;
    m.eig_gap /= k;
    m.time /= k;
  }
  return m;
}

inline std::vector<std::string> summary_header() {
  return {"trials_ok", "trials_failed", "mean_accuracy_pct", "mean_sre_pct", "mean_conn_min", "mean_conn_mean",
          "mean_nnz_per_col", "mean_eig_gap", "mean_t_total_s"};
}

inline std::vector<std::string> summary_fields(const MetricMeans& m) {
  using csv::num;
  return {num(m.ok),          num(m.failed),      num(m.accuracy), num(m.sre), num(m.conn_min),
          num(m.conn_mean),   num(m.nnz_per_col), num(m.eig_gap),  num(m.time)};
}

// ---------------------------------------------------------------------------
// Experiments

struct ClusterRunOutput {
  csv::Table report;
  csv::Table timings;
  csv::Table summary;
  std::vector<RunResult> runs;
};

/// `cluster`: run_once for each trial, write report/timings/summary and the
/// per-run artifacts under config.output_dir.
inline ClusterRunOutput run_cluster(const ExperimentConfig& cfg, bool write = true) {
  ClusterRunOutput out;
  out.report = report_table();
  out.timings = timings_table();
  for (Index t = 0; t < cfg.trials; ++t) {
    RunResult r = run_once(cfg, t);
    out.report.rows.push_back(report_row(r));
    out.timings.rows.push_back(concat(
        std::vector<std::string>{to_string(cfg.method), csv::num(r.seed), csv::num(t)}, time_fields(r.report.times)));
    if (write) write_run_artifacts(r, cfg.output_dir);
    out.runs.push_back(std::move(r));
  }
  out.summary.schema = "summary/v1";
  out.summary.header = concat(std::vector<std::string>{"method"}, summary_header());
  std::vector<std::size_t> all(out.report.rows.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  MetricMeans m = mean_of_rows(out.report, all);
  for (const auto& r : out.runs) m.time += r.report.wall_time_s / static_cast<double>(out.runs.size());
  out.summary.rows.push_back(concat(std::vector<std::string>{to_string(cfg.method)}, summary_fields(m)));
  if (write) {
    csv::write_file(out.report, cfg.output_dir / "report.csv");
    csv::write_file(out.timings, cfg.output_dir / "timings.csv");
    csv::write_file(out.summary, cfg.output_dir / "summary.csv");
  }
  return out;
}

struct SweepOutput {
  csv::Table rows;
  csv::Table summary;
};

inline ExperimentConfig config_for_ni(const ExperimentConfig& base, int ni, Method method) {
  ExperimentConfig c = base;
  c.synthetic = true;
  c.synth.points_per_subspace = ni;
  c.method = method;
  if (base.use_ni_table)
    if (const auto* e = synthetic_parameters(ni)) {
      c.delta = e->delta;
      c.params.lambda = e->lambda;
    }
  return c;
}

/// `sweep-ni`: every (N_i, method) cell over all trials. Rows are ordered by
/// N_i, then method, then trial. Failed runs produce a row whose status
/// column carries the stage-tagged error.
inline SweepOutput run_sweep_ni(const ExperimentConfig& base, bool write = true) {
  SweepOutput out;
  out.rows.schema = "sweep_ni/v1";
  out.rows.header = concat(param_header(), metric_header(), time_header());
  out.summary.schema = "sweep_ni_summary/v1";
  out.summary.header = concat(std::vector<std::string>{"Ni", "method", "delta", "lambda"}, summary_header());
  for (int ni : base.ni_list)
    if (ni > kDeskScaleMaxNi && !base.full_range)
      throw Error(ErrorKind::InvalidArgument,
                  "N_i = " + std::to_string(ni) + " exceeds the desk-scale cap; pass --full-range to run it");

  for (int ni : base.ni_list)
    for (Method m : base.sweep_methods) {
      const ExperimentConfig c = config_for_ni(base, ni, m);
      std::vector<std::size_t> cell;
      for (Index t = 0; t < c.trials; ++t) {
        cell.push_back(out.rows.rows.size());
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(t);
        try {
          const RunResult r = run_once(c, t);
          out.rows.rows.push_back(concat(report_row(r), time_fields(r.report.times)));
          if (write && c.dump_matrices) write_run_artifacts(r, c.output_dir / ("Ni" + std::to_string(ni)));
        } catch (const Error& e) {
          const int n = c.synth.subspaces;
          out.rows.rows.push_back(concat(param_fields(c, "synthetic", Index{ni} * n, n, seed, t),
                                         failed_metric_fields(e.what()),
                                         std::vector<std::string>(time_header().size(), "nan")));
        }
      }
      out.summary.rows.push_back(concat(
          std::vector<std::string>{csv::num(ni), to_string(m), csv::num(c.delta), csv::num(c.params.lambda)},
          summary_fields(mean_of_rows(out.rows, cell))));
    }

  if (write) {
    csv::write_file(out.rows, base.output_dir / "sweep_ni.csv");
    csv::write_file(out.summary, base.output_dir / "sweep_ni_summary.csv");
  }
  return out;
}

struct GridOutput {
  csv::Table rows;
  Matrix accuracy;      // delta x T means
  Matrix connectivity;  // conn_min means
  Matrix sp_rate;       // 100 - sre
  csv::Table trend;
};

inline csv::Table grid_matrix_table(const std::vector<double>& deltas, const std::vector<Index>& ts,
                                    const Matrix& m, const std::string& metric) {
  csv::Table t;
  t.schema = "grid_matrix/v1";
  t.header = {"delta"};
  for (Index T : ts) t.header.push_back("T=" + std::to_string(T));
  for (std::size_t r = 0; r < deltas.size(); ++r) {
    std::vector<std::string> row{csv::num(deltas[r])};
    for (Index c = 0; c < m.cols(); ++c) row.push_back(csv::num(m(static_cast<Index>(r), c)));
    t.rows.push_back(std::move(row));
  }
  (void)metric;
  return t;
}

/// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const Vector& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y(static_cast<Index>(i));
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y(static_cast<Index>(i)) - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

/// `grid-dt`: the configured method over every (delta, T) cell. Emits the
/// per-trial rows, three delta x T mean matrices, and a per-T trend row
/// (least-squares slope of mean connectivity against delta).
inline GridOutput run_grid_delta_t(const ExperimentConfig& base, bool write = true) {
  GridOutput out;
  const auto R = static_cast<Index>(base.delta_list.size());
  const auto K = static_cast<Index>(base.t_list.size());
  out.rows.schema = "grid_dt/v1";
  out.rows.header = concat(param_header(), metric_header(), time_header());
  out.accuracy = Matrix::Constant(R, K, std::numeric_limits<double>::quiet_NaN());
  out.connectivity = out.accuracy;
  out.sp_rate = out.accuracy;
  for (Index r = 0; r < R; ++r)
    for (Index k = 0; k < K; ++k) {
      ExperimentConfig c = base;
      c.delta = base.delta_list[static_cast<std::size_t>(r)];
      c.subproblems = base.t_list[static_cast<std::size_t>(k)];
      std::vector<std::size_t> cell;
      for (Index t = 0; t < c.trials; ++t) {
        cell.push_back(out.rows.rows.size());
        try {
          const RunResult res = run_once(c, t);
          out.rows.rows.push_back(concat(report_row(res), time_fields(res.report.times)));
        } catch (const Error& e) {
          const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(t);
          const int n = c.synthetic ? c.synth.subspaces : 0;
          out.rows.rows.push_back(concat(param_fields(c, c.synthetic ? "synthetic" : c.data_path.string(), 0, n, seed, t),
                                         failed_metric_fields(e.what()),
                                         std::vector<std::string>(time_header().size(), "nan")));
        }
      }
      const MetricMeans m = mean_of_rows(out.rows, cell);
      if (m.ok > 0) {
        out.accuracy(r, k) = m.accuracy;
        out.connectivity(r, k) = m.conn_min;
        out.sp_rate(r, k) = 100.0 - m.sre;
      }
    }

  out.trend.schema = "grid_trend/v1";
  out.trend.header = {"T", "conn_slope_vs_delta", "nondecreasing_steps", "steps"};
  for (Index k = 0; k < K; ++k) {
    Index up = 0;
    for (Index r = 1; r < R; ++r) up += out.connectivity(r, k) >= out.connectivity(r - 1, k) ? 1 : 0;
    out.trend.rows.push_back({csv::num(base.t_list[static_cast<std::size_t>(k)]),
                              csv::num(R > 1 ? ls_slope(base.delta_list, out.connectivity.col(k)) : 0.0),
                              csv::num(up), csv::num(std::max<Index>(R - 1, 0))});
  }

  if (write) {
    const auto& dir = base.output_dir;
    csv::write_file(out.rows, dir / "grid_dt.csv");
    csv::write_file(grid_matrix_table(base.delta_list, base.t_list, out.accuracy, "accuracy"), dir / "grid_accuracy.csv");
    csv::write_file(grid_matrix_table(base.delta_list, base.t_list, out.connectivity, "connectivity"),
                    dir / "grid_connectivity.csv");
    csv::write_file(grid_matrix_table(base.delta_list, base.t_list, out.sp_rate, "sp_rate"), dir / "grid_sp_rate.csv");
    csv::write_file(out.trend, dir / "grid_trend.csv");
  }
  return out;
}

/// `trace`: matrix-level relative change per outer iteration of S3COMP-C for
/// each trial.
inline csv::Table run_convergence_trace(const ExperimentConfig& base, bool write = true) {
  if (base.method != Method::S3compC)
    throw Error(ErrorKind::InvalidArgument, "trace requires method s3comp_c");
  csv::Table t = trace_table();
  for (Index k = 0; k < base.trials; ++k) append_trace_rows(t, run_once(base, k));
  if (write) csv::write_file(t, base.output_dir / "trace.csv");
  return t;
}

// ---------------------------------------------------------------------------
// Plots

/// Renders SVGs for a harness CSV according to its schema. Returns the paths
/// written.
inline std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& csv_path,
                                                     const std::filesystem::path& out_dir) {
  const csv::Table t = csv::read_file(csv_path);
  const std::string kind = csv::schema_kind(t);
  const std::string stem = csv_path.stem().string();
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& svg) {
    const auto p = out_dir / name;
    write_text(p, svg);
    written.push_back(p);
  };

  if (kind == "eigenvalues") {
    emit(stem + ".svg", svg::line_plot("Smallest Laplacian eigenvalues", "index", "eigenvalue",
                                       {{"eigenvalues", t.numbers("index"), t.numbers("eigenvalue")}}));
  } else if (kind == "lambda2") {
    emit(stem + ".svg", svg::histogram("Per-cluster algebraic connectivity", "lambda2", t.numbers("lambda2")));
  } else if (kind == "sweep_ni_summary") {
    const auto ni = t.numbers("Ni");
    const auto methods = t.strings("method");
    const auto acc = t.numbers("mean_accuracy_pct"), conn = t.numbers("mean_conn_min"), tm = t.numbers("mean_t_total_s");
    std::map<std::string, std::array<svg::Series, 3>> by;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < ni.size(); ++i) {
      if (!by.count(methods[i])) order.push_back(methods[i]);
      auto& s = by[methods[i]];
      for (int k = 0; k < 3; ++k) {
        s[static_cast<std::size_t>(k)].name = methods[i];
        s[static_cast<std::size_t>(k)].x.push_back(ni[i]);
      }
      s[0].y.push_back(acc[i]);
      s[1].y.push_back(conn[i]);
      s[2].y.push_back(tm[i]);
    }
    const char* titles[] = {"Accuracy", "Connectivity", "Time"};
    const char* ylabels[] = {"accuracy (%)", "connectivity c", "seconds"};
    const char* files[] = {"_accuracy.svg", "_connectivity.svg", "_time.svg"};
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<svg::Series> series;
      for (const auto& m : order) series.push_back(by[m][k]);
      emit(stem + files[k], svg::line_plot(titles[k], "N_i", ylabels[k], series));
    }
  } else if (kind == "sweep_ni") {
    // Per-trial table: aggregate on the fly and reuse the summary renderer.
    throw Error(ErrorKind::SchemaError, "plot the sweep_ni_summary.csv file instead of per-trial rows");
  } else if (kind == "grid_matrix") {
    std::vector<double> cols;
    for (std::size_t c = 1; c < t.header.size(); ++c) cols.push_back(std::stod(t.header[c].substr(2)));
    const auto rows = t.numbers("delta");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c)
        m(static_cast<Index>(r), static_cast<Index>(c)) = io::detail::parse_double(t.rows[r][c + 1], r + 3, c + 2);
    emit(stem + ".svg", svg::heatmap(stem, "delta", "T", rows, cols, m));
  } else if (kind == "trace") {
    const auto trial = t.numbers("trial"), it = t.numbers("iteration"), rc = t.numbers("relative_change");
    std::map<double, svg::Series> by;
    for (std::size_t i = 0; i < trial.size(); ++i) {
      auto& s = by[trial[i]];
      s.name = "trial " + std::to_string(static_cast<long>(trial[i]));
      s.x.push_back(it[i]);
      s.y.push_back(std::log10(std::max(rc[i], 1e-300)));
    }
    std::vector<svg::Series> series;
    for (auto& [k, s] : by) series.push_back(std::move(s));
    emit(stem + ".svg", svg::line_plot("Relative change of C", "outer iteration", "log10 relative change", series));
  } else {
    throw Error(ErrorKind::SchemaError, "no plot defined for schema '" + t.schema + "'");
  }
  return written;
}

}  // namespace s3c
