#include "helpers.hpp"

#include "s3c/harness/config.hpp"
#include "s3c/harness/experiment.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace s3c;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "s3c_harness_test" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ExperimentConfig small_synthetic(Method m, int ni = 20) {
  ExperimentConfig c;
  c.method = m;
  c.synth.points_per_subspace = ni;
  c.params.max_outer = 3;
  c.subproblems = 6;
  c.kmeans_restarts = 5;
  return c;
}

}  // namespace

TEST(RunOnce, OrthogonalBlocksAreSeparable) {
  const auto dir = scratch("blocks");
  // Three mutually orthogonal 3-dimensional subspaces in R^9.
  Matrix raw = Matrix::Zero(9, 30);
  const Matrix g = test::gaussian(3, 30, 800);
  std::vector<int> labels;
  for (Index j = 0; j < 30; ++j) {
    const Index b = j / 10;
    raw.block(3 * b, j, 3, 1) = g.col(j);
    labels.push_back(static_cast<int>(b));
  }
  io::save_matrix(raw, dir / "data.csv");
  io::save_labels(labels, dir / "labels.txt");

  ExperimentConfig c;
  c.method = Method::Sscomp;
  apply_setting(c, "data.path", (dir / "data.csv").string());
  apply_setting(c, "data.labels", (dir / "labels.txt").string());
  c.params.sparsity = 3;
  const auto r = run_once(c);
  EXPECT_DOUBLE_EQ(r.report.accuracy_pct, 100.0);
  EXPECT_EQ(r.report.sre_pct, 0.0);
  EXPECT_EQ(r.points, 30);
  EXPECT_EQ(r.clusters, 3);
}

TEST(RunOnce, RepeatedRunsGiveIdenticalRows) {
  for (Method m : {Method::Sscomp, Method::S3comp, Method::S3compC}) {
    const auto c = small_synthetic(m);
    const auto a = csv::format_row(report_row(run_once(c, 1)));
    const auto b = csv::format_row(report_row(run_once(c, 1)));
    EXPECT_EQ(a, b);
  }
}

TEST(RunOnce, ThreadCountDoesNotChangeRows) {
  auto c = small_synthetic(Method::S3compC);
  const auto a = csv::format_row(report_row(run_once(c)));
  c.threads = 4;
  EXPECT_EQ(csv::format_row(report_row(run_once(c))), a);
}

TEST(RunOnce, LargestNiSettingRespectsSupportBound) {
  ExperimentConfig c = config_for_ni(ExperimentConfig{}, 320, Method::S3compC);
  const auto r = run_once(c);
  EXPECT_EQ(c.delta, 0.4);
  EXPECT_EQ(c.params.lambda, 0.7);
  EXPECT_LE(r.C.nonZeros(), c.params.sparsity * c.subproblems * r.points);
}

TEST(RunOnce, StageTaggedErrors) {
  ExperimentConfig c = small_synthetic(Method::S3compC, 2);
  c.synth.subspaces = 1;
  c.params.sparsity = 5;  // only two points, so s >= N
  c.method = Method::Sscomp;
  try {
    run_once(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("stage self_expression"), std::string::npos) << e.what();
  }
}

TEST(RunOnce, ReportInvariants) {
  const auto r = run_once(small_synthetic(Method::S3compC, 30));
  EXPECT_GE(r.report.accuracy_pct, 0.0);
  EXPECT_LE(r.report.accuracy_pct, 100.0);
  EXPECT_GE(r.report.sre_pct, 0.0);
  EXPECT_LE(r.report.sre_pct, 100.0);
  EXPECT_GE(r.report.conn_min, 0.0);
  EXPECT_LE(r.report.conn_min, r.report.conn_mean);
  EXPECT_EQ(r.report.per_cluster_lambda2.size(), 5u);
}

TEST(Sweep, EmptyListGivesHeaderOnly) {
  ExperimentConfig c;
  c.ni_list.clear();
  c.output_dir = scratch("sweep_empty");
  const auto out = run_sweep_ni(c);
  EXPECT_TRUE(out.rows.rows.empty());
  const auto t = csv::read_file(c.output_dir / "sweep_ni.csv");
  EXPECT_EQ(t.schema, "sweep_ni/v1");
  EXPECT_FALSE(t.header.empty());
  EXPECT_TRUE(t.rows.empty());
}

TEST(Sweep, PerNiParametersRowsPerNiAndTrial) {
  ExperimentConfig c;
  c.sweep_methods = {Method::Sscomp};
  c.trials = 2;
  c.output_dir = scratch("sweep_t7");
  const auto out = run_sweep_ni(c);
  ASSERT_EQ(out.rows.rows.size(), 5u * 2u);
  const auto ni = out.rows.numbers("Ni"), delta = out.rows.numbers("delta"), lambda = out.rows.numbers("lambda");
  for (std::size_t r = 0; r < ni.size(); ++r) {
    const auto* e = synthetic_parameters(static_cast<int>(ni[r]));
    ASSERT_NE(e, nullptr);
    EXPECT_EQ(delta[r], e->delta);
    EXPECT_EQ(lambda[r], e->lambda);
  }
  for (const char* f : {"sweep_ni_summary_accuracy.svg", "sweep_ni_summary_connectivity.svg", "sweep_ni_summary_time.svg"})
    EXPECT_FALSE(std::filesystem::exists(c.output_dir / f));  // plots only on request
  const auto files = emit_plots(c.output_dir / "sweep_ni_summary.csv", c.output_dir);
  EXPECT_EQ(files.size(), 3u);
}

TEST(Sweep, FullRangeGuard) {
  ExperimentConfig c;
  c.ni_list = {577};
  EXPECT_THROW(run_sweep_ni(c, false), Error);
}

TEST(Sweep, FailedCellsAreMarkedAndRunContinues) {
  ExperimentConfig c;
  c.sweep_methods = {Method::Sscomp};
  c.ni_list = {1, 20};  // N_i = 1 gives N = 5 points, below s + 1
  c.use_ni_table = false;
  const auto out = run_sweep_ni(c, false);
  ASSERT_EQ(out.rows.rows.size(), 2u);
  const auto status = out.rows.strings("status");
  EXPECT_EQ(status[0].rfind("error: ", 0), 0u);
  EXPECT_EQ(status[1], "ok");
}

TEST(Sweep, ConnectivityRecomputableFromDump) {
  ExperimentConfig c;
  c.sweep_methods = {Method::S3compC};
  c.ni_list = {30};
  c.params.max_outer = 3;
  c.dump_matrices = true;
  c.output_dir = scratch("sweep_dump");
  const auto out = run_sweep_ni(c);
  const auto row_conn = out.rows.numbers("conn_min");
  const auto A = sparse_from_triplets(csv::read_file(c.output_dir / "Ni30" / "affinity_s3comp_c_trial0.csv"));
  SyntheticSpec spec = c.synth;
  spec.points_per_subspace = 30;
  spec.seed = c.seed;
  const auto truth = generate_synthetic(spec).labels;
  EXPECT_NEAR(connectivity_min(AffinityMatrix(A), truth), row_conn[0], 1e-8);
  // The dumped C reproduces the affinity as well.
  const auto C = sparse_from_triplets(csv::read_file(c.output_dir / "Ni30" / "C_s3comp_c_trial0.csv"));
  EXPECT_EQ((affinity_from_coefficients(C).matrix() - A).norm(), 0.0);
}

TEST(Sweep, SummaryMatchesRowMeans) {
  ExperimentConfig c;
  c.sweep_methods = {Method::Sscomp, Method::S3comp};
  c.ni_list = {20, 30};
  c.trials = 3;
  c.subproblems = 5;
  const auto out = run_sweep_ni(c, false);
  const auto ni = out.rows.numbers("Ni");
  const auto method = out.rows.strings("method");
  const auto acc = out.rows.numbers("accuracy_pct"), conn = out.rows.numbers("conn_min");
  const auto s_ni = out.summary.numbers("Ni");
  const auto s_method = out.summary.strings("method");
  const auto s_acc = out.summary.numbers("mean_accuracy_pct"), s_conn = out.summary.numbers("mean_conn_min");
  ASSERT_EQ(s_ni.size(), 4u);
  for (std::size_t k = 0; k < s_ni.size(); ++k) {
    double a = 0, cc = 0;
    int n = 0;
    for (std::size_t r = 0; r < ni.size(); ++r)
      if (ni[r] == s_ni[k] && method[r] == s_method[k]) {
        a += acc[r];
        cc += conn[r];
        ++n;
      }
    ASSERT_EQ(n, 3);
    EXPECT_NEAR(s_acc[k], a / n, 1e-12);
    EXPECT_NEAR(s_conn[k], cc / n, 1e-12);
  }
}

TEST(Sweep, RowsCarryEnoughToReproduce) {
  ExperimentConfig c;
  c.sweep_methods = {Method::S3comp};
  c.ni_list = {20};
  c.trials = 2;
  c.subproblems = 5;
  const auto out = run_sweep_ni(c, false);
  // Rebuild a config from the echoed fields of the second row and rerun.
  const auto& row = out.rows.rows[1];
  ExperimentConfig r;
  auto field = [&](const char* name) { return row[static_cast<std::size_t>(out.rows.column(name))]; };
  apply_setting(r, "method", field("method"));
  apply_setting(r, "data.Ni", field("Ni"));
  apply_setting(r, "solver.s", field("s"));
  apply_setting(r, "solver.lambda", field("lambda"));
  apply_setting(r, "dropout.delta", field("delta"));
  apply_setting(r, "dropout.T", field("T"));
  apply_setting(r, "solver.eps_inner", field("eps_inner"));
  apply_setting(r, "solver.eps_outer", field("eps_outer"));
  apply_setting(r, "solver.max_outer", field("max_outer"));
  apply_setting(r, "solver.averaging", field("averaging"));
  apply_setting(r, "solver.union_selection", field("union_selection"));
  apply_setting(r, "spectral.k_eig", field("k_eig"));
  const auto seed = std::stoull(field("seed"));
  const auto trial = std::stoll(field("trial"));
  r.seed = seed - static_cast<std::uint64_t>(trial);
  const auto again = concat(report_row(run_once(r, trial)), std::vector<std::string>(4, ""));
  for (std::size_t i = 0; i + 4 < row.size(); ++i) EXPECT_EQ(again[i], row[i]) << out.rows.header[i];
}

TEST(Grid, FullGridShape) {
  // N_i = 20 so that no mask at delta = 0.9 leaves a column without
  // candidates (that case is an error cell, covered elsewhere).
  ExperimentConfig c;
  c.synth.points_per_subspace = 20;
  c.params.max_outer = 1;
  c.kmeans_restarts = 2;
  c.output_dir = scratch("grid_full");
  const auto out = run_grid_delta_t(c);
  for (const Matrix* m : {&out.accuracy, &out.connectivity, &out.sp_rate}) {
    EXPECT_EQ(m->rows(), 9);
    EXPECT_EQ(m->cols(), 20);
    EXPECT_TRUE(m->allFinite());
  }
  const auto t = csv::read_file(c.output_dir / "grid_connectivity.csv");
  EXPECT_EQ(t.rows.size(), 9u);
  EXPECT_EQ(t.header.size(), 21u);
  EXPECT_EQ(emit_plots(c.output_dir / "grid_sp_rate.csv", c.output_dir).size(), 1u);
}

TEST(Grid, SingleCellEqualsRunOnceMean) {
  ExperimentConfig c = small_synthetic(Method::S3compC);
  c.delta_list = {0.3};
  c.t_list = {7};
  c.trials = 2;
  const auto out = run_grid_delta_t(c, false);
  ExperimentConfig one = c;
  one.delta = 0.3;
  one.subproblems = 7;
  const auto a = run_once(one, 0), b = run_once(one, 1);
  EXPECT_NEAR(out.accuracy(0, 0), (a.report.accuracy_pct + b.report.accuracy_pct) / 2, 1e-12);
  EXPECT_NEAR(out.connectivity(0, 0), (a.report.conn_min + b.report.conn_min) / 2, 1e-12);
  EXPECT_NEAR(out.sp_rate(0, 0), 100.0 - (a.report.sre_pct + b.report.sre_pct) / 2, 1e-12);
}

TEST(Grid, ConnectivityTrendsUpWithDropoutRate) {
  // Ten trials per cell; the mean connectivity should rise with delta for
  // each T >= 10.
  ExperimentConfig c;
  c.synth.points_per_subspace = 60;
  c.params.lambda = 0.7;
  c.params.max_outer = 3;
  c.kmeans_restarts = 3;
  c.trials = 10;
  c.delta_list = {0.1, 0.3, 0.5, 0.7, 0.9};
  c.t_list = {10, 20};
  const auto out = run_grid_delta_t(c, false);
  const auto slope = out.trend.numbers("conn_slope_vs_delta");
  for (std::size_t k = 0; k < slope.size(); ++k) EXPECT_GT(slope[k], 0.0) << "T=" << c.t_list[k];
}

TEST(Trace, LengthAndConvergedFlag) {
  ExperimentConfig c = small_synthetic(Method::S3compC, 30);
  c.params.max_outer = 6;
  c.trials = 3;
  const auto t = run_convergence_trace(c, false);
  const auto trial = t.numbers("trial"), change = t.numbers("relative_change"), conv = t.numbers("converged");
  for (int k = 0; k < 3; ++k) {
    std::vector<double> series;
    bool converged = false;
    for (std::size_t r = 0; r < trial.size(); ++r)
      if (trial[r] == k) {
        series.push_back(change[r]);
        converged = conv[r] != 0.0;
      }
    EXPECT_LE(series.size(), 6u);
    if (converged) {
      EXPECT_LT(series.back(), c.params.eps_outer);
    }
  }
}

TEST(Trace, RequiresConsensusMethod) {
  EXPECT_THROW(run_convergence_trace(small_synthetic(Method::S3comp), false), Error);
}

TEST(Trace, DecreasesAfterSecondIterationAtDeskScale) {
  ExperimentConfig c = config_for_ni(ExperimentConfig{}, 320, Method::S3compC);
  c.trials = 10;
  c.threads = std::max(1u, std::thread::hardware_concurrency());
  const auto t = run_convergence_trace(c, false);
  const auto trial = t.numbers("trial"), it = t.numbers("iteration"), change = t.numbers("relative_change");
  int decreasing = 0;
  for (int k = 0; k < 10; ++k) {
    std::vector<double> s;
    for (std::size_t r = 0; r < trial.size(); ++r)
      if (trial[r] == k) s.push_back(change[r]);
    bool ok = true;
    for (std::size_t i = 1; i < s.size(); ++i) ok = ok && s[i] < s[i - 1];
    decreasing += ok ? 1 : 0;
  }
  EXPECT_GE(decreasing, 8);
}

TEST(Plots, EigenvalueAndLambda2) {
  const auto dir = scratch("plots");
  ExperimentConfig c = small_synthetic(Method::Sscomp);
  c.output_dir = dir;
  run_cluster(c);
  const auto eig = emit_plots(dir / "eigenvalues_sscomp_trial0.csv", dir);
  ASSERT_EQ(eig.size(), 1u);
  EXPECT_NE(slurp(eig[0]).find("<polyline"), std::string::npos);
  const auto hist = emit_plots(dir / "lambda2_sscomp_trial0.csv", dir);
  ASSERT_EQ(hist.size(), 1u);
  EXPECT_NE(slurp(hist[0]).find("<rect"), std::string::npos);
  // Histogram input equals the per-cluster lambda2 of the run.
  const auto l2 = csv::read_file(dir / "lambda2_sscomp_trial0.csv").numbers("lambda2");
  const auto r = run_once(c);
  ASSERT_EQ(l2.size(), r.report.per_cluster_lambda2.size());
  for (std::size_t i = 0; i < l2.size(); ++i) EXPECT_EQ(l2[i], r.report.per_cluster_lambda2[i]);
}

TEST(Plots, UnknownSchemaRejected) {
  const auto dir = scratch("plots_bad");
  csv::Table t;
  t.schema = "mystery/v1";
  t.header = {"a"};
  csv::write_file(t, dir / "x.csv");
  try {
    emit_plots(dir / "x.csv", dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SchemaError);
  }
}

TEST(Csv, QuotedFieldsRoundTrip) {
  csv::Table t;
  t.schema = "x/v1";
  t.header = {"a", "b"};
  t.rows = {{"plain", "with,comma"}, {"say \"hi\"", ""}};
  std::stringstream ss;
  csv::write(t, ss);
  const auto r = csv::read(ss);
  EXPECT_EQ(r.rows, t.rows);
}

TEST(Config, SectionsCommentsAndOverrides) {
  std::istringstream is(R"(# experiment
method = s3comp
seed = 12
[solver]
lambda = 0.9   
averaging = star
union_selection = true
; dropout block
[dropout]
delta = 0.25
T = 20
[sweep]
ni_list = 30, 55
methods = sscomp,s3comp_c
)");
  ExperimentConfig c;
  apply_config(c, is);
  EXPECT_EQ(c.method, Method::S3comp);
  EXPECT_EQ(c.seed, 12u);
  EXPECT_EQ(c.params.lambda, 0.9);
  EXPECT_EQ(c.params.averaging, Averaging::Star);
  EXPECT_TRUE(c.params.union_selection);
  EXPECT_EQ(c.delta, 0.25);
  EXPECT_EQ(c.subproblems, 20);
  EXPECT_EQ(c.ni_list, (std::vector<int>{30, 55}));
  EXPECT_EQ(c.sweep_methods, (std::vector<Method>{Method::Sscomp, Method::S3compC}));
}

TEST(Config, ErrorsCarryLineNumbers) {
  std::istringstream bad_key("seed = 1\nbogus = 2\n");
  ExperimentConfig c;
  try {
    apply_config(c, bad_key);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream bad_value("[solver]\nlambda = abc\n");
  EXPECT_THROW(apply_config(c, bad_value), Error);
}

TEST(Config, EveryKeyAccepted) {
  const std::map<std::string, std::string> samples = {
      {"data.kind", "synthetic"},   {"data.path", "x"},          {"data.labels", "y"},
      {"solver.averaging", "mean"}, {"method", "sscomp"},         {"out", "dir"},
      {"sweep.methods", "s3comp"},  {"sweep.ni_list", "30"},     {"grid.delta_list", "0.1"},
      {"grid.T_list", "5"},         {"sweep.per_ni_params", "false"},   {"sweep.full_range", "true"},
      {"solver.union_selection", "false"}, {"output.dump_matrices", "true"},
  };
  for (const auto& key : config_keys()) {
    ExperimentConfig c;
    const auto it = samples.find(key);
    EXPECT_NO_THROW(apply_setting(c, key, it != samples.end() ? it->second : "1")) << key;
  }
}

TEST(Config, ValidationCatchesMissingFiles) {
  ExperimentConfig c;
  apply_setting(c, "data.path", "/nonexistent/data.csv");
  apply_setting(c, "data.labels", "/nonexistent/labels.txt");
  EXPECT_THROW(c.validate(), Error);
  ExperimentConfig t;
  t.trials = 0;
  EXPECT_THROW(t.validate(), Error);
}
