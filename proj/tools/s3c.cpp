// s3c: command-line driver for the clustering pipeline and experiment sweeps.

#include "s3c/harness/config.hpp"
#include "s3c/harness/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

// Flag -> config key. Values pass through apply_setting so CLI flags, --set
// and config files share one parser.
struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

constexpr Flag kValueFlags[] = {
    {"--method", "method", "sscomp | s3comp | s3comp_c"},
    {"--delta", "dropout.delta", "dropout rate in [0, 1)"},
    {"--T", "dropout.T", "number of damped subproblems"},
    {"--lambda", "solver.lambda", "consensus damping weight"},
    {"--s", "solver.s", "sparsity (atoms per column)"},
    {"--eps-inner", "solver.eps_inner", "residual tolerance of each OMP solve"},
    {"--eps-outer", "solver.eps_outer", "relative-change tolerance of the consensus loop"},
    {"--max-outer", "solver.max_outer", "consensus iteration cap"},
    {"--averaging", "solver.averaging", "mean | star"},
    {"--k-eig", "spectral.k_eig", "eigenvectors for the embedding (0 = number of clusters)"},
    {"--kmeans-restarts", "spectral.kmeans_restarts", "k-means++ restarts"},
    {"--seed", "seed", "base seed; trial k uses seed + k"},
    {"--trials", "trials", "number of trials"},
    {"--threads", "threads", "worker threads for the column loop"},
    {"--out", "out", "output directory"},
    {"--data", "data.path", "data matrix (columns are points; CSV or binary)"},
    {"--labels", "data.labels", "label file, one id per line"},
    {"--pca", "data.pca_dim", "project data onto this many principal directions"},
    {"--n", "data.n", "synthetic: number of subspaces"},
    {"--d", "data.d", "synthetic: subspace dimension"},
    {"--D", "data.D", "synthetic: ambient dimension"},
    {"--Ni", "data.Ni", "synthetic: points per subspace"},
    {"--ni-list", "sweep.ni_list", "sweep-ni: comma-separated N_i values"},
    {"--methods", "sweep.methods", "sweep-ni: comma-separated methods"},
    {"--delta-list", "grid.delta_list", "grid-dt: comma-separated delta values"},
    {"--T-list", "grid.T_list", "grid-dt: comma-separated T values"},
};

constexpr Flag kSwitches[] = {
    {"--union-selection", "solver.union_selection", "select over kept and dropped atoms"},
    {"--dump-matrices", "output.dump_matrices", "write C and the affinity as triplet CSVs"},
    {"--full-range", "sweep.full_range", "sweep-ni: allow N_i above 320"},
};

struct Cli {
  std::vector<std::pair<std::string, std::string>> values;  // flag name -> raw value
  std::vector<CLI::Option*> value_opts;
  std::vector<CLI::Option*> switch_opts;
  std::string config_file;
  std::vector<std::string> sets;
  bool fixed_params = false;
};

void add_common(CLI::App& app, Cli& cli) {
  cli.values.resize(std::size(kValueFlags));
  for (std::size_t i = 0; i < std::size(kValueFlags); ++i) {
    cli.values[i].first = kValueFlags[i].name;
    cli.value_opts.push_back(app.add_option(kValueFlags[i].name, cli.values[i].second, kValueFlags[i].help));
  }
  for (const auto& f : kSwitches) cli.switch_opts.push_back(app.add_flag(f.name, f.help));
  app.add_flag("--fixed-params", cli.fixed_params, "sweep-ni: keep --delta/--lambda instead of the per-N_i table");
  app.add_option("--config", cli.config_file, "INI-style config file (applied before flags)");
  app.add_option("--set", cli.sets, "key=value override, applied last (repeatable)");
}

s3c::ExperimentConfig build_config(const Cli& cli) {
  s3c::ExperimentConfig c;
  if (!cli.config_file.empty()) s3c::apply_config_file(c, cli.config_file);
  // Options are registered once per subcommand; all bind the same strings.
  for (std::size_t k = 0; k < cli.value_opts.size(); ++k) {
    const std::size_t i = k % std::size(kValueFlags);
    if (cli.value_opts[k]->count() > 0) s3c::apply_setting(c, kValueFlags[i].key, cli.values[i].second);
  }
  for (std::size_t k = 0; k < cli.switch_opts.size(); ++k)
    if (cli.switch_opts[k]->count() > 0) s3c::apply_setting(c, kSwitches[k % std::size(kSwitches)].key, "true");
  if (cli.fixed_params) c.use_ni_table = false;
  for (const auto& kv : cli.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw s3c::Error(s3c::ErrorKind::ParseError, "--set expects key=value, got '" + kv + "'");
    s3c::apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return c;
}

void print_summary(const s3c::csv::Table& t) { s3c::csv::write(t, std::cout); }

int fail(const std::string& stage, const std::exception& e) {
  std::cerr << "s3c: " << stage << ": " << e.what() << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse subspace clustering by orthogonal matching pursuit with dropout"};
  app.require_subcommand(1);

  Cli cli;
  auto* cluster = app.add_subcommand("cluster", "cluster one dataset (synthetic or --data/--labels)");
  auto* sweep = app.add_subcommand("sweep-ni", "accuracy/connectivity/time versus points per subspace");
  auto* grid = app.add_subcommand("grid-dt", "metrics over a delta x T grid");
  auto* trace = app.add_subcommand("trace", "relative change per consensus iteration");
  auto* synth = app.add_subcommand("synth", "write a synthetic dataset (data.csv, labels.txt)");
  auto* plot = app.add_subcommand("plot", "render SVG figures from a harness CSV");
  for (auto* sub : {cluster, sweep, grid, trace, synth}) add_common(*sub, cli);

  std::string plot_input, plot_out = ".";
  bool synth_binary = false;
  plot->add_option("csv", plot_input, "CSV written by cluster/sweep-ni/grid-dt/trace")->required();
  plot->add_option("--out", plot_out, "directory for the SVG files");
  synth->add_flag("--binary", synth_binary, "write data.bin instead of data.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  s3c::ExperimentConfig cfg;
  if (!plot->parsed()) {
    try {
      cfg = build_config(cli);
      cfg.validate();
    } catch (const std::exception& e) {
      return fail("stage config", e);
    }
  }

  try {
    if (cluster->parsed()) {
      const auto out = s3c::run_cluster(cfg);
      for (const auto& r : out.runs)
        for (const auto& w : r.warnings) std::cerr << "s3c: warning: " << w << '\n';
      print_summary(out.summary);
    } else if (sweep->parsed()) {
      const auto out = s3c::run_sweep_ni(cfg);
      s3c::emit_plots(cfg.output_dir / "sweep_ni_summary.csv", cfg.output_dir);
      print_summary(out.summary);
    } else if (grid->parsed()) {
      const auto out = s3c::run_grid_delta_t(cfg);
      for (const char* m : {"grid_accuracy.csv", "grid_connectivity.csv", "grid_sp_rate.csv"})
        s3c::emit_plots(cfg.output_dir / m, cfg.output_dir);
      print_summary(out.trend);
    } else if (trace->parsed()) {
      s3c::run_convergence_trace(cfg);
      s3c::emit_plots(cfg.output_dir / "trace.csv", cfg.output_dir);
      std::cout << (cfg.output_dir / "trace.csv").string() << '\n';
    } else if (synth->parsed()) {
      cfg.synth.seed = cfg.seed;
      const auto data = s3c::generate_synthetic(cfg.synth);
      const auto path = cfg.output_dir / (synth_binary ? "data.bin" : "data.csv");
      std::filesystem::create_directories(cfg.output_dir);
      s3c::io::save_matrix(data.data.matrix(), path);
      s3c::io::save_labels(data.labels.labels(), cfg.output_dir / "labels.txt");
      std::cout << path.string() << '\n';
    } else if (plot->parsed()) {
      for (const auto& p : s3c::emit_plots(plot_input, plot_out)) std::cout << p.string() << '\n';
    }
  } catch (const std::exception& e) {
    // Pipeline errors already carry "stage <name>:"; anything else is output.
    const std::string what = e.what();
    return fail(what.find("stage ") != std::string::npos ? "run" : "stage output", e);
  }
  return 0;
}
