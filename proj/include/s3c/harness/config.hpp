#pragma once

#include "s3c/common.hpp"
#include "s3c/consensus.hpp"
#include "s3c/dataset.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace s3c {

enum class Method { Sscomp, S3comp, S3compC };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::Sscomp: return "sscomp";
    case Method::S3comp: return "s3comp";
    case Method::S3compC: return "s3comp_c";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "sscomp") return Method::Sscomp;
  if (s == "s3comp") return Method::S3comp;
  if (s == "s3comp_c") return Method::S3compC;
  throw Error(ErrorKind::InvalidArgument, "unknown method '" + s + "'");
}

inline std::string to_string(Averaging a) { return a == Averaging::Mean ? "mean" : "star"; }

inline Averaging parse_averaging(const std::string& s) {
  if (s == "mean") return Averaging::Mean;
  if (s == "star") return Averaging::Star;
  throw Error(ErrorKind::InvalidArgument, "unknown averaging '" + s + "'");
}

/// Synthetic-experiment (delta, lambda) per N_i used for S3COMP-C.
struct NiParameters {
  int points_per_subspace;
  double lambda;
  double delta;
};

inline constexpr NiParameters kSyntheticParameters[] = {
    {30, 0.40, 0.30},   {55, 0.40, 0.30},   {98, 0.70, 0.30},   {177, 0.70, 0.40},  {320, 0.70, 0.40},
    {577, 1.00, 0.60},  {1041, 1.00, 0.60}, {1880, 1.00, 0.60}, {3396, 1.00, 0.60},
};

inline const NiParameters* synthetic_parameters(int points_per_subspace) {
  for (const auto& e : kSyntheticParameters)
    if (e.points_per_subspace == points_per_subspace) return &e;
  return nullptr;
}

/// Largest N_i run without --full-range.
inline constexpr int kDeskScaleMaxNi = 320;

struct ExperimentConfig {
  Method method = Method::S3compC;

  // Dataset: synthetic union of subspaces, or matrix + labels files.
  bool synthetic = true;
  SyntheticSpec synth{};
  std::filesystem::path data_path;
  std::filesystem::path labels_path;
  Index pca_dim = 0;  // 0 = no PCA

  ConsensusParams params{};
  double delta = 0.4;
  Index subproblems = 15;  // T
  std::uint64_t seed = 0;
  Index trials = 1;

  Index k_eig = 0;  // 0 = number of clusters
  Index kmeans_restarts = 20;
  Index kmeans_iterations = 300;
  unsigned threads = 1;

  std::filesystem::path output_dir = "s3c_out";
  bool dump_matrices = false;

  // Sweeps.
  std::vector<int> ni_list = {30, 55, 98, 177, 320};
  bool use_ni_table = true;
  bool full_range = false;
  std::vector<double> delta_list = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<Index> t_list = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60, 65, 70, 75, 80, 85, 90, 95, 100};
  std::vector<Method> sweep_methods = {Method::Sscomp, Method::S3comp, Method::S3compC};

  void validate() const {
    if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
    if (subproblems < 1) throw Error(ErrorKind::InvalidArgument, "T must be >= 1");
    if (!(delta >= 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "delta must be in [0, 1)");
    if (kmeans_restarts < 1 || kmeans_iterations < 1)
      throw Error(ErrorKind::InvalidArgument, "k-means restarts/iterations must be >= 1");
    if (pca_dim < 0 || k_eig < 0) throw Error(ErrorKind::InvalidArgument, "pca_dim and k_eig must be >= 0");
    if (synthetic) {
      synth.validate();
    } else {
      if (!std::filesystem::exists(data_path))
        throw Error(ErrorKind::IoError, "data file not found: " + data_path.string());
      if (!std::filesystem::exists(labels_path))
        throw Error(ErrorKind::IoError, "labels file not found: " + labels_path.string());
    }
    if (method != Method::Sscomp) params.validate();
  }
};

namespace config_detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw Error(ErrorKind::ParseError, "bad value for " + key + ": '" + v + "'");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorKind::ParseError, "bad boolean for " + key + ": '" + v + "'");
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number<T>(key, item));
  }
  return out;
}

}  // namespace config_detail

/// Every recognized key in dotted form. Config files use "[section]" headers
/// followed by "key = value" lines; "section.key" is the flattened name.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "method",          "seed",           "trials",          "threads",           "out",
      "data.kind",       "data.n",         "data.d",          "data.D",            "data.Ni",
      "data.path",       "data.labels",    "data.pca_dim",    "solver.s",          "solver.lambda",
      "solver.eps_inner", "solver.eps_outer", "solver.max_outer", "solver.averaging", "solver.union_selection",
      "dropout.delta",   "dropout.T",      "spectral.k_eig",  "spectral.kmeans_restarts",
      "spectral.kmeans_iterations", "output.dump_matrices", "sweep.ni_list", "sweep.per_ni_params",
      "sweep.full_range", "sweep.methods",  "grid.delta_list", "grid.T_list",
  };
  return keys;
}

/// Applies one "key = value" setting. Throws ParseError on unknown keys or
/// malformed values.
inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  using namespace config_detail;
  const std::string v = trim(value);
  if (key == "method") c.method = parse_method(v);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v);
  else if (key == "trials") c.trials = parse_number<Index>(key, v);
  else if (key == "threads") c.threads = parse_number<unsigned>(key, v);
  else if (key == "out") c.output_dir = v;
  else if (key == "data.kind") {
    if (v != "synthetic" && v != "file") throw Error(ErrorKind::ParseError, "data.kind must be synthetic or file");
    c.synthetic = v == "synthetic";
  } else if (key == "data.n") c.synth.subspaces = parse_number<int>(key, v);
  else if (key == "data.d") c.synth.subspace_dim = parse_number<int>(key, v);
  else if (key == "data.D") c.synth.ambient_dim = parse_number<int>(key, v);
  else if (key == "data.Ni") c.synth.points_per_subspace = parse_number<int>(key, v);
  else if (key == "data.path") {
    c.data_path = v;
    c.synthetic = false;
  } else if (key == "data.labels") c.labels_path = v;
  else if (key == "data.pca_dim") c.pca_dim = parse_number<Index>(key, v);
  else if (key == "solver.s") c.params.sparsity = parse_number<Index>(key, v);
  else if (key == "solver.lambda") c.params.lambda = parse_number<double>(key, v);
  else if (key == "solver.eps_inner") c.params.eps_inner = parse_number<double>(key, v);
  else if (key == "solver.eps_outer") c.params.eps_outer = parse_number<double>(key, v);
  else if (key == "solver.max_outer") c.params.max_outer = parse_number<Index>(key, v);
  else if (key == "solver.averaging") c.params.averaging = parse_averaging(v);
  else if (key == "solver.union_selection") c.params.union_selection = parse_bool(key, v);
  else if (key == "dropout.delta") c.delta = parse_number<double>(key, v);
  else if (key == "dropout.T") c.subproblems = parse_number<Index>(key, v);
  else if (key == "spectral.k_eig") c.k_eig = parse_number<Index>(key, v);
  else if (key == "spectral.kmeans_restarts") c.kmeans_restarts = parse_number<Index>(key, v);
  else if (key == "spectral.kmeans_iterations") c.kmeans_iterations = parse_number<Index>(key, v);
  else if (key == "output.dump_matrices") c.dump_matrices = parse_bool(key, v);
  else if (key == "sweep.ni_list") c.ni_list = parse_list<int>(key, v);
  else if (key == "sweep.per_ni_params") c.use_ni_table = parse_bool(key, v);
  else if (key == "sweep.full_range") c.full_range = parse_bool(key, v);
  else if (key == "sweep.methods") {
    c.sweep_methods.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!trim(item).empty()) c.sweep_methods.push_back(parse_method(trim(item)));
  } else if (key == "grid.delta_list") c.delta_list = parse_list<double>(key, v);
  else if (key == "grid.T_list") c.t_list = parse_list<Index>(key, v);
  else throw Error(ErrorKind::ParseError, "unknown config key '" + key + "'");
}

/// Parses the config grammar:
///   line     := blank | comment | section | setting
///   comment  := ('#' | ';') text
///   section  := '[' name ']'
///   setting  := key '=' value
/// Keys inside a section are prefixed with "<section>.".
inline void apply_config(ExperimentConfig& c, std::istream& is) {
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = config_detail::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": unclosed section");
      section = config_detail::trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = config_detail::trim(t.substr(0, eq));
    const std::string full = section.empty() ? key : section + "." + key;
    try {
      apply_setting(c, full, t.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline void apply_config_file(ExperimentConfig& c, const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  apply_config(c, is);
}

}  // namespace s3c
