#pragma once

#include "s3c/common.hpp"
#include "s3c/dataset.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace s3c::io {

// Binary layout: 8-byte magic, u64 rows, u64 cols, rows*cols f64 in
// column-major order. Everything little-endian.
inline constexpr std::array<char, 8> kMatrixMagic = {'S', '3', 'C', 'M', 'A', 'T', '0', '1'};

enum class MatrixFormat { Csv, Binary };

inline MatrixFormat format_for_path(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  return (ext == ".bin" || ext == ".s3cm") ? MatrixFormat::Binary : MatrixFormat::Csv;
}

/// Shortest-roundtrip-safe text for a double (17 significant digits).
inline std::string format_double(double v) {
  std::array<char, 40> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw Error(ErrorKind::IoError, "cannot format value");
  return std::string(buf.data(), end);
}

namespace detail {

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::array<unsigned char, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    std::reverse(b.begin(), b.end());
    std::memcpy(&v, b.data(), sizeof(T));
  }
  return v;
}

template <typename T>
void write_le(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error(ErrorKind::ParseError, "truncated binary matrix");
  return to_little(v);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view tok, std::size_t line, std::size_t field) {
  tok = trim(tok);
  double v = 0.0;
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " +
                                           std::to_string(field) + ": '" + std::string(tok) + "'");
  return v;
}

}  // namespace detail

inline void save_matrix_csv(const Matrix& m, std::ostream& os) {
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      os << format_double(m(r, c));
    }
    os << '\n';
  }
}

/// Parses comma-separated rows. Blank lines and lines starting with '#' are
/// skipped. Positions in errors are 1-based.
inline Matrix load_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> row;
    std::size_t start = 0, field = 1;
    while (true) {
      const auto comma = t.find(',', start);
      row.push_back(detail::parse_double(t.substr(start, comma - start), lineno, field));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
      ++field;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorKind::ShapeMismatch, "line " + std::to_string(lineno) + " has " +
                                                std::to_string(row.size()) + " fields, expected " +
                                                std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::ParseError, "no data rows");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

inline void save_matrix_binary(const Matrix& m, std::ostream& os) {
  os.write(kMatrixMagic.data(), kMatrixMagic.size());
  detail::write_le<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
  detail::write_le<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
  for (Index c = 0; c < m.cols(); ++c)
    for (Index r = 0; r < m.rows(); ++r) detail::write_le<double>(os, m(r, c));
}

inline Matrix load_matrix_binary(std::istream& is) {
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMatrixMagic) throw Error(ErrorKind::ParseError, "bad binary matrix magic");
  const auto rows = detail::read_le<std::uint64_t>(is);
  const auto cols = detail::read_le<std::uint64_t>(is);
  if (rows == 0 || cols == 0 || rows > (1ULL << 32) || cols > (1ULL << 32))
    throw Error(ErrorKind::ShapeMismatch, "implausible binary matrix dimensions");
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index c = 0; c < m.cols(); ++c)
    for (Index r = 0; r < m.rows(); ++r) m(r, c) = detail::read_le<double>(is);
  return m;
}

/// Writes CSV unless the extension is .bin / .s3cm.
inline void save_matrix(const Matrix& m, const std::filesystem::path& path) {
  const auto fmt = format_for_path(path);
  std::ofstream os(path, fmt == MatrixFormat::Binary ? std::ios::binary : std::ios::out);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  if (fmt == MatrixFormat::Binary)
    save_matrix_binary(m, os);
  else
    save_matrix_csv(m, os);
  if (!os) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

/// Detects the binary format by its magic; anything else is parsed as CSV.
inline Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::array<char, 8> head{};
  is.read(head.data(), head.size());
  const bool binary = is.gcount() == static_cast<std::streamsize>(head.size()) && head == kMatrixMagic;
  is.clear();
  is.seekg(0);
  return binary ? load_matrix_binary(is) : load_matrix_csv(is);
}

struct LabelLoad {
  GroundTruthLabels labels;
  std::map<int, int> remap;           // raw file id -> dense 1-based id
  std::vector<std::string> warnings;
};

/// One integer per line. Ids that are not exactly 1..n are remapped to dense
/// 1..n in increasing id order and a warning is recorded.
inline LabelLoad load_labels(std::istream& is) {
  std::vector<int> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size())
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ", column 1: '" + std::string(t) + "'");
    raw.push_back(v);
  }
  if (raw.empty()) throw Error(ErrorKind::ParseError, "no labels");
  LabelLoad out;
  out.labels = GroundTruthLabels::from_ids(raw);
  bool identity = true;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const int dense = out.labels.labels()[i] + 1;
    out.remap[raw[i]] = dense;
    if (dense != raw[i]) identity = false;
  }
  if (!identity) {
    std::ostringstream w;
    w << "label ids remapped to 1.." << out.labels.clusters() << ":";
    for (auto [from, to] : out.remap) w << ' ' << from << "->" << to;
    out.warnings.push_back(w.str());
  }
  return out;
}

inline LabelLoad load_labels(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return load_labels(is);
}

inline void save_labels(const std::vector<int>& zero_based, std::ostream& os) {
  for (int l : zero_based) os << (l + 1) << '\n';
}

inline void save_labels(const std::vector<int>& zero_based, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  save_labels(zero_based, os);
}

}  // namespace s3c::io
