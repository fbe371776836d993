#pragma once

#include "s3c/common.hpp"
#include "s3c/io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace s3c::csv {

// Every CSV written by the harness starts with "# schema: <name>/v<version>"
// followed by a header row. Schemas are listed in docs/csv_schemas.md.

inline std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string num(double v) { return io::format_double(v); }
inline std::string num(Index v) { return std::to_string(v); }
inline std::string num(int v) { return std::to_string(v); }
inline std::string num(std::uint64_t v) { return std::to_string(v); }

struct Table {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  Index column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<Index>(i);
    throw Error(ErrorKind::SchemaError, "missing column '" + name + "' in " + schema);
  }

  std::vector<double> numbers(const std::string& name) const {
    const auto c = static_cast<std::size_t>(column(name));
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      out.push_back(io::detail::parse_double(rows[r].at(c), r + 3, c + 1));
    return out;
  }

  std::vector<std::string> strings(const std::string& name) const {
    const auto c = static_cast<std::size_t>(column(name));
    std::vector<std::string> out;
    for (const auto& r : rows) out.push_back(r.at(c));
    return out;
  }
};

inline std::string format_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += escape(fields[i]);
  }
  return line;
}

inline void write(const Table& t, std::ostream& os) {
  os << "# schema: " << t.schema << '\n' << format_row(t.header) << '\n';
  for (const auto& r : t.rows) os << format_row(r) << '\n';
}

/// Writes to a temporary sibling and renames it into place.
inline void write_file(const Table& t, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream os(tmp);
    if (!os) throw Error(ErrorKind::IoError, "cannot open " + tmp.string());
    write(t, os);
    if (!os) throw Error(ErrorKind::IoError, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline Table read(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# schema: ", 0) != 0)
    throw Error(ErrorKind::SchemaError, "missing '# schema:' line");
  t.schema = line.substr(10);
  while (!t.schema.empty() && (t.schema.back() == '\r' || t.schema.back() == ' ')) t.schema.pop_back();
  if (!std::getline(is, line)) throw Error(ErrorKind::SchemaError, "missing header row");
  t.header = split_line(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto row = split_line(line);
    if (row.size() != t.header.size())
      throw Error(ErrorKind::SchemaError, "row with " + std::to_string(row.size()) + " fields, header has " +
                                              std::to_string(t.header.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table read_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return read(is);
}

/// Schema name without the version suffix, e.g. "sweep_ni" for "sweep_ni/v1".
inline std::string schema_kind(const Table& t) { return t.schema.substr(0, t.schema.find('/')); }

}  // namespace s3c::csv
