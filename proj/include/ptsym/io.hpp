#pragma once

// JSON/CSV plumbing for the command-line tool. Matrices travel as
//   { "dim": n, "rows": [ [ [re, im], ... ], ... ] }
// vectors as
//   { "dim": n, "entries": [ [re, im], ... ] }

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptsym/bender.hpp"
#include "ptsym/dynamics.hpp"
#include "ptsym/types.hpp"

namespace ptsym::io {

using Json = nlohmann::ordered_json;

/// 17 significant digits, lowercase scientific.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x == 0.0 ? 0.0 : x);
  return buf;
}

namespace detail {

inline void dump(const Json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
        dump(it.value(), out, indent, depth + 1);
      }
      out += nl + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat || indent == 0 ? ", " : ",";
        if (!flat && indent > 0) out += "\n" + pad;
        first = false;
        dump(e, out, indent, depth + 1);
      }
      if (!flat && indent > 0) out += "\n" + close_pad;
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Deterministic serialization with fixed float formatting.
inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::dump(j, out, indent, 0);
  return out;
}

inline Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return Json{{"dim", m.rows()}, {"rows", rows}};
}

inline Json vector_json(const Vector& v) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) entries.push_back(complex_json(v(i)));
  return Json{{"dim", v.size()}, {"entries", entries}};
}

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, source + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

inline cplx complex_from_json(const Json& e, const std::string& where) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    throw Error(ErrorKind::Validation, where + ": entry must be [re, im]");
  }
  const cplx z(e[0].get<double>(), e[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorKind::Validation, where + ": non-finite entry");
  }
  return z;
}

inline Eigen::Index dim_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer()) {
    throw Error(ErrorKind::Validation, where + ": missing integer \"dim\"");
  }
  const auto n = j["dim"].get<long long>();
  if (n <= 0) throw Error(ErrorKind::Validation, where + ": \"dim\" must be positive");
  return static_cast<Eigen::Index>(n);
}

inline Matrix matrix_from_json(const Json& j, const std::string& where = "matrix") {
  const Eigen::Index n = dim_from_json(j, where);
  if (!j.contains("rows") || !j["rows"].is_array() || static_cast<Eigen::Index>(j["rows"].size()) != n) {
    throw Error(ErrorKind::Validation, where + ": \"rows\" must hold dim rows");
  }
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j["rows"][static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorKind::Validation, where + ": row " + std::to_string(i) + " must hold dim entries");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], where);
    }
  }
  return m;
}

inline Vector vector_from_json(const Json& j, const std::string& where = "vector") {
  const Eigen::Index n = dim_from_json(j, where);
  if (!j.contains("entries") || !j["entries"].is_array() ||
      static_cast<Eigen::Index>(j["entries"].size()) != n) {
    throw Error(ErrorKind::Validation, where + ": \"entries\" must hold dim entries");
  }
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_from_json(j["entries"][static_cast<std::size_t>(i)], where);
  return v;
}

inline Matrix read_matrix_file(const std::string& path) { return matrix_from_json(read_json_file(path), path); }
inline Vector read_vector_file(const std::string& path) { return vector_from_json(read_json_file(path), path); }

/// A state file holds either a density matrix ("rows") or a pure state
/// ("entries"), which becomes |v><v| / <v|v>.
inline Matrix read_state_file(const std::string& path) {
  const Json j = read_json_file(path);
  if (j.is_object() && j.contains("entries")) {
    const Vector v = vector_from_json(j, path);
    const double nrm = v.squaredNorm();
    if (!(nrm > 0.0)) throw Error(ErrorKind::Validation, path + ": zero state vector");
    return v * v.adjoint() / nrm;
  }
  return matrix_from_json(j, path);
}

/// Tolerances, grid, sign characteristic and probe state.
struct RunConfig {
  Tolerances tol;
  double t_start = 0.0;
  double t_end = 10.0;
  int points = 201;
  std::optional<std::vector<int>> signs;
  Probe probe;

  TimeGrid grid() const { return {t_start, t_end, points}; }

  void validate() const {
    tol.validate();
    if (points < 1) throw Error(ErrorKind::Validation, "grid points must be >= 1");
    if (points >= 2 && !(t_end > t_start)) throw Error(ErrorKind::Validation, "t_end must exceed t_start");
  }
};

/// Overlays the keys present in `j` onto `cfg`.
inline void apply_config_json(RunConfig& cfg, const Json& j, const std::string& where = "config") {
  if (!j.is_object()) throw Error(ErrorKind::Validation, where + ": config must be an object");
  auto num = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw Error(ErrorKind::Validation, where + ": \"" + key + "\" must be a number");
    dst = j[key].get<double>();
  };
  num("cluster_tol", cfg.tol.cluster_tol);
  num("rank_tol", cfg.tol.rank_tol);
  num("val_tol", cfg.tol.val_tol);
  num("sym_tol", cfg.tol.sym_tol);
  num("can_tol", cfg.tol.can_tol);
  num("met_tol", cfg.tol.met_tol);
  num("crit_tol", cfg.tol.crit_tol);
  num("p_tol", cfg.tol.p_tol);
  num("free_tol", cfg.tol.free_tol);
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (!g.is_object()) throw Error(ErrorKind::Validation, where + ": \"grid\" must be an object");
    if (g.contains("t_start")) cfg.t_start = g["t_start"].get<double>();
    if (g.contains("t_end")) cfg.t_end = g["t_end"].get<double>();
    if (g.contains("points")) cfg.points = g["points"].get<int>();
  }
  if (j.contains("signs")) {
    if (!j["signs"].is_array()) throw Error(ErrorKind::Validation, where + ": \"signs\" must be an array");
    cfg.signs = j["signs"].get<std::vector<int>>();
  }
  if (j.contains("probe")) {
    const auto& p = j["probe"];
    if (!p.is_array() || p.size() != 2) throw Error(ErrorKind::Validation, where + ": \"probe\" must be [[re,im],[re,im]]");
    cfg.probe = {complex_from_json(p[0], where), complex_from_json(p[1], where)};
  }
  cfg.validate();
}

// CSV: header row, comma separated, LF endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

inline std::string csv_optional(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace ptsym::io
