#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "netreal/errors.hpp"
#include "netreal/graph.hpp"
#include "netreal/realization.hpp"
#include "netreal/sim.hpp"

namespace netreal::io {

using Json = nlohmann::json;

/// A realization together with the graph it is meant for.
struct SystemFile {
  std::string name;
  NetworkGraph graph;
  BlockRealization system;
};

// ---------------------------------------------------------------------------
// JSON encoding

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json graph_to_json(const NetworkGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({e.to, e.from});
  return {{"num_nodes", g.num_nodes()}, {"edges", std::move(edges)}};
}

inline Json dims_to_json(const NodeDims& dims) {
  Json out = Json::array();
  for (const auto& d : dims.nodes()) out.push_back({{"n", d.n}, {"m", d.m}, {"p", d.p}});
  return out;
}

inline Json system_to_json(const SystemFile& f) {
  Json j;
  if (!f.name.empty()) j["name"] = f.name;
  j["graph"] = graph_to_json(f.graph);
  j["dims"] = dims_to_json(f.system.dims());
  j["A"] = matrix_to_json(f.system.a());
  j["B"] = matrix_to_json(f.system.b());
  j["C"] = matrix_to_json(f.system.c());
  j["D"] = matrix_to_json(f.system.d());
  return j;
}

// ---------------------------------------------------------------------------
// JSON decoding, with diagnostics naming the offending field

namespace detail {

inline Index get_index(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw InputError("field '" + field + "': expected an integer");
  return j.get<Index>();
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw InputError("field '" + where + "': expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw InputError("missing field '" + (where.empty() ? key : where + "." + key) + "'");
  }
  return *it;
}

}  // namespace detail

inline NetworkGraph graph_from_json(const Json& j) {
  const Index nodes = detail::get_index(detail::require(j, "num_nodes", "graph"), "graph.num_nodes");
  const Json& edges = detail::require(j, "edges", "graph");
  if (!edges.is_array()) throw InputError("field 'graph.edges': expected an array of [i, j] pairs");
  std::vector<std::pair<Index, Index>> list;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string at = "graph.edges[" + std::to_string(k) + "]";
    const Json& e = edges[k];
    if (!e.is_array() || e.size() != 2) throw InputError("field '" + at + "': expected a pair [i, j]");
    list.emplace_back(detail::get_index(e[0], at), detail::get_index(e[1], at));
  }
  try {
    return build_graph(nodes, list);
  } catch (const InputError& err) {
    throw InputError(std::string("field 'graph': ") + err.what());
  }
}

inline NodeDims dims_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("field 'dims': expected an array of {n, m, p} objects");
  std::vector<NodeDim> nodes;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string at = "dims[" + std::to_string(k) + "]";
    NodeDim d;
    d.n = detail::get_index(detail::require(j[k], "n", at), at + ".n");
    d.m = detail::get_index(detail::require(j[k], "m", at), at + ".m");
    d.p = detail::get_index(detail::require(j[k], "p", at), at + ".p");
    if (d.n < 0 || d.m < 0 || d.p < 0) throw InputError("field '" + at + "': negative dimension");
    nodes.push_back(d);
  }
  return NodeDims(std::move(nodes));
}

/// Row-major nested array; may be absent when rows or cols is zero.
inline Matrix matrix_from_json(const Json& obj, const std::string& key, Index rows, Index cols) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (rows == 0 || cols == 0) return Matrix(rows, cols);
    throw InputError("missing field '" + key + "' (expected " + std::to_string(rows) + "x" + std::to_string(cols) + ")");
  }
  const Json& j = *it;
  if (!j.is_array()) throw InputError("field '" + key + "': expected an array of rows");
  // An empty array stands for any matrix with zero rows or zero columns.
  if (j.empty() && (rows == 0 || cols == 0)) return Matrix(rows, cols);
  if (static_cast<Index>(j.size()) != rows) {
    throw InputError("field '" + key + "': has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    const std::string at = key + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw InputError("field '" + at + "': expected " + std::to_string(cols) + " entries");
    }
    for (Index c = 0; c < cols; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw InputError("field '" + at + "[" + std::to_string(c) + "]': expected a number");
      m(i, c) = v.get<double>();
    }
  }
  return m;
}

inline SystemFile system_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("system file: top level must be an object");
  SystemFile f;
  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) throw InputError("field 'name': expected a string");
    f.name = it->get<std::string>();
  }
  f.graph = graph_from_json(detail::require(j, "graph", ""));
  const NodeDims dims = dims_from_json(detail::require(j, "dims", ""));
  if (dims.size() != f.graph.num_nodes()) {
    throw InputError("field 'dims': " + std::to_string(dims.size()) + " entries but graph has " +
                     std::to_string(f.graph.num_nodes()) + " nodes");
  }
  Matrix a = matrix_from_json(j, "A", dims.n(), dims.n());
  Matrix b = matrix_from_json(j, "B", dims.n(), dims.m());
  Matrix c = matrix_from_json(j, "C", dims.p(), dims.n());
  Matrix d = matrix_from_json(j, "D", dims.p(), dims.m());
  f.system = BlockRealization(dims, std::move(a), std::move(b), std::move(c), std::move(d));
  return f;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses JSON text; syntax errors are reported with line and column.
inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& err) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(err.byte == 0 ? 0 : err.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(origin + ": line " + std::to_string(line) + ", column " + std::to_string(col) +
                     ": malformed JSON");
  }
}

inline SystemFile load_system(const std::string& path) {
  const Json j = parse_json_text(read_text(path), path);
  try {
    return system_from_json(j);
  } catch (const InputError& err) {
    throw InputError(path + ": " + err.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot write file");
  out << text;
}

inline std::string dump(const Json& j) {
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Trajectories: CSV (header row, one row per step, node-major columns) or a
// JSON array of per-step arrays.

/// Column names "<signal>.<node>.<k>".
inline std::vector<std::string> column_names(const std::string& signal, const std::vector<Index>& partition) {
  std::vector<std::string> names;
  for (std::size_t node = 0; node < partition.size(); ++node) {
    for (Index k = 0; k < partition[node]; ++k) names.push_back(signal + "." + std::to_string(node) + "." + std::to_string(k));
  }
  return names;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

/// Writes several signals side by side; all must share the same length.
inline std::string trajectories_to_csv(const std::vector<std::pair<std::string, const SignalTrajectory*>>& signals) {
  std::ostringstream os;
  Index steps = -1;
  bool first = true;
  for (const auto& [name, traj] : signals) {
    if (steps >= 0 && traj->length() != steps) throw InputError("csv: signals differ in length");
    steps = traj->length();
    for (const auto& col : column_names(name, traj->partition)) {
      os << (first ? "" : ",") << col;
      first = false;
    }
  }
  os << "\n";
  for (Index t = 0; t < std::max<Index>(steps, 0); ++t) {
    first = true;
    for (const auto& [name, traj] : signals) {
      for (Index c = 0; c < traj->dim(); ++c) {
        os << (first ? "" : ",") << format_double(traj->samples(t, c));
        first = false;
      }
    }
    os << "\n";
  }
  return os.str();
}

inline Json trajectory_to_json(const SignalTrajectory& traj) { return matrix_to_json(traj.samples); }

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline bool parse_number(const std::string& s, double& out) {
  std::size_t used = 0;
  try {
    out = std::stod(s, &used);
  } catch (...) {
    return false;
  }
  while (used < s.size() && (s[used] == ' ' || s[used] == '\r')) ++used;
  return used == s.size();
}

}  // namespace detail

/// Reads a CSV trajectory. A first row that is not numeric is a header.
inline SignalTrajectory trajectory_from_csv(const std::string& text, const std::vector<Index>& partition,
                                            const std::string& origin) {
  SignalTrajectory traj{partition, Matrix()};
  const Index dim = std::accumulate(partition.begin(), partition.end(), Index{0});
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = detail::split_csv(line);
    std::vector<double> values;
    bool numeric = true;
    for (const auto& c : cells) {
      double v = 0.0;
      if (!detail::parse_number(c, v)) {
        numeric = false;
        break;
      }
      values.push_back(v);
    }
    if (!numeric) {
      if (rows.empty() && lineno == 1) continue;  // header
      throw InputError(origin + ": line " + std::to_string(lineno) + ": non-numeric cell");
    }
    if (static_cast<Index>(values.size()) != dim) {
      throw InputError(origin + ": line " + std::to_string(lineno) + ": has " + std::to_string(values.size()) +
                       " columns, expected " + std::to_string(dim));
    }
    rows.push_back(std::move(values));
  }
  traj.samples.resize(static_cast<Index>(rows.size()), dim);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (Index c = 0; c < dim; ++c) traj.samples(static_cast<Index>(t), c) = rows[t][static_cast<std::size_t>(c)];
  }
  traj.validate(origin.c_str());
  return traj;
}

/// Reads a JSON trajectory: an array of per-step arrays, or an object whose
/// "samples" member is one.
inline SignalTrajectory trajectory_from_json(const Json& j, const std::vector<Index>& partition,
                                             const std::string& origin) {
  const Json& rows = j.is_object() ? detail::require(j, "samples", "") : j;
  if (!rows.is_array()) throw InputError(origin + ": trajectory must be an array of per-step arrays");
  const Index dim = std::accumulate(partition.begin(), partition.end(), Index{0});
  Json wrapper = {{"samples", rows}};
  Matrix m = matrix_from_json(wrapper, "samples", static_cast<Index>(rows.size()), dim);
  SignalTrajectory traj{partition, std::move(m)};
  traj.validate(origin.c_str());
  return traj;
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Dispatches on the file extension: ".json" is JSON, anything else CSV.
inline SignalTrajectory load_trajectory(const std::string& path, const std::vector<Index>& partition) {
  const std::string text = read_text(path);
  if (has_suffix(path, ".json")) return trajectory_from_json(parse_json_text(text, path), partition, path);
  return trajectory_from_csv(text, partition, path);
}

}  // namespace netreal::io
