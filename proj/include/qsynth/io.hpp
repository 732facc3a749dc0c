// Copyright 2026 The qsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsynth/coupling_graph.hpp"
#include "qsynth/errors.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/pulse.hpp"
#include "qsynth/schedule.hpp"

// File formats, all JSON:
//   unitary   {"dim": d, "re": [[...]], "im": [[...]]}          row-major
//   graph     {"d": d, "edges": [[j,k],...],
//              "simultaneous_xy": bool, "direct_z": bool}       flags default false
//   schedule  {"n_qudits": n, "d": d, "pulses": [
//                {"gen": "x|y|z|xy|int", "qudit": 0|1,
//                 "pair": [j,k],          (omitted for int)
//                 "axis_phi": float,      (xy only)
//                 "angle": float}, ...]}
//   coupling  {"omega": [[...]]}                                real phases
// Load diagnostics name the file and the offending field.

namespace qsynth {

namespace detail {

inline nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": invalid JSON: " + e.what());
  }
}

template <typename T>
T get_field(const nlohmann::json& j, const std::string& context, const std::string& key) {
  if (!j.contains(key)) throw ParseError(context + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(context + ": field '" + key + "' has the wrong type");
  }
}

inline Eigen::MatrixXd real_matrix_field(const nlohmann::json& j, const std::string& context,
                                         const std::string& key, Eigen::Index rows,
                                         Eigen::Index cols) {
  const auto data = get_field<std::vector<std::vector<double>>>(j, context, key);
  if (static_cast<Eigen::Index>(data.size()) != rows) {
    throw ParseError(context + ": field '" + key + "' has " + std::to_string(data.size()) +
                     " rows, expected " + std::to_string(rows));
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(data[static_cast<size_t>(r)].size()) != cols) {
      throw ParseError(context + ": field '" + key + "' row " + std::to_string(r) + " has " +
                       std::to_string(data[static_cast<size_t>(r)].size()) +
                       " entries, expected " + std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<size_t>(r)][static_cast<size_t>(c)];
  }
  return m;
}

inline void write_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << j.dump(2) << "\n";
}

}  // namespace detail

inline Matrix unitary_from_json(const nlohmann::json& j, const std::string& context,
                                double tol = 1e-10) {
  const int dim = detail::get_field<int>(j, context, "dim");
  if (dim < 1) throw ParseError(context + ": field 'dim' must be positive");
  const Eigen::MatrixXd re = detail::real_matrix_field(j, context, "re", dim, dim);
  const Eigen::MatrixXd im = detail::real_matrix_field(j, context, "im", dim, dim);
  Matrix m = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
  const double defect = unitarity_defect(m);
  if (!(defect <= tol)) {
    throw NotUnitary(context + ": matrix is not unitary, ||U U^dag - I||_max = " +
                     std::to_string(defect));
  }
  return m;
}

inline nlohmann::json unitary_to_json(const Matrix& m) {
  nlohmann::json j;
  j["dim"] = m.rows();
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

inline Matrix load_unitary(const std::string& path) {
  return unitary_from_json(detail::parse_file(path), path);
}

inline void save_unitary(const std::string& path, const Matrix& m) {
  detail::write_file(path, unitary_to_json(m));
}

inline CouplingGraph graph_from_json(const nlohmann::json& j, const std::string& context) {
  const int d = detail::get_field<int>(j, context, "d");
  const auto edge_rows = detail::get_field<std::vector<std::vector<int>>>(j, context, "edges");
  std::vector<std::pair<int, int>> edges;
  for (size_t i = 0; i < edge_rows.size(); ++i) {
    if (edge_rows[i].size() != 2) {
      throw ParseError(context + ": field 'edges' entry " + std::to_string(i) +
                       " must be a pair [j,k]");
    }
    edges.emplace_back(edge_rows[i][0], edge_rows[i][1]);
  }
  Capabilities caps;
  if (j.contains("simultaneous_xy")) {
    caps.simultaneous_xy = detail::get_field<bool>(j, context, "simultaneous_xy");
  }
  if (j.contains("direct_z")) caps.direct_z = detail::get_field<bool>(j, context, "direct_z");
  try {
    return CouplingGraph(d, std::move(edges), caps);
  } catch (const Error& e) {
    throw ParseError(context + ": " + e.what());
  }
}

inline nlohmann::json graph_to_json(const CouplingGraph& g) {
  nlohmann::json j;
  j["d"] = g.dim();
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a, b});
  j["edges"] = edges;
  j["simultaneous_xy"] = g.caps().simultaneous_xy;
  j["direct_z"] = g.caps().direct_z;
  return j;
}

inline CouplingGraph load_graph(const std::string& path) {
  return graph_from_json(detail::parse_file(path), path);
}

// Accepts a preset name (rb87, path-N, complete-N) or a path to a graph file.
// Anything containing a path separator or a .json suffix is read as a file.
inline CouplingGraph resolve_graph(const std::string& spec) {
  const bool looks_like_file = spec.find('/') != std::string::npos ||
                               (spec.size() > 5 && spec.rfind(".json") == spec.size() - 5);
  if (looks_like_file) return load_graph(spec);
  return preset(spec);
}

inline Schedule schedule_from_json(const nlohmann::json& j, const std::string& context) {
  Schedule s;
  s.n_qudits = detail::get_field<int>(j, context, "n_qudits");
  s.d = detail::get_field<int>(j, context, "d");
  if (s.n_qudits != 1 && s.n_qudits != 2) {
    throw ParseError(context + ": field 'n_qudits' must be 1 or 2");
  }
  if (s.d < 2) throw ParseError(context + ": field 'd' must be at least 2");
  if (!j.contains("pulses") || !j.at("pulses").is_array()) {
    throw ParseError(context + ": missing array field 'pulses'");
  }
  size_t idx = 0;
  for (const auto& pj : j.at("pulses")) {
    const std::string where = context + ": pulses[" + std::to_string(idx++) + "]";
    const auto gen = detail::get_field<std::string>(pj, where, "gen");
    Pulse p;
    if (gen == "x") {
      p.gen = Gen::X;
    } else if (gen == "y") {
      p.gen = Gen::Y;
    } else if (gen == "z") {
      p.gen = Gen::Z;
    } else if (gen == "xy") {
      p.gen = Gen::XY;
    } else if (gen == "int") {
      p.gen = Gen::Int;
    } else {
      throw ParseError(where + ": field 'gen' must be one of x, y, z, xy, int");
    }
    p.qudit = detail::get_field<int>(pj, where, "qudit");
    p.angle = detail::get_field<double>(pj, where, "angle");
    if (p.gen != Gen::Int) {
      const auto pair = detail::get_field<std::vector<int>>(pj, where, "pair");
      if (pair.size() != 2) throw ParseError(where + ": field 'pair' must be [j,k]");
      p.j = pair[0];
      p.k = pair[1];
    }
    if (p.gen == Gen::XY) p.axis_phi = detail::get_field<double>(pj, where, "axis_phi");
    try {
      s.append(p);
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return s;
}

inline nlohmann::json schedule_to_json(const Schedule& s) {
  nlohmann::json j;
  j["n_qudits"] = s.n_qudits;
  j["d"] = s.d;
  nlohmann::json pulses = nlohmann::json::array();
  for (const Pulse& p : s.pulses) {
    nlohmann::json pj;
    pj["gen"] = gen_name(p.gen);
    pj["qudit"] = p.qudit;
    if (p.gen != Gen::Int) pj["pair"] = {p.j, p.k};
    if (p.gen == Gen::XY) pj["axis_phi"] = p.axis_phi;
    pj["angle"] = p.angle;
    pulses.push_back(pj);
  }
  j["pulses"] = pulses;
  return j;
}

inline Schedule load_schedule(const std::string& path) {
  return schedule_from_json(detail::parse_file(path), path);
}

inline void save_schedule(const std::string& path, const Schedule& s) {
  detail::write_file(path, schedule_to_json(s));
}

// Diagonal-coupling phase matrix for the entanglement criterion.
inline Eigen::MatrixXd load_coupling_phases(const std::string& path) {
  const nlohmann::json j = detail::parse_file(path);
  const auto rows = detail::get_field<std::vector<std::vector<double>>>(j, path, "omega");
  if (rows.empty()) throw ParseError(path + ": field 'omega' must not be empty");
  return detail::real_matrix_field(j, path, "omega", static_cast<Eigen::Index>(rows.size()),
                                   static_cast<Eigen::Index>(rows[0].size()));
}

}  // namespace qsynth
