#pragma once

#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "coarse/cochains.hpp"
#include "coarse/engine.hpp"
#include "coarse/fillings.hpp"

namespace coarse {

using OrderedJson = nlohmann::ordered_json;

// -- value (de)serialization per ring -----------------------------------------

inline OrderedJson value_to_json(const GF2& v) { return static_cast<int>(v.v); }
inline OrderedJson value_to_json(const Rational& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}
inline OrderedJson value_to_json(const Integer& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

template <class T>
T value_from_json(const OrderedJson& j);

template <>
inline GF2 value_from_json<GF2>(const OrderedJson& j) {
  return GF2(j.get<int>());
}
template <>
inline Rational value_from_json<Rational>(const OrderedJson& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  return Rational(j.get<std::string>());
}
template <>
inline Integer value_from_json<Integer>(const OrderedJson& j) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  return Integer(j.get<std::string>());
}

// -- metric spaces -------------------------------------------------------------

inline OrderedJson space_to_json(const FiniteMetricSpace& X) {
  OrderedJson j;
  OrderedJson pts = OrderedJson::array();
  for (int i = 0; i < X.size(); ++i)
    pts.push_back(i < static_cast<int>(X.labels.size()) ? X.labels[i]
                                                        : "p" + std::to_string(i));
  j["points"] = std::move(pts);
  OrderedJson dist = OrderedJson::array();
  for (PointId a = 0; a < X.size(); ++a) {
    OrderedJson row = OrderedJson::array();
    for (PointId b = 0; b < X.size(); ++b) row.push_back(X.dist(a, b));
    dist.push_back(std::move(row));
  }
  j["dist"] = std::move(dist);
  if (!X.coords.empty()) j["coords"] = X.coords;
  if (X.basepoint) j["basepoint"] = *X.basepoint;
  j["unbounded_model"] = X.unbounded_model;
  j["truncation_radius"] = X.truncation_radius;
  return j;
}

inline FiniteMetricSpace space_from_json(const OrderedJson& j, bool strict_metric = false) {
  FiniteMetricSpace X;
  if (j.contains("dist")) {
    std::vector<std::vector<double>> table = j.at("dist").get<std::vector<std::vector<double>>>();
    X = from_distance_matrix(table, FromTableOptions{strict_metric});
  } else if (j.is_array()) {
    X = from_points(j.get<std::vector<std::vector<double>>>());
  } else if (j.contains("coords")) {
    X = from_points(j.at("coords").get<std::vector<std::vector<double>>>());
  } else {
    throw BadInput("space JSON needs a dist table or coordinates");
  }
  if (j.is_object()) {
    if (j.contains("points")) X.labels = j.at("points").get<std::vector<std::string>>();
    if (j.contains("coords") && X.coords.empty())
      X.coords = j.at("coords").get<std::vector<std::vector<double>>>();
    if (j.contains("basepoint")) X.basepoint = j.at("basepoint").get<PointId>();
    if (j.contains("unbounded_model")) X.unbounded_model = j.at("unbounded_model").get<bool>();
    if (j.contains("truncation_radius"))
      X.truncation_radius = j.at("truncation_radius").get<double>();
  }
  return X;
}

/// Square CSV table, optional header row/column of labels.
inline FiniteMetricSpace space_from_csv(std::istream& in, bool strict_metric = false) {
  std::vector<std::vector<std::string>> cells;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    cells.push_back(std::move(row));
  }
  if (cells.empty()) throw BadInput("empty CSV");

  auto numeric = [](const std::string& s) {
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end != s.c_str() && *end == '\0';
  };
  bool header = !numeric(cells[0].back());
  std::size_t row0 = header ? 1 : 0;
  std::size_t col0 = header && cells.size() > row0 && !numeric(cells[row0][0]) ? 1 : 0;

  std::vector<std::vector<double>> table;
  std::vector<std::string> labels;
  for (std::size_t r = row0; r < cells.size(); ++r) {
    std::vector<double> row;
    for (std::size_t c = col0; c < cells[r].size(); ++c) row.push_back(std::stod(cells[r][c]));
    if (col0) labels.push_back(cells[r][0]);
    table.push_back(std::move(row));
  }
  FiniteMetricSpace X = from_distance_matrix(table, FromTableOptions{strict_metric});
  X.labels = std::move(labels);
  return X;
}

// -- cochains -------------------------------------------------------------------

template <class T>
OrderedJson cochain_to_json(const Cochain<T>& phi) {
  OrderedJson j;
  j["degree"] = phi.degree;
  j["ring"] = ring_name(ring_of<T>::value);
  OrderedJson entries = OrderedJson::array();
  std::vector<Tuple> keys;
  for (const auto& [t, v] : phi.values) keys.push_back(t);
  std::sort(keys.begin(), keys.end());
  for (const auto& t : keys) entries.push_back(OrderedJson::array({t, value_to_json(phi.values.at(t))}));
  j["entries"] = std::move(entries);
  return j;
}

template <class T>
Cochain<T> cochain_from_json(const OrderedJson& j) {
  if (parse_ring(j.at("ring").get<std::string>()) != ring_of<T>::value)
    throw RingMismatch("cochain ring tag does not match the requested ring");
  Cochain<T> phi(j.at("degree").get<int>());
  for (const auto& e : j.at("entries")) {
    Tuple t = e.at(0).get<Tuple>();
    phi.set(t, value_from_json<T>(e.at(1)));
  }
  return phi;
}

// -- complexes, groups, towers ---------------------------------------------------

inline OrderedJson complex_to_json(const SimplicialComplex& K) {
  OrderedJson j;
  j["scale"] = K.scale;
  j["max_dim"] = K.max_dim;
  OrderedJson dims = OrderedJson::array();
  for (int k = 0; k <= K.max_dim; ++k) dims.push_back(K.dim(k));
  j["simplices"] = std::move(dims);
  return j;
}

inline OrderedJson groups_to_json(const std::vector<CohomologyGroup>& gs) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& g : gs) {
    OrderedJson j;
    j["degree"] = g.degree;
    j["free_rank"] = g.free_rank;
    j["torsion"] = g.torsion;
    arr.push_back(std::move(j));
  }
  return arr;
}

template <class F>
OrderedJson tower_to_json(const Tower<F>& T) {
  OrderedJson j;
  j["ring"] = ring_name(T.params.ring);
  j["eps"] = T.params.eps;
  j["max_degree"] = T.params.max_degree;
  j["dropped_radii"] = T.dropped_stages;
  OrderedJson stages = OrderedJson::array();
  for (const auto& s : T.stages) {
    OrderedJson sj;
    sj["r"] = s.r;
    sj["points"] = s.complement_points.ids.size();
    OrderedJson counts = OrderedJson::array();
    for (int k = 0; k <= s.complex.max_dim; ++k) counts.push_back(s.complex.dim_count(k));
    sj["simplex_counts"] = std::move(counts);
    sj["groups"] = groups_to_json(s.groups);
    stages.push_back(std::move(sj));
  }
  j["stages"] = std::move(stages);

  OrderedJson maps = OrderedJson::array();
  for (const auto& [key, mat] : T.maps) {
    auto [deg, i, k] = key;
    OrderedJson mj;
    mj["degree"] = deg;
    mj["from_stage"] = i;
    mj["to_stage"] = k;
    OrderedJson rows = OrderedJson::array();
    for (const auto& row : mat) {
      OrderedJson rj = OrderedJson::array();
      for (const auto& v : row) rj.push_back(value_to_json(v));
      rows.push_back(std::move(rj));
    }
    mj["matrix"] = std::move(rows);
    mj["rank"] = dense_rank(mat);
    maps.push_back(std::move(mj));
  }
  j["maps"] = std::move(maps);
  return j;
}

/// Plot-ready rows: r, degree, betti, persistent_rank (window w).
template <class F>
std::string tower_to_tsv(const Tower<F>& T) {
  std::ostringstream os;
  os << "r\tdegree\tbetti\tpersistent_rank\n";
  const int n = T.stage_count();
  for (int i = 0; i < n; ++i)
    for (int d = 0; d <= T.params.max_degree; ++d) {
      os << T.stages[i].r << '\t' << d << '\t' << T.betti(i, d) << '\t';
      if (i + T.params.window < n)
        os << T.persistent_rank(d, i, i + T.params.window);
      else
        os << "";
      os << '\n';
    }
  return os.str();
}

inline std::string groups_to_tsv(const std::vector<CohomologyGroup>& gs) {
  std::ostringstream os;
  os << "degree\tfree_rank\ttorsion\n";
  for (const auto& g : gs) {
    os << g.degree << '\t' << g.free_rank << '\t';
    for (std::size_t i = 0; i < g.torsion.size(); ++i)
      os << (i ? "," : "") << g.torsion[i];
    os << '\n';
  }
  return os.str();
}

inline OrderedJson profile_to_json(const CoarseProfile& p) {
  OrderedJson j;
  j["ring"] = ring_name(p.ring);
  j["bounded_case"] = p.bounded_case;
  j["eps"] = p.eps;
  j["truncation_radius"] = p.truncation_radius;
  j["r_grid"] = p.r_grid;
  j["dropped_radii"] = p.dropped_radii;
  j["caveat"] = p.caveat;
  OrderedJson entries = OrderedJson::array();
  for (const auto& e : p.entries) {
    OrderedJson ej;
    ej["degree"] = e.degree;
    ej["status"] = e.status == ColimitStatus::STABILIZED ? "STABILIZED" : "NON_STABILIZED";
    ej["rank"] = e.rank;
    ej["stage_ranks"] = e.stage_ranks;
    ej["persistent_ranks"] = e.persistent_ranks;
    entries.push_back(std::move(ej));
  }
  j["degrees"] = std::move(entries);
  return j;
}

inline OrderedJson da_report_to_json(const DAConsistencyReport& r) {
  OrderedJson j;
  j["pass"] = r.pass;
  j["r_grid"] = r.r_grid;
  j["mismatches"] = r.mismatches;
  j["profile_direct"] = profile_to_json(r.profile_direct);
  j["profile_quotient"] = profile_to_json(r.profile_quotient);
  return j;
}

inline OrderedJson acyclicity_report_to_json(const AcyclicityReport& r) {
  OrderedJson j;
  j["pass"] = r.pass;
  j["vacuous"] = r.vacuous;
  j["samples_checked"] = r.samples_checked;
  OrderedJson vs = OrderedJson::array();
  for (const auto& v : r.violations) {
    OrderedJson vj;
    vj["center"] = v.center;
    vj["ball_radius"] = v.ball_radius;
    vj["set_diameter"] = v.set_diameter;
    vj["degree"] = v.degree;
    vj["witness_cycle"] = v.witness_cycle;
    vs.push_back(std::move(vj));
  }
  j["violations"] = std::move(vs);
  return j;
}

// -- result envelopes -------------------------------------------------------------

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string content_hash(const OrderedJson& j) {
  std::ostringstream os;
  os << std::hex << fnv1a(j.dump());
  return os.str();
}

/// Result file layout: config and input hash up front, payload under result.
/// Reruns of an embedded config reproduce the file byte-for-byte except for
/// the timestamp field.
inline OrderedJson result_envelope(const std::string& subcommand, const OrderedJson& config,
                                   const OrderedJson& inputs, const OrderedJson& result,
                                   const std::string& timestamp) {
  OrderedJson j;
  j["tool"] = "coarsecoh";
  j["subcommand"] = subcommand;
  j["config"] = config;
  j["input_hash"] = content_hash(inputs);
  j["timestamp"] = timestamp;
  j["result"] = result;
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadInput("cannot open output file: " + path);
  out << text;
}

inline OrderedJson read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BadInput("cannot open input file: " + path);
  OrderedJson j;
  in >> j;
  return j;
}

}  // namespace coarse
