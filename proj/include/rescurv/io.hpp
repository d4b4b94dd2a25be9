#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rescurv/curvature.hpp"
#include "rescurv/generators.hpp"
#include "rescurv/graph.hpp"
#include "rescurv/resistance.hpp"

namespace rescurv {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 17 significant digits: enough to round-trip any double, byte-stable.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Text edge list: one `i j c` triple per line; `#` starts a comment; node
// count is 1 + max index unless a larger `n` is requested.
inline WeightedGraph parse_edge_list(std::istream& in, int n_hint = 0) {
  std::vector<EdgeTriple> edges;
  int max_node = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream row(line);
    int i, j;
    double c;
    if (!(row >> i)) {
      // blank / comment-only lines are fine; anything else is a bad row
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ParseError("line " + std::to_string(line_no) + ": expected `i j c`");
      continue;
    }
    if (!(row >> j >> c)) throw ParseError("line " + std::to_string(line_no) + ": expected `i j c`");
    std::string extra;
    if (row >> extra) throw ParseError("line " + std::to_string(line_no) + ": trailing tokens");
    if (i < 0 || j < 0) throw ParseError("line " + std::to_string(line_no) + ": negative node index");
    edges.push_back({i, j, c});
    max_node = std::max({max_node, i, j});
  }
  const int n = std::max(n_hint, max_node + 1);
  try {
    return WeightedGraph::from_edges(n, edges);
  } catch (const GraphError& err) {
    throw ParseError(err.what());
  }
}

inline nlohmann::json graph_to_json(const WeightedGraph& g) {
  nlohmann::json j;
  j["n"] = g.n();
  j["links"] = nlohmann::json::array();
  for (int e = 0; e < g.m(); ++e)
    j["links"].push_back({g.links()[e].i, g.links()[e].j, g.weight(e)});
  return j;
}

inline nlohmann::json erg_to_json(const ErgSample& sample) {
  nlohmann::json j = graph_to_json(sample.graph);
  nlohmann::json geo;
  geo["positions"] = nlohmann::json::array();
  for (const auto& xy : sample.positions) geo["positions"].push_back({xy[0], xy[1]});
  geo["boundary_distances"] = sample.boundary_distance;
  j["geometry"] = std::move(geo);
  return j;
}

inline WeightedGraph graph_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<EdgeTriple> edges;
    for (const auto& row : j.at("links")) {
      if (!row.is_array() || row.size() != 3) throw ParseError("each link must be [i, j, c]");
      edges.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
    }
    return WeightedGraph::from_edges(n, edges);
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(std::string("graph JSON: ") + err.what());
  } catch (const GraphError& err) {
    throw ParseError(err.what());
  }
}

// Loads either format; `.json` suffix or a leading `{` selects JSON.
inline WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  char first = 0;
  in >> std::ws;
  first = static_cast<char>(in.peek());
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") first = '{';
  if (first == '{') {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& err) {
      throw ParseError(std::string("graph JSON: ") + err.what());
    }
    return graph_from_json(j);
  }
  return parse_edge_list(in);
}

inline void write_resistance_csv(std::ostream& out, const WeightedGraph& g,
                                 const ResistanceProfile& prof) {
  out << "i,j,omega,relative\n";
  for (int e = 0; e < g.m(); ++e)
    out << g.links()[e].i << ',' << g.links()[e].j << ',' << format_double(prof.link_omega[e])
        << ',' << format_double(prof.relative[e]) << '\n';
}

inline void write_node_curvature_csv(std::ostream& out, const Eigen::VectorXd& p) {
  out << "node,p\n";
  for (int i = 0; i < p.size(); ++i) out << i << ',' << format_double(p(i)) << '\n';
}

inline void write_link_curvature_csv(std::ostream& out, const WeightedGraph& g,
                                     const std::vector<double>& kappa,
                                     const std::vector<double>& kappa_norm) {
  out << "i,j,kappa,kappa_norm\n";
  for (int e = 0; e < g.m(); ++e)
    out << g.links()[e].i << ',' << g.links()[e].j << ',' << format_double(kappa[e]) << ','
        << format_double(kappa_norm[e]) << '\n';
}

inline nlohmann::json report_to_json(const WeightedGraph& g, const CurvatureReport& report) {
  nlohmann::json j;
  j["p"] = std::vector<double>(report.p.data(), report.p.data() + report.p.size());
  j["sigma2"] = report.sigma2;
  j["links"] = nlohmann::json::array();
  for (int e = 0; e < g.m(); ++e)
    j["links"].push_back({{"i", g.links()[e].i},
                          {"j", g.links()[e].j},
                          {"kappa", report.kappa[e]},
                          {"kappa_norm", report.kappa_norm[e]}});
  return j;
}

// FNV-1a over the raw bytes of a file; stable across platforms.
inline std::uint64_t file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

struct RunManifest {
  std::string command;
  nlohmann::json parameters;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::vector<std::pair<std::string, std::uint64_t>> input_hashes;
  std::vector<std::string> output_paths;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["tool_version"] = tool_version;
    j["input_hashes"] = nlohmann::json::object();
    for (const auto& [path, hash] : input_hashes) j["input_hashes"][path] = hash;
    j["outputs"] = output_paths;
    return j;
  }

  void write(const std::string& path) const {
    std::ofstream out(path);
    out << to_json().dump(2) << '\n';
  }
};

}  // namespace rescurv
