#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rescurv/io.hpp"

using namespace rescurv;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("/tmp/rescurv_io_") + name;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

}  // namespace

TEST_CASE("edge lists parse with comments and blank lines") {
  std::istringstream in(
      "# weighted triangle\n"
      "0 1 1.5\n"
      "\n"
      "1 2 2.0  # inline comment\n"
      "0 2 0.5\n");
  const auto g = parse_edge_list(in);
  REQUIRE(g.n() == 3);
  REQUIRE(g.m() == 3);
  REQUIRE_THAT(g.weight(g.link_index(1, 2)), WithinAbs(2.0, 1e-15));
}

TEST_CASE("edge list errors carry the line number") {
  std::istringstream bad("0 1 1.0\n2 3\n");
  REQUIRE_THROWS_WITH(parse_edge_list(bad), ContainsSubstring("line 2"));
  std::istringstream trailing("0 1 1.0 extra\n");
  REQUIRE_THROWS_WITH(parse_edge_list(trailing), ContainsSubstring("line 1"));
  std::istringstream negative("-1 2 1.0\n");
  REQUIRE_THROWS_AS(parse_edge_list(negative), ParseError);
  std::istringstream loop("1 1 1.0\n");
  REQUIRE_THROWS_AS(parse_edge_list(loop), ParseError);
}

TEST_CASE("a node-count hint adds isolated nodes") {
  std::istringstream in("0 1 1.0\n");
  REQUIRE(parse_edge_list(in, 5).n() == 5);
}

TEST_CASE("json round trip preserves the graph") {
  const auto g = build_graph(4, {{0, 1, 1.25}, {1, 2, 3.0}, {2, 3, 0.125}});
  const auto back = graph_from_json(graph_to_json(g));
  REQUIRE(back.n() == g.n());
  REQUIRE(back.links() == g.links());
  for (int e = 0; e < g.m(); ++e) REQUIRE(back.weight(e) == g.weight(e));
  REQUIRE_THROWS_AS(graph_from_json(nlohmann::json{{"n", 2}}), ParseError);
}

TEST_CASE("load_graph autodetects both formats") {
  const auto text = temp_path("graph.txt");
  write_file(text, "0 1 2.0\n1 2 2.0\n");
  const auto loaded_text = load_graph(text);
  REQUIRE(loaded_text.m() == 2);

  const auto g = build_graph(3, {{0, 1, 2.0}, {1, 2, 2.0}});
  const auto json_path = temp_path("graph.json");
  write_file(json_path, graph_to_json(g).dump());
  const auto loaded_json = load_graph(json_path);
  REQUIRE(loaded_json.links() == g.links());

  REQUIRE_THROWS_AS(load_graph("/nonexistent/nope.txt"), ParseError);
  std::remove(text.c_str());
  std::remove(json_path.c_str());
}

TEST_CASE("doubles survive formatting round trips") {
  for (double x : {1.0 / 3.0, 2.0e-17, -123456.789, 0.1, 3.141592653589793}) {
    REQUIRE(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("csv writers emit the promised headers and rows") {
  const auto g = build_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  const auto prof = effective_resistance(g);
  const auto report = curvature_report(g, prof);

  std::ostringstream res;
  write_resistance_csv(res, g, prof);
  REQUIRE_THAT(res.str(), ContainsSubstring("i,j,omega,relative\n"));
  REQUIRE_THAT(res.str(), ContainsSubstring("0,1,1,1\n"));

  std::ostringstream nodes;
  write_node_curvature_csv(nodes, report.p);
  REQUIRE_THAT(nodes.str(), ContainsSubstring("node,p\n0,0.5\n"));

  std::ostringstream links;
  write_link_curvature_csv(links, g, report.kappa, report.kappa_norm);
  REQUIRE_THAT(links.str(), ContainsSubstring("i,j,kappa,kappa_norm\n"));

  const auto j = report_to_json(g, report);
  REQUIRE(j.at("p").size() == 3);
  REQUIRE(j.at("links").size() == 2);
}

TEST_CASE("file hashes detect content changes") {
  const auto a = temp_path("hash_a"), b = temp_path("hash_b");
  write_file(a, "identical bytes");
  write_file(b, "identical bytes");
  REQUIRE(file_hash(a) == file_hash(b));
  write_file(b, "different bytes");
  REQUIRE(file_hash(a) != file_hash(b));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("run manifests serialize every field") {
  RunManifest manifest;
  manifest.command = "compute";
  manifest.parameters = {{"epsilon", 0.1}};
  manifest.seed = 42;
  manifest.tool_version = "test 0.0";
  manifest.input_hashes.emplace_back("in.txt", 123u);
  manifest.output_paths.push_back("out.csv");
  const auto j = manifest.to_json();
  REQUIRE(j.at("command") == "compute");
  REQUIRE(j.at("seed") == 42);
  REQUIRE(j.at("input_hashes").at("in.txt") == 123);
  REQUIRE(j.at("outputs").at(0) == "out.csv");

  const auto path = temp_path("manifest.json");
  manifest.write(path);
  std::ifstream in(path);
  nlohmann::json back;
  in >> back;
  REQUIRE(back == j);
  std::remove(path.c_str());
}
