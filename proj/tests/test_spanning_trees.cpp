#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "rescurv/experiments.hpp"
#include "rescurv/generators.hpp"
#include "rescurv/spanning_trees.hpp"
#include "rescurv/stats.hpp"

using namespace rescurv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("matrix-tree counts match the classics") {
  REQUIRE_THAT(tree_weight_total(make_cycle(7)), WithinRel(7.0, 1e-12));
  REQUIRE_THAT(tree_weight_total(make_complete(6)), WithinRel(std::pow(6.0, 4.0), 1e-12));
  REQUIRE_THAT(tree_weight_total(make_platonic("tetrahedron")), WithinRel(16.0, 1e-12));
  REQUIRE_THAT(tree_weight_total(make_platonic("cube")), WithinRel(384.0, 1e-12));
  REQUIRE_THAT(tree_weight_total(make_platonic("octahedron")), WithinRel(384.0, 1e-12));
  REQUIRE_THAT(tree_weight_total(make_platonic("dodecahedron")), WithinRel(5184000.0, 1e-9));
  REQUIRE_THAT(tree_weight_total(make_platonic("icosahedron")), WithinRel(5184000.0, 1e-9));
  REQUIRE_THROWS_AS(tree_weight_total(build_graph(3, {{0, 1, 1.0}})), DisconnectedError);
}

TEST_CASE("enumeration agrees with the weighted determinant") {
  const auto g = build_graph(4, {{0, 1, 2.0}, {0, 2, 1.0}, {1, 2, 3.0}, {1, 3, 1.5}, {2, 3, 0.5}});
  const auto trees = enumerate_spanning_trees(g);
  double total = 0;
  for (const auto& [tree, weight] : trees) {
    REQUIRE(tree.links.size() == 3);
    total += weight;
  }
  REQUIRE_THAT(total, WithinRel(tree_weight_total(g), 1e-12));
}

TEST_CASE("sampled trees are spanning trees") {
  const auto g = make_torus(3, 3);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto tree = sample_tree(g, s);
    REQUIRE(static_cast<int>(tree.links.size()) == g.n() - 1);
    std::vector<EdgeTriple> edges;
    for (const auto& l : tree.links) edges.push_back({l.i, l.j, 1.0});
    REQUIRE(components(WeightedGraph::from_edges(g.n(), edges)).beta == 1);
  }
}

TEST_CASE("the sampler hits the exact weighted tree distribution") {
  const auto g = build_graph(4, {{0, 1, 2.0}, {0, 2, 1.0}, {1, 2, 3.0}, {1, 3, 1.5}, {2, 3, 0.5}});
  const auto trees = enumerate_spanning_trees(g);
  double wsum = 0;
  for (const auto& [tree, weight] : trees) wsum += weight;

  const long samples = 60000;
  std::map<std::vector<Link>, long> hits;
  const Rng root(99);
  for (long s = 0; s < samples; ++s) ++hits[sample_tree(g, root.derive(s)).links];

  double chi2 = 0;
  for (const auto& [tree, weight] : trees) {
    const double expected = samples * weight / wsum;
    const double observed = static_cast<double>(hits[tree.links]);
    chi2 += (observed - expected) * (observed - expected) / expected;
  }
  REQUIRE(chi_square_p_value(chi2, static_cast<int>(trees.size()) - 1) > 0.001);
}

TEST_CASE("link inclusion frequency estimates the relative resistance") {
  const auto g = build_graph(4, {{0, 1, 2.0}, {0, 2, 1.0}, {1, 2, 3.0}, {1, 3, 1.5}, {2, 3, 0.5}});
  const auto rows = tree_inclusion_stats(g, 40000, 4321);
  for (const auto& row : rows) REQUIRE(row.pass);
}

TEST_CASE("tree links always appear in the sampled tree of a tree") {
  const auto g = make_star(6, 2.0);
  for (int e = 0; e < g.m(); ++e) {
    const auto [a, b] = g.links()[e];
    REQUIRE(link_inclusion_frequency(g, a, b, 200, 1) == 1.0);
  }
}

TEST_CASE("tree-degree average recovers the node curvature") {
  const auto g = build_graph(5, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 0, 1.5}, {2, 3, 1.0}, {3, 4, 0.5}});
  const auto prof = effective_resistance(g);
  const auto p = node_curvature(g, prof);
  for (int v = 0; v < g.n(); ++v) {
    const double estimate = expected_combinatorial_curvature(g, v, 60000, 77);
    REQUIRE_THAT(estimate, WithinAbs(p(v), 0.02));
  }
}

TEST_CASE("forest sampling covers disconnected graphs") {
  const auto g = build_graph(5, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}});
  const auto tree = sample_tree(g, 5);
  REQUIRE(tree.links.size() == 3);  // two per first component, one in the second
}

TEST_CASE("chi-square p-values behave at the extremes") {
  REQUIRE(chi_square_p_value(0.0, 5) > 0.999);
  REQUIRE(chi_square_p_value(100.0, 5) < 1e-10);
  REQUIRE_THAT(chi_square_p_value(1.0, 1), WithinAbs(0.3173, 5e-4));
}
