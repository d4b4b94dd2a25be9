#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rescurv/graph.hpp"
#include "rescurv/rng.hpp"

namespace rescurv {

struct DisconnectedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpanningTree {
  std::vector<Link> links;  // sorted; n_c - 1 links per component
};

// Total spanning-tree weight sum_T c(T), via the weighted matrix-tree
// determinant (any cofactor of the Laplacian). Connected graphs only.
inline double tree_weight_total(const WeightedGraph& g) {
  if (components(g).beta != 1) throw DisconnectedError("tree_weight_total needs a connected graph");
  if (g.n() == 1) return 1.0;
  const Eigen::MatrixXd q = laplacian(g);
  return q.block(1, 1, g.n() - 1, g.n() - 1).determinant();
}

// Wilson's loop-erased random-walk sampler; exact c(T)-proportional law,
// per component (a uniform random spanning forest), root = first node of
// each component.
inline SpanningTree sample_tree(const WeightedGraph& g, Rng rng) {
  const ComponentInfo comps = components(g);
  std::vector<char> in_tree(g.n(), 0);
  std::vector<int> succ(g.n(), -1);
  for (const auto& nodes : comps.members) in_tree[nodes[0]] = 1;

  for (int start = 0; start < g.n(); ++start) {
    if (in_tree[start]) continue;
    int u = start;
    while (!in_tree[u]) {
      const double k = g.weighted_degree(u);
      double pick = rng.next_double() * k;
      int chosen = g.neighbors(u).back().first;
      for (const auto& [v, idx] : g.neighbors(u)) {
        pick -= g.weight(idx);
        if (pick <= 0) {
          chosen = v;
          break;
        }
      }
      succ[u] = chosen;
      u = chosen;
    }
    u = start;
    while (!in_tree[u]) {
      in_tree[u] = 1;
      u = succ[u];
    }
  }
  SpanningTree tree;
  for (int v = 0; v < g.n(); ++v)
    if (succ[v] >= 0 && in_tree[v]) {
      bool is_root = false;
      for (const auto& nodes : comps.members) is_root = is_root || nodes[0] == v;
      if (!is_root) tree.links.push_back(make_link(v, succ[v]));
    }
  std::sort(tree.links.begin(), tree.links.end());
  return tree;
}

inline SpanningTree sample_tree(const WeightedGraph& g, std::uint64_t seed) {
  return sample_tree(g, Rng(seed));
}

// Empirical Pr[(a,b) in T] over `samples` trees with per-sample derived seeds.
inline double link_inclusion_frequency(const WeightedGraph& g, int a, int b, long samples,
                                       std::uint64_t seed) {
  const Link l = make_link(a, b);
  g.link_index(a, b);
  const Rng root(seed);
  long hits = 0;
  for (long s = 0; s < samples; ++s) {
    const SpanningTree t = sample_tree(g, root.derive(static_cast<std::uint64_t>(s)));
    if (std::binary_search(t.links.begin(), t.links.end(), l)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

// Mean of 1 - d_i^(T)/2 over sampled trees; converges to p_i.
inline double expected_combinatorial_curvature(const WeightedGraph& g, int node, long samples,
                                               std::uint64_t seed) {
  const Rng root(seed);
  double acc = 0;
  for (long s = 0; s < samples; ++s) {
    const SpanningTree t = sample_tree(g, root.derive(static_cast<std::uint64_t>(s)));
    int deg = 0;
    for (const Link& l : t.links) deg += (l.i == node || l.j == node) ? 1 : 0;
    acc += 1.0 - deg / 2.0;
  }
  return acc / static_cast<double>(samples);
}

// Exhaustive enumeration for small graphs (tests and the chi-square check).
inline std::vector<std::pair<SpanningTree, double>> enumerate_spanning_trees(const WeightedGraph& g) {
  if (components(g).beta != 1) throw DisconnectedError("enumeration needs a connected graph");
  const int n = g.n(), m = g.m();
  const int need = n - 1;
  std::vector<std::pair<SpanningTree, double>> out;
  std::vector<int> pick;
  std::vector<int> parent(n);

  auto acyclic_span = [&]() {
    for (int v = 0; v < n; ++v) parent[v] = v;
    auto find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (int e : pick) {
      const auto [i, j] = g.links()[e];
      const int ri = find(i), rj = find(j);
      if (ri == rj) return false;
      parent[ri] = rj;
    }
    return true;
  };

  std::function<void(int)> recurse = [&](int from) {
    if (static_cast<int>(pick.size()) == need) {
      if (acyclic_span()) {
        SpanningTree t;
        double w = 1;
        for (int e : pick) {
          t.links.push_back(g.links()[e]);
          w *= g.weight(e);
        }
        out.push_back({std::move(t), w});
      }
      return;
    }
    for (int e = from; e <= m - (need - static_cast<int>(pick.size())); ++e) {
      pick.push_back(e);
      recurse(e + 1);
      pick.pop_back();
    }
  };
  recurse(0);
  return out;
}

}  // namespace rescurv
