#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rescurv {

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SelfLoopError : GraphError {
  using GraphError::GraphError;
};
struct NonpositiveWeightError : GraphError {
  using GraphError::GraphError;
};
struct DuplicateLinkError : GraphError {
  using GraphError::GraphError;
};
struct IndexOutOfRangeError : GraphError {
  using GraphError::GraphError;
};
struct LinkNotFoundError : GraphError {
  using GraphError::GraphError;
};

// Unordered node pair stored with i < j.
struct Link {
  int i;
  int j;
  friend bool operator==(const Link&, const Link&) = default;
  friend auto operator<=>(const Link&, const Link&) = default;
};

inline Link make_link(int a, int b) { return a < b ? Link{a, b} : Link{b, a}; }

struct EdgeTriple {
  int i;
  int j;
  double weight;
};

// Simple undirected weighted graph on dense node ids 0..n-1.
// Immutable after construction; all queries are read-only.
class WeightedGraph {
public:
  WeightedGraph() = default;

  static WeightedGraph from_edges(int n, const std::vector<EdgeTriple>& edges) {
    if (n < 0) throw IndexOutOfRangeError("negative node count");
    std::map<Link, double> canonical;
    for (const auto& e : edges) {
      if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
        throw IndexOutOfRangeError("node index out of range: (" + std::to_string(e.i) + "," +
                                   std::to_string(e.j) + ") with n=" + std::to_string(n));
      if (e.i == e.j) throw SelfLoopError("self loop at node " + std::to_string(e.i));
      if (!(e.weight > 0))
        throw NonpositiveWeightError("nonpositive weight on link (" + std::to_string(e.i) + "," +
                                     std::to_string(e.j) + ")");
      const Link l = make_link(e.i, e.j);
      auto [it, inserted] = canonical.emplace(l, e.weight);
      if (!inserted && it->second != e.weight)
        throw DuplicateLinkError("duplicate link (" + std::to_string(l.i) + "," +
                                 std::to_string(l.j) + ") with conflicting weights");
    }
    WeightedGraph g;
    g.n_ = n;
    g.adj_.assign(n, {});
    g.links_.reserve(canonical.size());
    g.weights_.reserve(canonical.size());
    for (const auto& [l, w] : canonical) {
      const int idx = static_cast<int>(g.links_.size());
      g.links_.push_back(l);
      g.weights_.push_back(w);
      g.adj_[l.i].push_back({l.j, idx});
      g.adj_[l.j].push_back({l.i, idx});
    }
    return g;
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(links_.size()); }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int link_index) const { return weights_[link_index]; }

  // Neighbors of a node as (neighbor, link index) pairs.
  const std::vector<std::pair<int, int>>& neighbors(int i) const { return adj_[i]; }

  int degree(int i) const { return static_cast<int>(adj_[i].size()); }

  double weighted_degree(int i) const {
    double k = 0;
    for (const auto& [j, idx] : adj_[i]) k += weights_[idx];
    return k;
  }

  double max_weighted_degree() const {
    double k = 0;
    for (int i = 0; i < n_; ++i) k = std::max(k, weighted_degree(i));
    return k;
  }

  int link_index(int a, int b) const {
    const Link l = make_link(a, b);
    const auto it = std::lower_bound(links_.begin(), links_.end(), l);
    if (it == links_.end() || *it != l)
      throw LinkNotFoundError("no link (" + std::to_string(a) + "," + std::to_string(b) + ")");
    return static_cast<int>(it - links_.begin());
  }

  bool has_link(int a, int b) const {
    const Link l = make_link(a, b);
    return std::binary_search(links_.begin(), links_.end(), l);
  }

private:
  int n_ = 0;
  std::vector<Link> links_;       // sorted
  std::vector<double> weights_;   // parallel to links_
  std::vector<std::vector<std::pair<int, int>>> adj_;
};

inline WeightedGraph build_graph(int n, const std::vector<EdgeTriple>& edges) {
  return WeightedGraph::from_edges(n, edges);
}

inline Eigen::MatrixXd laplacian(const WeightedGraph& g) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (int e = 0; e < g.m(); ++e) {
    const auto [i, j] = g.links()[e];
    const double c = g.weight(e);
    q(i, i) += c;
    q(j, j) += c;
    q(i, j) -= c;
    q(j, i) -= c;
  }
  return q;
}

struct ComponentInfo {
  int beta = 0;                // number of connected components
  std::vector<int> labels;     // node -> component id, ids are 0..beta-1
  std::vector<std::vector<int>> members;  // component id -> node list (sorted)
};

namespace detail {

// Components of the graph with `removed_nodes[v]` nodes and optionally one
// link skipped. Nodes marked removed get label -1.
inline ComponentInfo components_masked(const WeightedGraph& g, const std::vector<char>& removed_nodes,
                                       int skip_link = -1) {
  ComponentInfo info;
  info.labels.assign(g.n(), -1);
  std::vector<int> stack;
  for (int s = 0; s < g.n(); ++s) {
    if (removed_nodes[s] || info.labels[s] >= 0) continue;
    const int comp = info.beta++;
    info.members.push_back({});
    stack.push_back(s);
    info.labels[s] = comp;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      info.members[comp].push_back(v);
      for (const auto& [w, idx] : g.neighbors(v)) {
        if (idx == skip_link || removed_nodes[w] || info.labels[w] >= 0) continue;
        info.labels[w] = comp;
        stack.push_back(w);
      }
    }
  }
  for (auto& mem : info.members) std::sort(mem.begin(), mem.end());
  return info;
}

}  // namespace detail

inline ComponentInfo components(const WeightedGraph& g) {
  return detail::components_masked(g, std::vector<char>(g.n(), 0));
}

inline bool is_cut_link(const WeightedGraph& g, int a, int b) {
  const int idx = g.link_index(a, b);  // throws LinkNotFoundError
  const int before = components(g).beta;
  const int after = detail::components_masked(g, std::vector<char>(g.n(), 0), idx).beta;
  return after > before;
}

// Component count of the graph with the given nodes (and incident links) deleted.
inline int removal_components(const WeightedGraph& g, const std::vector<int>& nodes) {
  std::vector<char> removed(g.n(), 0);
  for (int v : nodes) {
    if (v < 0 || v >= g.n()) throw IndexOutOfRangeError("removal node out of range");
    removed[v] = 1;
  }
  return detail::components_masked(g, removed).beta;
}

// Contract link (i,j): j is absorbed into i, parallel links combine by
// weight addition, indices above j shift down by one.
inline WeightedGraph merge_nodes(const WeightedGraph& g, int a, int b) {
  g.link_index(a, b);  // throws LinkNotFoundError if absent
  const int keep = std::min(a, b);
  const int drop = std::max(a, b);
  auto remap = [&](int v) {
    if (v == drop) return keep;
    return v > drop ? v - 1 : v;
  };
  std::map<Link, double> combined;
  for (int e = 0; e < g.m(); ++e) {
    const auto [i, j] = g.links()[e];
    const int ri = remap(i), rj = remap(j);
    if (ri == rj) continue;  // the contracted link itself
    combined[make_link(ri, rj)] += g.weight(e);
  }
  std::vector<EdgeTriple> edges;
  edges.reserve(combined.size());
  for (const auto& [l, w] : combined) edges.push_back({l.i, l.j, w});
  return WeightedGraph::from_edges(g.n() - 1, edges);
}

}  // namespace rescurv
