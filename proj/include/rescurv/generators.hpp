#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rescurv/graph.hpp"
#include "rescurv/rng.hpp"

namespace rescurv {

struct InvalidSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline WeightedGraph make_path(int n, double c = 1.0) {
  if (n < 1) throw InvalidSizeError("path needs n >= 1");
  std::vector<EdgeTriple> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, c});
  return WeightedGraph::from_edges(n, edges);
}

inline WeightedGraph make_cycle(int n, double c = 1.0) {
  if (n < 3) throw InvalidSizeError("cycle needs n >= 3");
  std::vector<EdgeTriple> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, c});
  return WeightedGraph::from_edges(n, edges);
}

inline WeightedGraph make_complete(int n, double c = 1.0) {
  if (n < 1) throw InvalidSizeError("complete graph needs n >= 1");
  std::vector<EdgeTriple> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j, c});
  return WeightedGraph::from_edges(n, edges);
}

inline WeightedGraph make_star(int n, double c = 1.0) {
  if (n < 1) throw InvalidSizeError("star needs n >= 1");
  std::vector<EdgeTriple> edges;
  for (int leaf = 1; leaf < n; ++leaf) edges.push_back({0, leaf, c});
  return WeightedGraph::from_edges(n, edges);
}

// Finite Bethe-lattice piece: root of degree d, interior nodes of degree d,
// leaves at the given depth. depth = 0 is a single node.
inline WeightedGraph make_regular_tree(int d, int depth, double c = 1.0) {
  if (d < 1 || depth < 0) throw InvalidSizeError("regular tree needs d >= 1, depth >= 0");
  std::vector<EdgeTriple> edges;
  int next = 1;
  std::vector<int> frontier{0};
  for (int level = 0; level < depth; ++level) {
    std::vector<int> fresh;
    const int fanout_root = d, fanout_inner = d - 1;
    for (int v : frontier) {
      const int fanout = (level == 0) ? fanout_root : fanout_inner;
      for (int k = 0; k < fanout; ++k) {
        edges.push_back({v, next, c});
        fresh.push_back(next++);
      }
    }
    frontier = std::move(fresh);
  }
  return WeightedGraph::from_edges(next, edges);
}

// Periodic square lattice; 4-regular, node-transitive, link-transitive when
// width == height.
inline WeightedGraph make_torus(int width, int height, double c = 1.0) {
  if (width < 3 || height < 3) throw InvalidSizeError("torus needs width, height >= 3");
  auto id = [&](int x, int y) { return ((x + width) % width) + width * ((y + height) % height); };
  std::vector<EdgeTriple> edges;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      edges.push_back({id(x, y), id(x + 1, y), c});
      edges.push_back({id(x, y), id(x, y + 1), c});
    }
  return WeightedGraph::from_edges(width * height, edges);
}

// Periodic triangular lattice (square torus plus one diagonal per cell);
// 6-regular.
inline WeightedGraph make_triangular_torus(int width, int height, double c = 1.0) {
  if (width < 3 || height < 3) throw InvalidSizeError("triangular torus needs width, height >= 3");
  auto id = [&](int x, int y) { return ((x + width) % width) + width * ((y + height) % height); };
  std::vector<EdgeTriple> edges;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      edges.push_back({id(x, y), id(x + 1, y), c});
      edges.push_back({id(x, y), id(x, y + 1), c});
      edges.push_back({id(x, y), id(x + 1, y + 1), c});
    }
  return WeightedGraph::from_edges(width * height, edges);
}

// Periodic honeycomb in brick-wall coordinates: every node keeps both
// vertical links and one horizontal link (present when x+y is even);
// 3-regular. width must be even for the horizontal wrap to stay consistent.
inline WeightedGraph make_hexagonal_torus(int width, int height, double c = 1.0) {
  if (width < 4 || height < 3 || width % 2 != 0)
    throw InvalidSizeError("hexagonal torus needs even width >= 4 and height >= 3");
  auto id = [&](int x, int y) { return ((x + width) % width) + width * ((y + height) % height); };
  std::vector<EdgeTriple> edges;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      edges.push_back({id(x, y), id(x, y + 1), c});
      if ((x + y) % 2 == 0) edges.push_back({id(x, y), id(x + 1, y), c});
    }
  return WeightedGraph::from_edges(width * height, edges);
}

inline WeightedGraph make_platonic(const std::string& which, double c = 1.0) {
  std::vector<EdgeTriple> edges;
  int n = 0;
  auto add = [&](int i, int j) { edges.push_back({i, j, c}); };
  if (which == "tetrahedron") {
    n = 4;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) add(i, j);
  } else if (which == "cube") {
    n = 8;
    for (int v = 0; v < 8; ++v)
      for (int bit = 0; bit < 3; ++bit)
        if (v < (v ^ (1 << bit))) add(v, v ^ (1 << bit));
  } else if (which == "octahedron") {
    n = 6;  // K_{2,2,2}: all pairs except the three antipodal ones
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!(j == i + 1 && i % 2 == 0)) add(i, j);
  } else if (which == "dodecahedron") {
    n = 20;  // LCF notation [10,7,4,-4,-7,10,-4,7,-7,4]^2
    static const int lcf[10] = {10, 7, 4, -4, -7, 10, -4, 7, -7, 4};
    for (int v = 0; v < n; ++v) {
      add(v, (v + 1) % n);
      const int w = ((v + lcf[v % 10]) % n + n) % n;
      if (v < w) add(v, w);
    }
  } else if (which == "icosahedron") {
    n = 12;  // apex 0, upper ring 1-5, lower ring 6-10, apex 11
    for (int k = 0; k < 5; ++k) {
      add(0, 1 + k);
      add(11, 6 + k);
      add(1 + k, 1 + (k + 1) % 5);
      add(6 + k, 6 + (k + 1) % 5);
      add(1 + k, 6 + k);
      add(1 + k, 6 + (k + 4) % 5);
    }
  } else {
    throw InvalidSizeError("unknown platonic solid: " + which);
  }
  return WeightedGraph::from_edges(n, edges);
}

// String dispatch for the deterministic families, used by the CLI:
// path/cycle/complete/star take `size`; "regular_tree:D:DEPTH",
// "torus:WxH", "tri_torus:WxH", "hex_torus:WxH" and "platonic:NAME" carry
// their parameters in the kind string.
inline WeightedGraph make_family(const std::string& kind, int size, double c = 1.0) {
  auto split = [&](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      const std::size_t next = s.find(sep, pos);
      parts.push_back(s.substr(pos, next - pos));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    return parts;
  };
  if (kind == "path") return make_path(size, c);
  if (kind == "cycle") return make_cycle(size, c);
  if (kind == "complete") return make_complete(size, c);
  if (kind == "star") return make_star(size, c);
  const auto head = split(kind, ':');
  try {
    if (head[0] == "regular_tree" && head.size() == 3)
      return make_regular_tree(std::stoi(head[1]), std::stoi(head[2]), c);
    if (head[0] == "platonic" && head.size() == 2) return make_platonic(head[1], c);
    if ((head[0] == "torus" || head[0] == "tri_torus" || head[0] == "hex_torus") &&
        head.size() == 2) {
      const auto dims = split(head[1], 'x');
      if (dims.size() == 2) {
        const int w = std::stoi(dims[0]), h = std::stoi(dims[1]);
        if (head[0] == "torus") return make_torus(w, h, c);
        if (head[0] == "tri_torus") return make_triangular_torus(w, h, c);
        return make_hexagonal_torus(w, h, c);
      }
    }
  } catch (const std::invalid_argument&) {
    throw InvalidSizeError("malformed family parameters: " + kind);
  }
  throw InvalidSizeError("unknown family kind: " + kind);
}

// Unit-weight G(n, rho): every pair linked independently with probability
// rho, deterministic per seed.
inline WeightedGraph erdos_renyi(int n, double rho, std::uint64_t seed) {
  if (n < 0 || rho < 0 || rho > 1) throw InvalidSizeError("erdos_renyi needs n >= 0, rho in [0,1]");
  Rng rng(seed);
  std::vector<EdgeTriple> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(rho)) edges.push_back({i, j, 1.0});
  return WeightedGraph::from_edges(n, edges);
}

struct ErgConfig {
  double disc_radius = 1.0;        // R
  double connection_radius = 0.25; // r
  double expected_nodes = 100.0;   // N; intensity lambda = N / (pi R^2)
  std::uint64_t seed = 0;
  bool fixed_count = false;  // draw exactly round(N) points instead of Poisson(N)

  bool valid() const { return disc_radius > 0 && connection_radius > 0 && expected_nodes > 0; }
  double intensity() const {
    return expected_nodes / (M_PI * disc_radius * disc_radius);
  }
};

struct ErgSample {
  WeightedGraph graph;
  std::vector<std::array<double, 2>> positions;
  std::vector<double> boundary_distance;  // D_i = R - |x_i|
};

// Poisson point process on the disc of radius R, hard links within
// Euclidean distance r, unit weights.
inline ErgSample euclidean_random_graph(const ErgConfig& cfg) {
  if (!cfg.valid()) throw InvalidSizeError("invalid ERG configuration");
  Rng rng(cfg.seed);
  const int count = cfg.fixed_count ? static_cast<int>(std::llround(cfg.expected_nodes))
                                    : static_cast<int>(rng.poisson(cfg.expected_nodes));
  ErgSample sample;
  sample.positions.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double rad = cfg.disc_radius * std::sqrt(rng.next_double());
    const double ang = 2.0 * M_PI * rng.next_double();
    sample.positions.push_back({rad * std::cos(ang), rad * std::sin(ang)});
    sample.boundary_distance.push_back(cfg.disc_radius - rad);
  }
  std::vector<EdgeTriple> edges;
  const double r2 = cfg.connection_radius * cfg.connection_radius;
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j) {
      const double dx = sample.positions[i][0] - sample.positions[j][0];
      const double dy = sample.positions[i][1] - sample.positions[j][1];
      if (dx * dx + dy * dy <= r2) edges.push_back({i, j, 1.0});
    }
  sample.graph = WeightedGraph::from_edges(count, edges);
  return sample;
}

}  // namespace rescurv
