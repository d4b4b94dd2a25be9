#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rescurv/curvature.hpp"
#include "rescurv/graph.hpp"
#include "rescurv/resistance.hpp"

namespace rescurv {

struct InvalidFaceDegreeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleMarginalsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Combinatorial curvature 1 - d/2 + sum over faces 1/d_f for a node of a
// plane-embedded graph. Face degree 0 marks the unbounded face, which
// contributes nothing.
inline double combinatorial_curvature(int degree, const std::vector<int>& face_degrees) {
  if (degree < 0) throw InvalidFaceDegreeError("negative degree");
  double value = 1.0 - degree / 2.0;
  for (int df : face_degrees) {
    if (df == 0) continue;  // unbounded face
    if (df < 3) throw InvalidFaceDegreeError("face degree must be >= 3 or 0 (unbounded)");
    value += 1.0 / df;
  }
  return value;
}

// Forman-Ricci curvature of a link with respect to unit node/link weights;
// on graphs this reduces to 4 - d_i - d_j.
inline double forman_curvature(const WeightedGraph& g, int a, int b) {
  g.link_index(a, b);
  return 4.0 - g.degree(a) - g.degree(b);
}

// General weighted Forman-Ricci formula with explicit node and link weights.
// Link weights are indexed like g.links().
inline double forman_curvature_weighted(const WeightedGraph& g, int a, int b,
                                        const std::vector<double>& node_w,
                                        const std::vector<double>& link_w) {
  const int e = g.link_index(a, b);
  const double w_ab = link_w[e];
  auto half = [&](int x) {
    double s = 0;
    for (const auto& [y, idx] : g.neighbors(x)) {
      (void)y;
      s += std::sqrt(w_ab / link_w[idx]);
    }
    return 2.0 * node_w[x] * (1.0 - 0.5 * s);
  };
  return half(a) + half(b);
}

struct TransportPlan {
  Eigen::MatrixXd entries;  // row marginals mu, column marginals nu
  double cost = 0;
};

// Exact Wasserstein-1 transport between two small distributions under an
// arbitrary nonnegative cost, by successive shortest augmenting paths on the
// bipartite residual network. Supports here are at most d_i + 1 points, so
// the dense Bellman-Ford search is cheap.
inline TransportPlan wasserstein1(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                                  const Eigen::MatrixXd& cost) {
  const int a = static_cast<int>(mu.size());
  const int b = static_cast<int>(nu.size());
  if (cost.rows() != a || cost.cols() != b)
    throw std::invalid_argument("wasserstein1: cost shape mismatch");
  if (mu.minCoeff() < -1e-12 || nu.minCoeff() < -1e-12 || std::abs(mu.sum() - nu.sum()) > 1e-10)
    throw InfeasibleMarginalsError("marginals must be nonnegative with equal mass");

  Eigen::VectorXd supply = mu.cwiseMax(0.0);
  Eigen::VectorXd demand = nu.cwiseMax(0.0);
  // Balance the tiny rounding mismatch so the loop terminates exactly.
  demand *= supply.sum() > 0 ? supply.sum() / std::max(demand.sum(), 1e-300) : 1.0;

  TransportPlan plan;
  plan.entries = Eigen::MatrixXd::Zero(a, b);
  const double eps = 1e-14 * std::max(1.0, supply.sum());
  const double inf = std::numeric_limits<double>::infinity();

  while (supply.maxCoeff() > eps) {
    // Bellman-Ford over residual arcs: forward x->y at cost(x,y), backward
    // y->x at -cost(x,y) where flow is present.
    Eigen::VectorXd dist_x = Eigen::VectorXd::Constant(a, inf);
    Eigen::VectorXd dist_y = Eigen::VectorXd::Constant(b, inf);
    std::vector<int> pred_y(b, -1), pred_x(a, -1);
    for (int x = 0; x < a; ++x)
      if (supply(x) > eps) dist_x(x) = 0;
    for (int pass = 0; pass < a + b + 1; ++pass) {
      bool changed = false;
      for (int x = 0; x < a; ++x) {
        if (dist_x(x) == inf) continue;
        for (int y = 0; y < b; ++y) {
          if (dist_x(x) + cost(x, y) < dist_y(y) - 1e-15) {
            dist_y(y) = dist_x(x) + cost(x, y);
            pred_y[y] = x;
            changed = true;
          }
        }
      }
      for (int y = 0; y < b; ++y) {
        if (dist_y(y) == inf) continue;
        for (int x = 0; x < a; ++x) {
          if (plan.entries(x, y) > eps && dist_y(y) - cost(x, y) < dist_x(x) - 1e-15) {
            dist_x(x) = dist_y(y) - cost(x, y);
            pred_x[x] = y;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    int best_y = -1;
    for (int y = 0; y < b; ++y)
      if (demand(y) > eps && (best_y < 0 || dist_y(y) < dist_y(best_y))) best_y = y;
    if (best_y < 0 || dist_y(best_y) == inf)
      throw InfeasibleMarginalsError("no augmenting path; marginals inconsistent");

    // Trace the path back to a source and find the bottleneck.
    double bottleneck = demand(best_y);
    for (int y = best_y;;) {
      const int x = pred_y[y];
      if (pred_x[x] < 0) {
        bottleneck = std::min(bottleneck, supply(x));
        break;
      }
      y = pred_x[x];
      bottleneck = std::min(bottleneck, plan.entries(x, y));
    }
    for (int y = best_y;;) {
      const int x = pred_y[y];
      plan.entries(x, y) += bottleneck;
      if (pred_x[x] < 0) {
        supply(x) -= bottleneck;
        break;
      }
      y = pred_x[x];
      plan.entries(x, y) -= bottleneck;
    }
    demand(best_y) -= bottleneck;
  }
  plan.cost = (plan.entries.array() * cost.array()).sum();
  return plan;
}

namespace detail {

// W1 between walk balls around the end nodes of a link under the resistance
// metric, with balls restricted to their supports.
inline double ball_wasserstein(const WeightedGraph& g, const ResistanceProfile& prof, int a, int b,
                               double t, bool normalized) {
  auto support = [&](int v) {
    std::vector<int> s{v};
    for (const auto& [w, idx] : g.neighbors(v)) {
      (void)idx;
      s.push_back(w);
    }
    return s;
  };
  auto ball = [&](int v, const std::vector<int>& s) {
    Eigen::VectorXd mu(s.size());
    const double kv = g.weighted_degree(v);
    for (std::size_t x = 0; x < s.size(); ++x) {
      if (s[x] == v) {
        mu(x) = normalized ? 1.0 - t : 1.0 - t * kv;
      } else {
        const double c = g.weight(g.link_index(v, s[x]));
        mu(x) = normalized ? t * c / kv : t * c;
      }
    }
    return mu;
  };
  const std::vector<int> sa = support(a), sb = support(b);
  Eigen::MatrixXd cost(sa.size(), sb.size());
  for (std::size_t x = 0; x < sa.size(); ++x)
    for (std::size_t y = 0; y < sb.size(); ++y) cost(x, y) = prof.omega(sa[x], sb[y]);
  return wasserstein1(ball(a, sa), ball(b, sb), cost).cost;
}

inline double or_limit(const WeightedGraph& g, const ResistanceProfile& prof, int a, int b,
                       bool normalized) {
  const int e = g.link_index(a, b);
  const double omega = prof.link_omega[e];
  double t0 = 1.0 / (8.0 * g.max_weighted_degree());
  // The W1 basis can switch above some t threshold; refine toward 0 until
  // the tail is affine.
  for (int attempt = 0;; ++attempt) {
    try {
      return affine_limit(t0, [&](double t) {
               return (1.0 - ball_wasserstein(g, prof, a, b, t, normalized) / omega) / t;
             })
          .value;
    } catch (const NonLinearTailError&) {
      if (attempt >= 6) throw;
      t0 /= 2;
    }
  }
}

}  // namespace detail

// Ollivier-Ricci curvature of a link with respect to the resistance metric
// and the lazy random walk (I - Qt) e_i, as the t -> 0 limit.
inline double ollivier_curvature_resistance(const WeightedGraph& g, const ResistanceProfile& prof,
                                            int a, int b) {
  return detail::or_limit(g, prof, a, b, /*normalized=*/false);
}

// Lin-Lu-Yau variant with the degree-normalized lazy walk.
inline double lly_normalized_curvature(const WeightedGraph& g, const ResistanceProfile& prof, int a,
                                       int b) {
  return detail::or_limit(g, prof, a, b, /*normalized=*/true);
}

}  // namespace rescurv
