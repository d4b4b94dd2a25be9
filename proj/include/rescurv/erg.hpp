#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rescurv/curvature.hpp"
#include "rescurv/generators.hpp"
#include "rescurv/graph.hpp"
#include "rescurv/resistance.hpp"
#include "rescurv/rng.hpp"

namespace rescurv {

struct OutOfRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroAreaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QuadratureFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingGeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Area of the circular segment of a radius-r disc above height t:
// A(t) = r^2 arccos(t/r) - t sqrt(r^2 - t^2). A(-r) = pi r^2, A(r) = 0.
inline double segment_area(double t, double r) {
  if (r <= 0 || t < -r || t > r) throw OutOfRangeError("segment_area needs -r <= t <= r");
  const double clamped = std::clamp(t / r, -1.0, 1.0);
  return r * r * std::acos(clamped) - t * std::sqrt(std::max(r * r - t * t, 0.0));
}

// |dA(t)| = 2 sqrt(r^2 - t^2).
inline double segment_area_rate(double t, double r) {
  if (r <= 0 || t < -r || t > r) throw OutOfRangeError("segment_area_rate needs -r <= t <= r");
  return 2.0 * std::sqrt(std::max(r * r - t * t, 0.0));
}

// Reachable area around a node at distance D from a straight boundary:
// S(D) = A(max(-r, -D)), saturating at the full disc for D >= r.
inline double reachable_area(double D, double r) {
  if (D < 0) throw OutOfRangeError("reachable_area needs D >= 0");
  return segment_area(std::max(-r, -D), r);
}

// Heuristic resistance of a link: sum of the end nodes' inverse expected
// degrees, 1/(lambda S_i) + 1/(lambda S_j).
inline double heuristic_resistance(double area_i, double area_j, double lambda) {
  if (area_i <= 0 || area_j <= 0) throw ZeroAreaError("reachable areas must be positive");
  return 1.0 / (lambda * area_i) + 1.0 / (lambda * area_j);
}

struct BoundaryModel {
  double r = 1.0;       // connection radius
  double lambda = 1.0;  // point-process intensity
  int panels = 512;     // initial quadrature panel count

  bool valid() const { return r > 0 && lambda > 0 && panels >= 100; }
};

namespace detail {

// integral over t in [lo, hi] of |dA(t)| / A(t - D), with the endpoint
// square-root singularity of |dA| removed by t = r sin(theta); composite
// Simpson with doubling refinement.
inline double boundary_integral(double lo, double hi, double D, const BoundaryModel& model) {
  const double r = model.r;
  const double th_lo = std::asin(std::clamp(lo / r, -1.0, 1.0));
  const double th_hi = std::asin(std::clamp(hi / r, -1.0, 1.0));
  if (th_hi <= th_lo) return 0.0;
  auto integrand = [&](double th) {
    const double c = std::cos(th);
    const double t = r * std::sin(th);
    return 2.0 * r * r * c * c / segment_area(std::clamp(t - D, -r, r), r);
  };
  auto simpson = [&](int panels) {
    const double h = (th_hi - th_lo) / panels;
    double acc = integrand(th_lo) + integrand(th_hi);
    for (int k = 1; k < panels; ++k) acc += (k % 2 ? 4.0 : 2.0) * integrand(th_lo + k * h);
    return acc * h / 3.0;
  };
  int panels = model.panels + model.panels % 2;
  double prev = simpson(panels);
  for (int refine = 0; refine < 14; ++refine) {
    panels *= 2;
    const double next = simpson(panels);
    if (std::abs(next - prev) <= 1e-11 * std::max(1.0, std::abs(next))) return next;
    prev = next;
  }
  throw QuadratureFailureError("panel refinement exhausted");
}

}  // namespace detail

// Expected node curvature at distance D from a straight boundary under the
// inverse-expected-degree resistance heuristic. Exactly 0 in the bulk
// (D >= 2r); quadrature of the boundary / near-boundary branches otherwise.
inline double expected_boundary_curvature(double D, const BoundaryModel& model) {
  if (D < 0) throw OutOfRangeError("expected_boundary_curvature needs D >= 0");
  if (!model.valid()) throw OutOfRangeError("invalid boundary model");
  const double r = model.r;
  if (D >= 2 * r) return 0.0;
  const double upper = std::min(D, r);
  const double head = segment_area(std::clamp(D - r, -r, r), r) / (2.0 * M_PI * r * r);
  return head - 0.5 * detail::boundary_integral(D - r, upper, D, model);
}

// Per-node heuristic curvature on one sampled graph, from realized degrees
// and each neighbour's reachable area.
inline std::vector<double> heuristic_node_curvature(const WeightedGraph& g,
                                                    const std::vector<double>& boundary_distance,
                                                    const BoundaryModel& model) {
  if (static_cast<int>(boundary_distance.size()) != g.n())
    throw MissingGeometryError("one boundary distance per node required");
  std::vector<double> p_hat(g.n());
  for (int i = 0; i < g.n(); ++i) {
    double value = 1.0;
    const double own = 1.0 / (model.lambda * reachable_area(boundary_distance[i], model.r));
    for (const auto& [j, idx] : g.neighbors(i)) {
      (void)idx;
      value -= 0.5 * (own + 1.0 / (model.lambda * reachable_area(boundary_distance[j], model.r)));
    }
    p_hat[i] = value;
  }
  return p_hat;
}

struct ProfileBins {
  std::vector<double> edges;  // bins+1 edges on D/r, covering [0, R/r]
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<long> count;
  long skipped_samples = 0;
};

// Ensemble Monte Carlo of exact node curvature binned by scaled boundary
// distance D/r; per-sample derived seeds, commutative bin merge.
inline ProfileBins monte_carlo_profile(const ErgConfig& cfg, int ensemble_size, int bins) {
  if (!cfg.valid() || ensemble_size < 1 || bins < 1)
    throw OutOfRangeError("invalid profile parameters");
  ProfileBins out;
  const double span = cfg.disc_radius / cfg.connection_radius;
  out.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) out.edges[b] = span * b / bins;
  std::vector<double> sum(bins, 0), sum_sq(bins, 0);
  out.count.assign(bins, 0);

  const Rng root(cfg.seed);
  for (int s = 0; s < ensemble_size; ++s) {
    ErgConfig member = cfg;
    member.seed = root.derive(static_cast<std::uint64_t>(s)).next_u64();
    const ErgSample sample = euclidean_random_graph(member);
    Eigen::VectorXd p;
    try {
      const ResistanceProfile prof = effective_resistance(sample.graph);
      p = node_curvature(sample.graph, prof);
    } catch (const std::runtime_error&) {
      ++out.skipped_samples;
      continue;
    }
    for (int i = 0; i < sample.graph.n(); ++i) {
      const double scaled = sample.boundary_distance[i] / cfg.connection_radius;
      int b = static_cast<int>(scaled / span * bins);
      b = std::clamp(b, 0, bins - 1);
      sum[b] += p(i);
      sum_sq[b] += p(i) * p(i);
      ++out.count[b];
    }
  }
  out.mean.resize(bins);
  out.stddev.resize(bins);
  for (int b = 0; b < bins; ++b) {
    if (out.count[b] == 0) {
      out.mean[b] = 0;
      out.stddev[b] = 0;
      continue;
    }
    out.mean[b] = sum[b] / out.count[b];
    const double var =
        std::max(sum_sq[b] / out.count[b] - out.mean[b] * out.mean[b], 0.0);
    out.stddev[b] = std::sqrt(var);
  }
  return out;
}

}  // namespace rescurv
