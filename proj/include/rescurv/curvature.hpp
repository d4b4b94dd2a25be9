#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rescurv/graph.hpp"
#include "rescurv/resistance.hpp"

namespace rescurv {

struct SingularOmegaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonLinearTailError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotADistributionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NegativeEigenvalueError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// p_i = 1 - (1/2) sum_{j~i} c_ij omega_ij; isolated nodes get p = 1.
inline Eigen::VectorXd node_curvature(const WeightedGraph& g, const ResistanceProfile& prof) {
  Eigen::VectorXd p = Eigen::VectorXd::Ones(g.n());
  for (int e = 0; e < g.m(); ++e) {
    const auto [i, j] = g.links()[e];
    p(i) -= 0.5 * prof.relative[e];
    p(j) -= 0.5 * prof.relative[e];
  }
  return p;
}

// kappa_ij = 2 (p_i + p_j) / omega_ij, per link index.
inline std::vector<double> link_curvature(const WeightedGraph& g, const ResistanceProfile& prof,
                                          const Eigen::VectorXd& p) {
  std::vector<double> kappa(g.m());
  for (int e = 0; e < g.m(); ++e) {
    const auto [i, j] = g.links()[e];
    kappa[e] = 2.0 * (p(i) + p(j)) / prof.link_omega[e];
  }
  return kappa;
}

// Degree-normalized variant 2 (p_i/k_i + p_j/k_j) / omega_ij.
inline std::vector<double> normalized_link_curvature(const WeightedGraph& g, const ResistanceProfile& prof,
                                                     const Eigen::VectorXd& p) {
  std::vector<double> kn(g.m());
  for (int e = 0; e < g.m(); ++e) {
    const auto [i, j] = g.links()[e];
    const double ki = g.weighted_degree(i);
    const double kj = g.weighted_degree(j);
    kn[e] = 2.0 * (p(i) / ki + p(j) / kj) / prof.link_omega[e];
  }
  return kn;
}

// sigma^2 = (1/2) p^T Omega p per connected component.
inline std::vector<double> sigma_squared(const ResistanceProfile& prof, const Eigen::VectorXd& p) {
  std::vector<double> sigma2(prof.comps.beta, 0.0);
  for (int comp = 0; comp < prof.comps.beta; ++comp) {
    const auto& nodes = prof.comps.members[comp];
    double acc = 0;
    for (int a : nodes)
      for (int b : nodes) acc += p(a) * prof.omega(a, b) * p(b);
    sigma2[comp] = 0.5 * acc;
  }
  return sigma2;
}

struct CurvatureReport {
  Eigen::VectorXd p;
  std::vector<double> kappa;
  std::vector<double> kappa_norm;
  std::vector<double> sigma2;  // per component; only for exact profiles
};

inline CurvatureReport curvature_report(const WeightedGraph& g, const ResistanceProfile& prof) {
  CurvatureReport rep;
  rep.p = node_curvature(g, prof);
  rep.kappa = link_curvature(g, prof, rep.p);
  rep.kappa_norm = normalized_link_curvature(g, prof, rep.p);
  if (prof.exact) rep.sigma2 = sigma_squared(prof, rep.p);
  return rep;
}

// Per-node and per-link bound records with their equality conditions.
// Approximate profiles widen tolerances to 3*epsilon.
struct NodeBoundRecord {
  int node;
  double p;
  double lower;        // 1 - d_i/2
  double upper;        // 1 - beta(G_i \ {i}) / 2
  bool all_links_cut;  // equality condition for both bounds
  bool is_cut_node;
  bool ok;
};

struct LinkBoundRecord {
  Link link;
  double kappa;
  double lower;  // (4 - d_i - d_j) / omega
  double upper;  // (6 - 2 beta(G\(i,j)) - beta(G\{i,j})) / omega
  bool ok;
};

struct BoundsReport {
  std::vector<NodeBoundRecord> nodes;
  std::vector<LinkBoundRecord> links;
  bool all_ok = true;
};

inline BoundsReport bounds_report(const WeightedGraph& g, const ResistanceProfile& prof,
                                  const Eigen::VectorXd& p, const std::vector<double>& kappa) {
  const double tol = prof.exact ? 1e-9 : 3 * prof.epsilon;
  BoundsReport rep;
  const int beta0 = prof.comps.beta;
  for (int i = 0; i < g.n(); ++i) {
    if (g.degree(i) < 1) continue;
    NodeBoundRecord rec{};
    rec.node = i;
    rec.p = p(i);
    rec.lower = 1.0 - g.degree(i) / 2.0;
    // beta(G_i \ {i}): components of the removal restricted to i's component.
    const int removed_beta = removal_components(g, {i});
    const int local_beta = removed_beta - (beta0 - 1);
    rec.upper = 1.0 - local_beta / 2.0;
    rec.is_cut_node = local_beta > 1;
    rec.all_links_cut = true;
    for (const auto& [j, idx] : g.neighbors(i)) {
      (void)j;
      const auto [a, b] = g.links()[idx];
      if (!is_cut_link(g, a, b)) rec.all_links_cut = false;
    }
    rec.ok = rec.p >= rec.lower - tol && rec.p <= rec.upper + tol;
    if (rec.all_links_cut) rec.ok = rec.ok && std::abs(rec.p - rec.lower) <= tol;
    if (rec.is_cut_node) {
      rec.ok = rec.ok && rec.p <= tol;
      if (g.degree(i) == 2 && rec.all_links_cut)
        rec.ok = rec.ok && std::abs(rec.p) <= tol;
    }
    rep.all_ok = rep.all_ok && rec.ok;
    rep.nodes.push_back(rec);
  }
  for (int e = 0; e < g.m(); ++e) {
    const auto [i, j] = g.links()[e];
    LinkBoundRecord rec{};
    rec.link = {i, j};
    rec.kappa = kappa[e];
    const double omega = prof.link_omega[e];
    rec.lower = (4.0 - g.degree(i) - g.degree(j)) / omega;
    const int beta_link = detail::components_masked(g, std::vector<char>(g.n(), 0), e).beta - (beta0 - 1);
    const int beta_nodes = removal_components(g, {i, j}) - (beta0 - 1);
    rec.upper = (6.0 - 2.0 * beta_link - beta_nodes) / omega;
    rec.ok = rec.kappa >= rec.lower - tol && rec.kappa <= rec.upper + tol;
    rep.all_ok = rep.all_ok && rec.ok;
    rep.links.push_back(rec);
  }
  return rep;
}

// Equilibrium characterization p = Omega^{-1} u / (u^T Omega^{-1} u) on a
// connected graph.
inline Eigen::VectorXd equilibrium_curvature(const ResistanceProfile& prof) {
  if (prof.comps.beta != 1) throw SingularOmegaError("equilibrium curvature needs a connected graph");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(prof.omega);
  if (!lu.isInvertible()) throw SingularOmegaError("resistance matrix numerically singular");
  const Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Ones(prof.n));
  return x / x.sum();
}

struct HeatDistribution {
  double t;
  int source;
  Eigen::VectorXd values;
};

// exp(-Q t) e_i via eigendecomposition of the (symmetric PSD) Laplacian.
inline HeatDistribution heat_distribution(const Eigen::MatrixXd& q, int source, double t) {
  if (t < 0) throw std::invalid_argument("heat_distribution: t must be nonnegative");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  const Eigen::VectorXd decay = (-t * es.eigenvalues().array()).exp();
  HeatDistribution h;
  h.t = t;
  h.source = source;
  h.values = es.eigenvectors() * (decay.asDiagonal() * es.eigenvectors().row(source).transpose());
  return h;
}

struct LimitFit {
  double value;  // extrapolated t -> 0 intercept
  double slope;
};

namespace detail {

// Affine extrapolation on t in {t0, t0/2, t0/4}: fit on the two smallest,
// use the largest as a consistency probe for the affine tail.
inline LimitFit affine_limit(double t0, const std::function<double(double)>& f) {
  const double f0 = f(t0), f1 = f(t0 / 2), f2 = f(t0 / 4);
  const double slope = (f1 - f2) / (t0 / 4);
  const double value = f2 - slope * (t0 / 4);
  const double predicted = value + slope * t0;
  const double scale = std::max({1.0, std::abs(f0), std::abs(f1), std::abs(f2)});
  if (std::abs(f0 - predicted) > 1e-7 * scale)
    throw NonLinearTailError("limit quantity is not affine in t at the probe scale");
  return {value, slope};
}

}  // namespace detail

// t -> 0 limit of 1 - (1/4t) mu^T Omega mu with the first-order ball
// mu = (I - Qt) e_i; exactly affine in t with slope k_i/2.
inline LimitFit limit_node_curvature(const WeightedGraph& g, const ResistanceProfile& prof, int node) {
  const Eigen::MatrixXd q = laplacian(g);
  const double t0 = 1.0 / (8.0 * g.max_weighted_degree());
  return detail::affine_limit(t0, [&](double t) {
    const Eigen::VectorXd mu = Eigen::VectorXd::Unit(g.n(), node) - t * q.col(node);
    return 1.0 - mu.dot(prof.omega * mu) / (4.0 * t);
  });
}

// t -> 0 limit of (1/t)(1 - mu_i^T Omega mu_j / omega_ij).
inline LimitFit limit_link_curvature(const WeightedGraph& g, const ResistanceProfile& prof, int a, int b) {
  const int e = g.link_index(a, b);
  const double omega = prof.link_omega[e];
  const Eigen::MatrixXd q = laplacian(g);
  const double t0 = 1.0 / (8.0 * g.max_weighted_degree());
  return detail::affine_limit(t0, [&](double t) {
    const Eigen::VectorXd mu_a = Eigen::VectorXd::Unit(g.n(), a) - t * q.col(a);
    const Eigen::VectorXd mu_b = Eigen::VectorXd::Unit(g.n(), b) - t * q.col(b);
    return (1.0 - mu_a.dot(prof.omega * mu_b) / omega) / t;
  });
}

// Variance of a distribution under the resistance metric: (1/2) f^T Omega f.
inline double variance(const ResistanceProfile& prof, const Eigen::VectorXd& f) {
  if (f.size() != prof.n || f.minCoeff() < -1e-12 || std::abs(f.sum() - 1.0) > 1e-10)
    throw NotADistributionError("variance: input is not a distribution");
  return 0.5 * f.dot(prof.omega * f);
}

struct SimplexEmbedding {
  Eigen::MatrixXd coords;  // row per node, n-1 columns padded to n
};

// Isometric embedding from the symmetric square root of the pseudoinverse:
// squared distances reproduce omega; phi(p) is the circumcenter at squared
// radius sigma^2 from every vertex.
inline SimplexEmbedding simplex_embedding(const ResistanceProfile& prof) {
  if (prof.comps.beta != 1) throw std::invalid_argument("simplex embedding needs a connected graph");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(prof.pinv);
  Eigen::VectorXd eig = es.eigenvalues();
  const double max_eig = eig.cwiseAbs().maxCoeff();
  for (int k = 0; k < eig.size(); ++k) {
    if (eig(k) < -1e-9 * std::max(1.0, max_eig))
      throw NegativeEigenvalueError("pseudoinverse not PSD within tolerance");
    eig(k) = std::max(eig(k), 0.0);
  }
  SimplexEmbedding emb;
  emb.coords = es.eigenvectors() * eig.cwiseSqrt().asDiagonal();
  return emb;
}

// p via the off-diagonal rows of Q Omega with probe node x:
// p_i = (k_i/2)(omega_ix - sum_{j~i} (c_ij/k_i) omega_jx) for i != x.
// The probe entry is completed through sum p = 1 on a connected graph.
inline Eigen::VectorXd distance_characterization(const WeightedGraph& g, const ResistanceProfile& prof,
                                                 int probe) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(g.n());
  for (int i = 0; i < g.n(); ++i) {
    if (i == probe) continue;
    double acc = g.weighted_degree(i) * prof.omega(i, probe);
    for (const auto& [j, idx] : g.neighbors(i)) acc -= g.weight(idx) * prof.omega(j, probe);
    p(i) = 0.5 * acc;
  }
  p(probe) = 1.0 - p.sum();
  return p;
}

// sigma^2 = (1/4) sum over links c_ij (omega_ix - omega_jx)^2, any probe x.
inline double sigma_squared_from_probe(const WeightedGraph& g, const ResistanceProfile& prof, int probe) {
  double acc = 0;
  for (int e = 0; e < g.m(); ++e) {
    const auto [i, j] = g.links()[e];
    const double diff = prof.omega(i, probe) - prof.omega(j, probe);
    acc += g.weight(e) * diff * diff;
  }
  return 0.25 * acc;
}

}  // namespace rescurv
