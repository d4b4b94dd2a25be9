#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rescurv/graph.hpp"
#include "rescurv/rng.hpp"

namespace rescurv {

struct SingularBlockError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverDivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pairwise effective resistances and per-link relative resistances.
// Exact profiles carry the full resistance matrix, the Laplacian
// pseudoinverse and its diagonal; approximate profiles carry per-link
// resistances only, tagged with the accuracy epsilon they were built at.
struct ResistanceProfile {
  int n = 0;
  bool exact = true;
  double epsilon = 0.0;  // accuracy tag for approximate profiles
  ComponentInfo comps;
  Eigen::MatrixXd omega;            // empty when !exact; +inf across components
  Eigen::MatrixXd pinv;             // Laplacian pseudoinverse (exact only)
  Eigen::VectorXd zeta;             // diag(pinv) (exact only)
  std::vector<double> link_omega;   // per link, aligned with graph.links()
  std::vector<double> relative;     // c_ij * omega_ij per link

  double omega_at(int i, int j) const { return omega(i, j); }
};

struct ApproxConfig {
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  int sketch_dim = 0;  // 0 = auto: ceil(24 ln n / eps^2)

  bool valid() const { return epsilon > 0 && epsilon < 1; }
};

// Moore-Penrose pseudoinverse of a graph Laplacian, computed per connected
// block as (Q_c + J/n_c)^{-1} - J/n_c.
inline Eigen::MatrixXd laplacian_pseudoinverse(const Eigen::MatrixXd& q, const ComponentInfo& comps) {
  const int n = static_cast<int>(q.rows());
  Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(n, n);
  for (const auto& nodes : comps.members) {
    const int nc = static_cast<int>(nodes.size());
    if (nc == 1) continue;  // 1x1 zero block, pseudoinverse zero
    Eigen::MatrixXd block(nc, nc);
    for (int a = 0; a < nc; ++a)
      for (int b = 0; b < nc; ++b) block(a, b) = q(nodes[a], nodes[b]) + 1.0 / nc;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(block);
    if (ldlt.info() != Eigen::Success)
      throw SingularBlockError("Laplacian block factorization failed");
    Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(nc, nc));
    inv.array() -= 1.0 / nc;
    for (int a = 0; a < nc; ++a)
      for (int b = 0; b < nc; ++b) pinv(nodes[a], nodes[b]) = inv(a, b);
  }
  return pinv;
}

inline ResistanceProfile effective_resistance(const WeightedGraph& g) {
  ResistanceProfile prof;
  prof.n = g.n();
  prof.comps = components(g);
  const Eigen::MatrixXd q = laplacian(g);
  prof.pinv = laplacian_pseudoinverse(q, prof.comps);
  prof.zeta = prof.pinv.diagonal();

  const double inf = std::numeric_limits<double>::infinity();
  prof.omega.resize(g.n(), g.n());
  for (int i = 0; i < g.n(); ++i) {
    prof.omega(i, i) = 0;
    for (int j = i + 1; j < g.n(); ++j) {
      const double w = (prof.comps.labels[i] == prof.comps.labels[j])
                           ? prof.zeta(i) + prof.zeta(j) - 2 * prof.pinv(i, j)
                           : inf;
      prof.omega(i, j) = w;
      prof.omega(j, i) = w;
    }
  }
  prof.link_omega.resize(g.m());
  prof.relative.resize(g.m());
  for (int e = 0; e < g.m(); ++e) {
    const auto [i, j] = g.links()[e];
    prof.link_omega[e] = prof.omega(i, j);
    prof.relative[e] = g.weight(e) * prof.link_omega[e];
  }
  return prof;
}

namespace detail {

// Jacobi-preconditioned CG on a Laplacian block for a panel of right-hand
// sides. RHS columns are mean-free on the component, which keeps iterates
// orthogonal to the kernel. Relative residual tolerance `tol`, cap 10*n.
inline void laplacian_block_solve(const Eigen::SparseMatrix<double>& q, const Eigen::VectorXd& inv_diag,
                                  Eigen::MatrixXd& rhs_then_solution, double tol) {
  const int nc = static_cast<int>(q.rows());
  const int k = static_cast<int>(rhs_then_solution.cols());
  const int max_iter = 10 * nc;

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(nc, k);
  Eigen::MatrixXd r = rhs_then_solution;
  Eigen::MatrixXd z = inv_diag.asDiagonal() * r;
  Eigen::MatrixXd p = z;
  Eigen::VectorXd rz = (r.array() * z.array()).colwise().sum();
  Eigen::VectorXd rhs_norm = rhs_then_solution.colwise().norm();
  std::vector<char> done(k, 0);
  int remaining = k;
  for (int c = 0; c < k; ++c)
    if (rhs_norm(c) == 0) {
      done[c] = 1;
      --remaining;
    }

  for (int it = 0; it < max_iter && remaining > 0; ++it) {
    Eigen::MatrixXd qp = q * p;
    for (int c = 0; c < k; ++c) {
      if (done[c]) continue;
      const double denom = p.col(c).dot(qp.col(c));
      if (denom <= 0) {
        done[c] = 1;  // numerically at the kernel; current iterate is best
        --remaining;
        continue;
      }
      const double alpha = rz(c) / denom;
      x.col(c) += alpha * p.col(c);
      r.col(c) -= alpha * qp.col(c);
      if (r.col(c).norm() <= tol * rhs_norm(c)) {
        done[c] = 1;
        --remaining;
        continue;
      }
      z.col(c) = inv_diag.asDiagonal() * r.col(c);
      const double rz_new = r.col(c).dot(z.col(c));
      p.col(c) = z.col(c) + (rz_new / rz(c)) * p.col(c);
      rz(c) = rz_new;
    }
  }
  if (remaining > 0) throw SolverDivergenceError("Laplacian CG hit the iteration cap");
  rhs_then_solution = std::move(x);
}

}  // namespace detail

// Randomized projection of the weighted incidence rows (Spielman-Srivastava
// sketch): per-link resistances within (1 +- eps) with high probability.
// Deterministic in cfg.seed.
inline ResistanceProfile approx_effective_resistance(const WeightedGraph& g, const ApproxConfig& cfg) {
  if (!cfg.valid()) throw std::invalid_argument("ApproxConfig: epsilon must lie in (0,1)");
  ResistanceProfile prof;
  prof.n = g.n();
  prof.exact = false;
  prof.epsilon = cfg.epsilon;
  prof.comps = components(g);
  prof.link_omega.assign(g.m(), 0.0);
  prof.relative.assign(g.m(), 0.0);

  const int n_eff = std::max(g.n(), 2);
  const int sketch_dim = cfg.sketch_dim > 0
                             ? cfg.sketch_dim
                             : static_cast<int>(std::ceil(24.0 * std::log(n_eff) / (cfg.epsilon * cfg.epsilon)));
  const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(sketch_dim));
  const Rng root(cfg.seed);

  for (int comp = 0; comp < prof.comps.beta; ++comp) {
    const auto& nodes = prof.comps.members[comp];
    const int nc = static_cast<int>(nodes.size());
    if (nc == 1) continue;
    std::vector<int> local(g.n(), -1);
    for (int a = 0; a < nc; ++a) local[nodes[a]] = a;
    std::vector<int> comp_links;
    for (int e = 0; e < g.m(); ++e)
      if (prof.comps.labels[g.links()[e].i] == comp) comp_links.push_back(e);

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(nc);
    for (int e : comp_links) {
      const auto [i, j] = g.links()[e];
      const double c = g.weight(e);
      trip.emplace_back(local[i], local[j], -c);
      trip.emplace_back(local[j], local[i], -c);
      diag(local[i]) += c;
      diag(local[j]) += c;
    }
    for (int a = 0; a < nc; ++a) trip.emplace_back(a, a, diag(a));
    Eigen::SparseMatrix<double> q(nc, nc);
    q.setFromTriplets(trip.begin(), trip.end());
    const Eigen::VectorXd inv_diag = diag.cwiseInverse();

    // Process the sketch in column panels to bound memory.
    const int panel = 2048;
    const Rng comp_rng = root.derive(static_cast<std::uint64_t>(comp));
    for (int base = 0; base < sketch_dim; base += panel) {
      const int kb = std::min(panel, sketch_dim - base);
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nc, kb);
      for (std::size_t le = 0; le < comp_links.size(); ++le) {
        const int e = comp_links[le];
        const auto [i, j] = g.links()[e];
        const double sc = std::sqrt(g.weight(e)) * inv_sqrt_k;
        Rng edge_rng =
            comp_rng.derive(static_cast<std::uint64_t>(e)).derive(static_cast<std::uint64_t>(base));
        for (int l = 0; l < kb; ++l) {
          const double s = (edge_rng.next_u64() & 1u) ? sc : -sc;
          rhs(local[i], l) += s;
          rhs(local[j], l) -= s;
        }
      }
      detail::laplacian_block_solve(q, inv_diag, rhs, cfg.epsilon / 1000.0);
      for (int e : comp_links) {
        const auto [i, j] = g.links()[e];
        prof.link_omega[e] += (rhs.row(local[i]) - rhs.row(local[j])).squaredNorm();
      }
    }
  }
  for (int e = 0; e < g.m(); ++e) prof.relative[e] = g.weight(e) * prof.link_omega[e];
  return prof;
}

// |sum of relative resistances - (n - beta)|, zero by Foster's theorem.
inline double foster_check(const ResistanceProfile& prof) {
  double total = 0;
  for (double r : prof.relative) total += r;
  return std::abs(total - (prof.n - prof.comps.beta));
}

}  // namespace rescurv
