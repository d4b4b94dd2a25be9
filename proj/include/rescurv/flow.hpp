#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rescurv/graph.hpp"

namespace rescurv {

struct DisconnectedDuringFlowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PastBlowUpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resistance-side view of a generalized Laplacian (symmetric, zero row
// sums, connected support): Omega, p = diag(Q Omega)/2 + u, sigma^2 and the
// flow potential tr(Omega Q Omega)/2.
struct FlowGeometry {
  Eigen::MatrixXd omega;
  Eigen::VectorXd p;
  double sigma2;
  double potential;
};

inline FlowGeometry flow_geometry(const Eigen::MatrixXd& q) {
  const int n = static_cast<int>(q.rows());
  FlowGeometry geo;
  if (n == 1) {
    geo.omega = Eigen::MatrixXd::Zero(1, 1);
    geo.p = Eigen::VectorXd::Ones(1);
    geo.sigma2 = 0;
    geo.potential = 0;
    return geo;
  }
  const Eigen::MatrixXd shifted = q + Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
  const Eigen::MatrixXd pinv =
      lu.solve(Eigen::MatrixXd::Identity(n, n)) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const Eigen::MatrixXd check = q * pinv;
  if (!check.allFinite() ||
      (check - (Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n))).norm() >
          1e-6 * n)
    throw DisconnectedDuringFlowError("generalized Laplacian has rank below n-1");
  geo.omega.resize(n, n);
  const Eigen::VectorXd zeta = pinv.diagonal();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) geo.omega(i, j) = zeta(i) + zeta(j) - 2 * pinv(i, j);
  geo.p = 0.5 * (q * geo.omega).diagonal() + Eigen::VectorXd::Ones(n);
  geo.sigma2 = 0.5 * geo.p.dot(geo.omega * geo.p);
  geo.potential = 0.5 * (geo.omega * q * geo.omega).trace();
  return geo;
}

inline double potential(const Eigen::MatrixXd& q) { return flow_geometry(q).potential; }

// dQ/dt = 2 Q diag(p) Q (normalized variant: diag(p/k) with k = diag(Q)).
inline Eigen::MatrixXd flow_rhs(const Eigen::MatrixXd& q, bool normalized = false) {
  Eigen::VectorXd scale = flow_geometry(q).p;
  if (normalized) scale = scale.cwiseQuotient(q.diagonal());
  return 2.0 * q * scale.asDiagonal() * q;
}

struct FlowSample {
  double t;
  Eigen::MatrixXd q;
  Eigen::VectorXd p;
  double sigma2;
  double potential;
  double min_weight;  // most positive off-diagonal, negated: min link weight
  bool is_laplacian;
};

struct MergeEvent {
  double t;
  int i;
  int j;
};

enum class HaltReason { Completed, BlowUpDetected, LeftLaplacianCone, MergedToPoint, StepUnderflow };

inline const char* to_string(HaltReason r) {
  switch (r) {
    case HaltReason::Completed: return "Completed";
    case HaltReason::BlowUpDetected: return "BlowUpDetected";
    case HaltReason::LeftLaplacianCone: return "LeftLaplacianCone";
    case HaltReason::MergedToPoint: return "MergedToPoint";
    case HaltReason::StepUnderflow: return "StepUnderflow";
  }
  return "?";
}

struct FlowTrajectory {
  std::vector<FlowSample> samples;
  std::vector<MergeEvent> merges;
  HaltReason halt = HaltReason::Completed;
  double halt_time = 0;
};

struct StepControl {
  double rel_tol = 1e-8;
  double sample_interval = 0;        // 0: t_end / 200
  bool merge_on_threshold = false;   // default: halt when a resistance collapses
  bool continue_outside_cone = false;
  double merge_threshold = 1e-6;     // relative to median omega
  double blow_up_factor = 1e6;       // spectral growth vs Q0
};

namespace detail {

inline bool in_laplacian_cone(const Eigen::MatrixXd& q) {
  const int n = static_cast<int>(q.rows());
  const double tol = 1e-9 * std::max(q.cwiseAbs().maxCoeff(), 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && q(i, j) > tol) return false;
  return true;
}

inline void project_to_laplacian_structure(Eigen::MatrixXd& q) {
  q = 0.5 * (q + q.transpose()).eval();
  const int n = static_cast<int>(q.rows());
  // Positive off-diagonals below integrator noise are projected back onto
  // the cone boundary; genuine cone exits grow past this immediately.
  const double clamp = 1e-7 * std::max(q.cwiseAbs().maxCoeff(), 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && q(i, j) > 0 && q(i, j) < clamp) q(i, j) = 0;
  for (int i = 0; i < n; ++i) {
    double off = 0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += q(i, j);
    q(i, i) = -off;
  }
}

// Merge indices a and b of a generalized Laplacian (parallel conductances
// add), dropping the larger index.
inline Eigen::MatrixXd merge_matrix_nodes(const Eigen::MatrixXd& q, int a, int b) {
  const int n = static_cast<int>(q.rows());
  const int keep = std::min(a, b), drop = std::max(a, b);
  Eigen::MatrixXd merged(n - 1, n - 1);
  auto src = [&](int v) { return v < drop ? v : v + 1; };
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) {
      double v = q(src(i), src(j));
      if (i == keep) v += q(drop, src(j));
      if (j == keep) v += q(src(i), drop);
      if (i == keep && j == keep) v += q(drop, drop);
      merged(i, j) = v;
    }
  project_to_laplacian_structure(merged);
  return merged;
}

inline double median_offdiag(const Eigen::MatrixXd& omega) {
  std::vector<double> vals;
  const int n = static_cast<int>(omega.rows());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) vals.push_back(omega(i, j));
  if (vals.empty()) return 0;
  std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
  return vals[vals.size() / 2];
}

}  // namespace detail

// Adaptive Cash-Karp 4(5) integration of the resistance Ricci flow in
// Laplacian form. Accepted iterates are re-symmetrized and row-sum
// projected; halts on blow-up, on leaving the Laplacian cone (unless told
// to continue) and on resistance collapse (halt or merge per StepControl).
inline FlowTrajectory integrate_flow(const Eigen::MatrixXd& q0, double t_end, StepControl ctl = {},
                                     bool normalized = false) {
  static const double a[6][5] = {{0, 0, 0, 0, 0},
                                 {1.0 / 5, 0, 0, 0, 0},
                                 {3.0 / 40, 9.0 / 40, 0, 0, 0},
                                 {3.0 / 10, -9.0 / 10, 6.0 / 5, 0, 0},
                                 {-11.0 / 54, 5.0 / 2, -70.0 / 27, 35.0 / 27, 0},
                                 {1631.0 / 55296, 175.0 / 512, 575.0 / 13824, 44275.0 / 110592,
                                  253.0 / 4096}};
  static const double b5[6] = {37.0 / 378, 0, 250.0 / 621, 125.0 / 594, 0, 512.0 / 1771};
  static const double b4[6] = {2825.0 / 27648, 0,           18575.0 / 48384,
                               13525.0 / 55296, 277.0 / 14336, 1.0 / 4};

  FlowTrajectory traj;
  Eigen::MatrixXd q = q0;
  double t = 0;
  const double q0_scale = q0.cwiseAbs().maxCoeff();
  const double sample_dt = ctl.sample_interval > 0 ? ctl.sample_interval : t_end / 200.0;
  double next_sample = 0;
  bool is_laplacian = true;

  auto record = [&](const FlowGeometry& geo) {
    FlowSample s;
    s.t = t;
    s.q = q;
    s.p = geo.p;
    s.sigma2 = geo.sigma2;
    s.potential = geo.potential;
    double max_off = -std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(q.rows());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) max_off = std::max(max_off, q(i, j));
    s.min_weight = -max_off;
    s.is_laplacian = is_laplacian;
    traj.samples.push_back(std::move(s));
  };

  FlowGeometry geo = flow_geometry(q);
  record(geo);
  next_sample = sample_dt;

  double dt = std::min(t_end / 100.0, 0.01 / std::max(geo.p.cwiseAbs().maxCoeff() *
                                                          q.diagonal().maxCoeff(), 1e-12));
  auto rhs = [&](const Eigen::MatrixXd& m) {
    FlowGeometry g = flow_geometry(m);
    Eigen::VectorXd scale = g.p;
    if (normalized) scale = scale.cwiseQuotient(m.diagonal());
    return Eigen::MatrixXd(2.0 * m * scale.asDiagonal() * m);
  };

  while (t < t_end) {
    dt = std::min(dt, t_end - t);
    if (dt < 1e-14 * std::max(1.0, t_end)) {
      traj.halt = HaltReason::StepUnderflow;
      traj.halt_time = t;
      return traj;
    }
    Eigen::MatrixXd k[6];
    bool step_failed = false;
    try {
      k[0] = rhs(q);
      for (int s = 1; s < 6; ++s) {
        Eigen::MatrixXd stage = q;
        for (int r = 0; r < s; ++r)
          if (a[s][r] != 0) stage += dt * a[s][r] * k[r];
        k[s] = rhs(stage);
      }
    } catch (const DisconnectedDuringFlowError&) {
      step_failed = true;  // stage left the solvable region; retry smaller
    }
    if (!step_failed) {
      Eigen::MatrixXd q5 = q, err = Eigen::MatrixXd::Zero(q.rows(), q.cols());
      for (int s = 0; s < 6; ++s) {
        q5 += dt * b5[s] * k[s];
        err += dt * (b5[s] - b4[s]) * k[s];
      }
      const double scale = std::max(q.cwiseAbs().maxCoeff(), 1e-12);
      const double rel_err = err.cwiseAbs().maxCoeff() / scale;
      if (rel_err <= ctl.rel_tol) {
        detail::project_to_laplacian_structure(q5);
        q = std::move(q5);
        t += dt;
        is_laplacian = detail::in_laplacian_cone(q);
        bool geometry_ok = true;
        try {
          geo = flow_geometry(q);
        } catch (const DisconnectedDuringFlowError&) {
          geometry_ok = false;
        }
        if (!geometry_ok || q.cwiseAbs().maxCoeff() > ctl.blow_up_factor * q0_scale) {
          traj.halt = HaltReason::BlowUpDetected;
          traj.halt_time = t;
          return traj;
        }
        if (!is_laplacian && !ctl.continue_outside_cone) {
          record(geo);
          traj.halt = HaltReason::LeftLaplacianCone;
          traj.halt_time = t;
          return traj;
        }
        // Resistance-collapse handling.
        const double med = detail::median_offdiag(geo.omega);
        if (med > 0) {
          const int n = static_cast<int>(q.rows());
          int mi = -1, mj = -1;
          double mo = ctl.merge_threshold * med;
          for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
              if (geo.omega(i, j) < mo) {
                mo = geo.omega(i, j);
                mi = i;
                mj = j;
              }
          if (mi >= 0) {
            if (!ctl.merge_on_threshold) {
              record(geo);
              traj.halt = HaltReason::BlowUpDetected;
              traj.halt_time = t;
              return traj;
            }
            traj.merges.push_back({t, mi, mj});
            q = detail::merge_matrix_nodes(q, mi, mj);
            if (q.rows() == 1) {
              traj.halt = HaltReason::MergedToPoint;
              traj.halt_time = t;
              return traj;
            }
            geo = flow_geometry(q);
          }
        }
        if (t >= next_sample - 1e-12 || t >= t_end) {
          record(geo);
          while (next_sample <= t + 1e-12) next_sample += sample_dt;
        }
        const double grow = rel_err > 0 ? 0.9 * std::pow(ctl.rel_tol / rel_err, 0.2) : 5.0;
        dt *= std::clamp(grow, 0.2, 5.0);
        continue;
      }
      dt *= std::clamp(0.9 * std::pow(ctl.rel_tol / rel_err, 0.25), 0.1, 1.0);
      continue;
    }
    dt *= 0.25;
  }
  traj.halt = HaltReason::Completed;
  traj.halt_time = t;
  return traj;
}

inline FlowTrajectory integrate_normalized_flow(const Eigen::MatrixXd& q0, double t_end,
                                                StepControl ctl = {}) {
  return integrate_flow(q0, t_end, ctl, /*normalized=*/true);
}

// Max residual of finite-difference d omega / dt against -2 (p_i + p_j) at
// interior sample times.
inline double resistance_flow_check(const FlowTrajectory& traj) {
  double worst = 0;
  for (std::size_t s = 1; s + 1 < traj.samples.size(); ++s) {
    const auto& lo = traj.samples[s - 1];
    const auto& mid = traj.samples[s];
    const auto& hi = traj.samples[s + 1];
    if (lo.q.rows() != mid.q.rows() || hi.q.rows() != mid.q.rows()) continue;  // merge in between
    const Eigen::MatrixXd om_lo = flow_geometry(lo.q).omega;
    const Eigen::MatrixXd om_hi = flow_geometry(hi.q).omega;
    const double h = hi.t - lo.t;
    const int n = static_cast<int>(mid.q.rows());
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double fd = (om_hi(i, j) - om_lo(i, j)) / h;
        worst = std::max(worst, std::abs(fd + 2.0 * (mid.p(i) + mid.p(j))));
      }
  }
  return worst;
}

// Potential recomputed from the resistance matrix alone: Q recovered
// through Bapat's inverse Omega^{-1} = -Q/2 + p p^T / (2 sigma^2). Equals
// 2 n sigma^2 when Omega is a valid resistance matrix.
inline double potential_of_omega(const Eigen::MatrixXd& omega) {
  const int n = static_cast<int>(omega.rows());
  const Eigen::MatrixXd inv = omega.inverse();
  const Eigen::VectorXd w = inv * Eigen::VectorXd::Ones(n);
  const double usum = w.sum();  // u^T Omega^{-1} u = 1 / (2 sigma^2)
  const Eigen::VectorXd p = w / usum;
  const Eigen::MatrixXd q = -2.0 * (inv - usum * p * p.transpose());
  return 0.5 * (omega * q * omega).trace();
}

// Central finite differences of the potential tr(Omega Q Omega)/2 in each
// omega_ij direction (Q held fixed, matching the gradient convention on
// symmetric zero-diagonal matrices) against the flow rate 2 (p_i + p_j);
// returns the max residual.
inline double gradient_check(const Eigen::MatrixXd& q, double h = 1e-4) {
  const FlowGeometry geo = flow_geometry(q);
  const int n = static_cast<int>(q.rows());
  auto fixed_q_potential = [&](const Eigen::MatrixXd& omega) {
    return 0.5 * (omega * q * omega).trace();
  };
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::MatrixXd plus = geo.omega, minus = geo.omega;
      plus(i, j) += h;
      plus(j, i) += h;
      minus(i, j) -= h;
      minus(j, i) -= h;
      const double fd = (fixed_q_potential(plus) - fixed_q_potential(minus)) / (2 * h);
      worst = std::max(worst, std::abs(fd - 2.0 * (geo.p(i) + geo.p(j))));
    }
  return worst;
}

// Closed-form flow for node-transitive initial Laplacians:
// Q(t) = [I - (2t/n) Q0]^dagger Q0, valid for t < n / (2 mu_max).
inline Eigen::MatrixXd transitive_closed_form(const Eigen::MatrixXd& q0, double t) {
  const int n = static_cast<int>(q0.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q0);
  const double mu_max = es.eigenvalues().maxCoeff();
  if (t >= n / (2.0 * mu_max)) throw PastBlowUpError("closed form past blow-up time");
  Eigen::VectorXd mapped = es.eigenvalues();
  const double cutoff = 1e-10 * std::max(1.0, mu_max);
  for (int k = 0; k < n; ++k)
    mapped(k) = mapped(k) > cutoff ? mapped(k) / (1.0 - 2.0 * t * mapped(k) / n) : 0.0;
  return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace rescurv
