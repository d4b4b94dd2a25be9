// Acceptance gate: one pass/fail line per criterion, exit code = failures.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rescurv/rescurv.hpp"

using namespace rescurv;

namespace {

WeightedGraph random_weighted(int n, double extra_prob, Rng& rng) {
  std::vector<EdgeTriple> edges;
  for (int v = 1; v < n; ++v)
    edges.push_back({static_cast<int>(rng.next_below(v)), v, 0.1 + 9.9 * rng.next_double()});
  auto base = WeightedGraph::from_edges(n, edges);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!base.has_link(i, j) && rng.bernoulli(extra_prob))
        edges.push_back({i, j, 0.1 + 9.9 * rng.next_double()});
  return WeightedGraph::from_edges(n, edges);
}

WeightedGraph random_tree(int n, Rng& rng) {
  std::vector<EdgeTriple> edges;
  for (int v = 1; v < n; ++v)
    edges.push_back({static_cast<int>(rng.next_below(v)), v, 0.1 + 9.9 * rng.next_double()});
  return WeightedGraph::from_edges(n, edges);
}

struct Check {
  bool ok = true;
  double worst = 0.0;
  void absorb(double residual) {
    worst = std::max(worst, std::abs(residual));
  }
  void require(bool condition) { ok = ok && condition; }
  bool within(double tol) const { return ok && worst <= tol; }
};

// ---- criterion 1: closed-form families ------------------------------------

bool vertex_transitive_matches(const WeightedGraph& g, double c, Check& chk) {
  const int n = g.n(), d = g.degree(0);
  const auto prof = effective_resistance(g);
  const auto p = node_curvature(g, prof);
  const auto kappa = link_curvature(g, prof, p);
  for (int v = 0; v < n; ++v) chk.absorb(p(v) - 1.0 / n);
  const double kappa_expected = 2.0 * c * d / (n - 1);
  for (int e = 0; e < g.m(); ++e) chk.absorb(kappa[e] - kappa_expected);
  return chk.ok;
}

void tree_matches(const WeightedGraph& g, Check& chk) {
  const auto prof = effective_resistance(g);
  const auto p = node_curvature(g, prof);
  const auto kappa = link_curvature(g, prof, p);
  for (int v = 0; v < g.n(); ++v) chk.absorb(p(v) - (1.0 - g.degree(v) / 2.0));
  for (int e = 0; e < g.m(); ++e) {
    const auto [i, j] = g.links()[e];
    chk.absorb(kappa[e] - (4.0 - g.degree(i) - g.degree(j)) * g.weight(e));
  }
}

bool criterion1() {
  Check chk;
  for (int n = 2; n <= 10; ++n) tree_matches(make_path(n, 1.0), chk);
  for (int n = 2; n <= 10; ++n) tree_matches(make_path(n, 2.5), chk);
  for (int n = 3; n <= 50; ++n) vertex_transitive_matches(make_cycle(n, 1.0), 1.0, chk);
  for (int n = 3; n <= 20; ++n) vertex_transitive_matches(make_cycle(n, 2.5), 2.5, chk);
  Rng rng(611);
  for (int trial = 0; trial < 10; ++trial) {
    tree_matches(make_star(2 + static_cast<int>(rng.next_below(29))), chk);
    tree_matches(random_tree(3 + static_cast<int>(rng.next_below(28)), rng), chk);
  }
  for (int n = 2; n <= 20; ++n) vertex_transitive_matches(make_complete(n, 1.0), 1.0, chk);
  for (const char* name : {"tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron"})
    for (double c : {1.0, 2.5}) vertex_transitive_matches(make_platonic(name, c), c, chk);
  for (int w = 4; w <= 10; ++w) vertex_transitive_matches(make_torus(w, w, 1.0), 1.0, chk);
  vertex_transitive_matches(make_torus(5, 5, 2.5), 2.5, chk);
  vertex_transitive_matches(make_triangular_torus(5, 5), 1.0, chk);
  return chk.within(1e-9);
}

// ---- criterion 2: matrix and combinatorial identities ---------------------

bool criterion2() {
  Check chk;
  Rng rng(612);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + static_cast<int>(rng.next_below(27));
    const auto g = random_weighted(n, 0.1 + 0.4 * rng.next_double(), rng);
    const auto prof = effective_resistance(g);
    const auto p = node_curvature(g, prof);
    const Eigen::MatrixXd q = laplacian(g);
    const Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
    const double s2 = sigma_squared(prof, p)[0];

    chk.absorb(p.sum() - 1.0);
    chk.absorb((q * prof.omega + 2.0 * Eigen::MatrixXd::Identity(n, n) - 2.0 * p * u.transpose())
                   .cwiseAbs()
                   .maxCoeff());
    chk.absorb((prof.omega * p - 2.0 * s2 * u).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd bapat = -q / 2.0 + p * p.transpose() / (2.0 * s2);
    chk.absorb((prof.omega.inverse() - bapat).cwiseAbs().maxCoeff());
    chk.absorb(foster_check(prof));
    for (int probe = 0; probe < 40; ++probe) {
      const int i = static_cast<int>(rng.next_below(n)), j = static_cast<int>(rng.next_below(n)),
                k = static_cast<int>(rng.next_below(n));
      chk.absorb(std::min(0.0, prof.omega_at(i, k) + prof.omega_at(k, j) - prof.omega_at(i, j)));
    }
    if (trial % 10 == 0) {
      const auto kappa = link_curvature(g, prof, p);
      chk.require(bounds_report(g, prof, p, kappa).all_ok);
    }
  }
  return chk.within(1e-7);
}

// ---- criterion 3: equivalent characterizations ----------------------------

bool criterion3() {
  Check values, slopes;
  Rng rng(613);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 5 + static_cast<int>(rng.next_below(11));
    const auto g = random_weighted(n, 0.35, rng);
    const auto prof = effective_resistance(g);
    const auto p = node_curvature(g, prof);
    values.absorb((equilibrium_curvature(prof) - p).cwiseAbs().maxCoeff());
    values.absorb((distance_characterization(g, prof, 0) - p).cwiseAbs().maxCoeff());
    values.absorb(
        (distance_characterization(g, prof, n - 1) - p).cwiseAbs().maxCoeff());
    for (int v = 0; v < n; ++v) {
      const LimitFit fit = limit_node_curvature(g, prof, v);
      values.absorb(fit.value - p(v));
      slopes.absorb(fit.slope - g.weighted_degree(v) / 2.0);
    }
  }
  return values.within(1e-6) && slopes.within(1e-4);
}

// ---- criterion 4: sketched resistances vs exact ---------------------------

bool criterion4() {
  long total = 0, outside_tight = 0, outside_loose = 0;
  for (int k = 0; k < 20; ++k) {
    const int n = 200 + 15 * k;
    const auto g = erdos_renyi(n, 8.0 / n, 100 + k);
    const auto exact = effective_resistance(g);
    ApproxConfig cfg;
    cfg.epsilon = 0.1;
    cfg.seed = 7000 + k;
    const auto approx = approx_effective_resistance(g, cfg);
    for (int e = 0; e < g.m(); ++e) {
      const double ratio = approx.link_omega[e] / exact.link_omega[e];
      ++total;
      if (std::abs(ratio - 1.0) > 0.1) ++outside_tight;
      if (std::abs(ratio - 1.0) > 0.2) ++outside_loose;
    }
  }
  return outside_loose == 0 && outside_tight * 100 <= total;
}

// ---- criterion 5: spanning-tree statistics --------------------------------

bool run_tree_statistics(const std::string& path) {
  bool ok = true;
  nlohmann::json out = nlohmann::json::array();
  const long samples = 100000;
  const Rng graph_root(55);
  for (int trial = 0; trial < 10; ++trial) {
    Rng grng = graph_root.derive(static_cast<std::uint64_t>(trial));
    const auto g = random_weighted(4 + static_cast<int>(grng.next_below(5)), 0.5, grng);
    const auto prof = effective_resistance(g);
    const auto p = node_curvature(g, prof);

    nlohmann::json entry;
    entry["n"] = g.n();
    entry["links"] = nlohmann::json::array();
    const auto rows = tree_inclusion_stats(g, samples, 1000 + trial);
    for (const auto& row : rows) {
      ok = ok && row.pass;
      entry["links"].push_back(
          {{"i", row.link.i}, {"j", row.link.j}, {"relative", row.relative},
           {"empirical", row.empirical}});
    }

    // per-node mean of (1 - tree degree / 2) against the exact curvature
    std::vector<double> sum(g.n(), 0), sum_sq(g.n(), 0);
    const Rng tree_root(2000 + trial);
    for (long s = 0; s < samples; ++s) {
      const auto tree = sample_tree(g, tree_root.derive(static_cast<std::uint64_t>(s)));
      std::vector<int> deg(g.n(), 0);
      for (const auto& l : tree.links) {
        ++deg[l.i];
        ++deg[l.j];
      }
      for (int v = 0; v < g.n(); ++v) {
        const double x = 1.0 - deg[v] / 2.0;
        sum[v] += x;
        sum_sq[v] += x * x;
      }
    }
    entry["nodes"] = nlohmann::json::array();
    for (int v = 0; v < g.n(); ++v) {
      const double mean = sum[v] / samples;
      const double var = std::max(sum_sq[v] / samples - mean * mean, 0.0);
      const double band = 3.0 * std::sqrt(var / samples) + 1e-9;
      ok = ok && std::abs(mean - p(v)) <= band;
      entry["nodes"].push_back({{"node", v}, {"estimate", mean}, {"exact", p(v)}});
    }
    out.push_back(std::move(entry));
  }

  // exact-distribution chi-square smoke test on an enumerable instance
  {
    const auto g = build_graph(4, {{0, 1, 2.0}, {0, 2, 1.0}, {1, 2, 3.0}, {1, 3, 1.5}, {2, 3, 0.5}});
    const auto trees = enumerate_spanning_trees(g);
    double wsum = 0;
    for (const auto& [tree, weight] : trees) wsum += weight;
    std::map<std::vector<Link>, long> hits;
    const long smoke = 60000;
    const Rng root(99);
    for (long s = 0; s < smoke; ++s) ++hits[sample_tree(g, root.derive(s)).links];
    double chi2 = 0;
    for (const auto& [tree, weight] : trees) {
      const double expected = smoke * weight / wsum;
      chi2 += (hits[tree.links] - expected) * (hits[tree.links] - expected) / expected;
    }
    const double pval = chi_square_p_value(chi2, static_cast<int>(trees.size()) - 1);
    ok = ok && pval > 0.001;
    out.push_back({{"chi_square_p", pval}});
  }

  std::ofstream file(path);
  file << out.dump(2) << '\n';
  return ok;
}

// ---- criterion 6: ordering against the reference notions ------------------

bool criterion6() {
  Check slack, equality;
  Rng rng(616);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_weighted(4 + static_cast<int>(rng.next_below(17)), 0.3, rng);
    const auto prof = effective_resistance(g);
    const auto p = node_curvature(g, prof);
    const auto kappa = link_curvature(g, prof, p);
    for (int e = 0; e < g.m(); ++e) {
      const auto [i, j] = g.links()[e];
      const double fr = forman_curvature(g, i, j) / prof.link_omega[e];
      const double orc = ollivier_curvature_resistance(g, prof, i, j);
      slack.absorb(std::min(0.0, kappa[e] - fr));
      slack.absorb(std::min(0.0, orc - kappa[e]));
    }
  }
  Rng trng(617);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_tree(3 + static_cast<int>(trng.next_below(16)), trng);
    const auto prof = effective_resistance(g);
    const auto p = node_curvature(g, prof);
    const auto kappa = link_curvature(g, prof, p);
    for (int e = 0; e < g.m(); ++e) {
      const auto [i, j] = g.links()[e];
      equality.absorb(forman_curvature(g, i, j) / prof.link_omega[e] - kappa[e]);
      equality.absorb(ollivier_curvature_resistance(g, prof, i, j) - kappa[e]);
    }
  }
  return slack.within(1e-6) && equality.within(1e-6);
}

// ---- criterion 7: curvature flow ------------------------------------------

bool criterion7() {
  bool ok = true;

  {  // cycle against the spectral closed form
    const auto q0 = laplacian(make_cycle(6));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q0);
    const double blow_up = 6.0 / (2.0 * es.eigenvalues().maxCoeff());
    StepControl ctl;
    ctl.continue_outside_cone = true;
    ctl.sample_interval = 0.8 * blow_up / 40;
    const auto traj = integrate_flow(q0, 0.8 * blow_up, ctl);
    ok = ok && traj.halt == HaltReason::Completed;
    for (const auto& s : traj.samples) {
      const Eigen::MatrixXd ref = transitive_closed_form(q0, s.t);
      ok = ok &&
           (s.q - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff() <= 1e-6;
    }
  }

  {  // end link of a path against its scalar closed form, then blow-up timing
    const double c0 = 1.0;
    StepControl ctl;
    ctl.sample_interval = 0.9 / 40;
    const auto traj = integrate_flow(laplacian(make_path(4, c0)), 0.9 / c0, ctl);
    ok = ok && traj.halt == HaltReason::Completed;
    for (const auto& s : traj.samples)
      ok = ok && std::abs(-s.q(0, 1) - c0 / (1.0 - c0 * s.t)) * (1.0 - c0 * s.t) / c0 <= 1e-6;
    const auto full = integrate_flow(laplacian(make_path(4, c0)), 2.0 / c0);
    ok = ok && full.halt == HaltReason::BlowUpDetected;
    ok = ok && std::abs(full.halt_time - 1.0 / c0) <= 0.01 / c0;
  }

  {  // potential decreases, gradient and resistance-rate residuals are small
    Rng rng(77);
    const auto g = random_weighted(6, 0.4, rng);
    StepControl ctl;
    ctl.sample_interval = 0.05;
    const auto traj = integrate_flow(laplacian(g), 0.3, ctl);
    for (std::size_t s = 1; s < traj.samples.size(); ++s)
      ok = ok && traj.samples[s].potential <= traj.samples[s - 1].potential + 1e-9;
    ok = ok && gradient_check(laplacian(g)) <= 1e-5;
    StepControl fine;
    fine.sample_interval = 0.4 / 50;
    ok = ok && resistance_flow_check(integrate_flow(laplacian(make_path(4)), 0.4, fine)) <= 1e-4;
  }
  return ok;
}

// ---- criterion 8: density sweep of random graphs --------------------------

bool run_density_sweep(const std::string& path) {
  const int n = 300;
  const auto rhos = log_spaced(1e-4, 1.0, 40);
  const auto rows = er_sweep(n, rhos, 10, 20260824);
  {
    std::ofstream file(path);
    file << "rho,mean_kappa,giant_fraction,total_links\n";
    for (const auto& row : rows)
      file << format_double(row.rho) << ',' << format_double(row.mean_kappa) << ','
           << format_double(row.giant_fraction) << ',' << row.total_links << '\n';
  }
  bool ok = true;
  int first = -1;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (rows[k].total_links > 0) {
      first = static_cast<int>(k);
      break;
    }
  ok = ok && first >= 0 && std::abs(rows[first].mean_kappa - 2.0) <= 0.5;
  ok = ok && std::abs(rows.back().mean_kappa - 2.0) <= 1e-9;

  double crossing = -1;
  for (std::size_t k = first; k + 1 < rows.size(); ++k)
    if (rows[k].mean_kappa > 0 && rows[k + 1].mean_kappa < 0) {
      const double f = rows[k].mean_kappa / (rows[k].mean_kappa - rows[k + 1].mean_kappa);
      crossing = rows[k].rho + f * (rows[k + 1].rho - rows[k].rho);
      break;
    }
  ok = ok && crossing >= 0.5 / (n - 1) && crossing <= 2.0 / (n - 1);
  return ok;
}

// ---- criterion 9: boundary profile of geometric graphs --------------------

bool run_boundary_profile(const std::string& path) {
  ErgConfig cfg;
  cfg.disc_radius = 1.0;
  cfg.connection_radius = 0.25;
  cfg.expected_nodes = 800;
  cfg.seed = 4242;
  const int bins = 40;
  const auto profile = monte_carlo_profile(cfg, 20, bins);
  BoundaryModel model;
  model.r = cfg.connection_radius;
  model.lambda = cfg.intensity();

  bool ok = profile.skipped_samples == 0;
  double sup_gap = 0;
  bool dip = false;
  {
    std::ofstream file(path);
    file << "bin_center_D_over_r,mc_mean,mc_std,mc_count,model_value\n";
    for (int b = 0; b < bins; ++b) {
      const double center = 0.5 * (profile.edges[b] + profile.edges[b + 1]);
      const double model_value =
          expected_boundary_curvature(center * cfg.connection_radius, model);
      file << format_double(center) << ',' << format_double(profile.mean[b]) << ','
           << format_double(profile.stddev[b]) << ',' << profile.count[b] << ','
           << format_double(model_value) << '\n';
      if (profile.count[b] == 0) continue;
      sup_gap = std::max(sup_gap, std::abs(profile.mean[b] - model_value));
      if (center >= 2.0) ok = ok && std::abs(profile.mean[b]) <= 0.02;
      if (model_value < -1e-4 && profile.mean[b] < 0) dip = true;
      if (b == 0) ok = ok && profile.mean[b] > 0;
    }
  }
  return ok && sup_gap <= 0.05 && dip;
}

// ---- criterion 10: byte-identical reruns ----------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

bool criterion10() {
  bool ok = true;
  ok = run_tree_statistics("acceptance_trees_rerun.json") && ok;
  ok = run_density_sweep("acceptance_sweep_rerun.csv") && ok;
  ok = run_boundary_profile("acceptance_profile_rerun.csv") && ok;
  ok = ok && !slurp("acceptance_trees.json").empty();
  ok = ok && slurp("acceptance_trees.json") == slurp("acceptance_trees_rerun.json");
  ok = ok && slurp("acceptance_sweep.csv") == slurp("acceptance_sweep_rerun.csv");
  ok = ok && slurp("acceptance_profile.csv") == slurp("acceptance_profile_rerun.csv");
  return ok;
}

int report(int index, const std::string& label, bool pass) {
  std::printf("criterion %2d: %-52s %s\n", index, label.c_str(), pass ? "PASS" : "FAIL");
  std::fflush(stdout);
  return pass ? 0 : 1;
}

}  // namespace

int main() {
  int failures = 0;
  failures += report(1, "closed-form node and link curvature of named families", criterion1());
  failures += report(2, "matrix identities, Foster sum, metric and bound checks", criterion2());
  failures += report(3, "equivalent characterizations and limit slopes", criterion3());
  failures += report(4, "sketched resistances within the accuracy contract", criterion4());
  failures += report(5, "spanning-tree inclusion and curvature statistics",
                     run_tree_statistics("acceptance_trees.json"));
  failures += report(6, "ordering against transport and combinatorial notions", criterion6());
  failures += report(7, "curvature flow: closed forms, gradient, blow-up", criterion7());
  failures += report(8, "random-graph density sweep crosses zero on schedule",
                     run_density_sweep("acceptance_sweep.csv"));
  failures += report(9, "geometric-graph boundary profile matches the model",
                     run_boundary_profile("acceptance_profile.csv"));
  failures += report(10, "seeded experiments rerun byte-for-byte", criterion10());
  if (failures == 0) std::printf("all 10 criteria passed\n");
  return failures;
}
