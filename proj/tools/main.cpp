#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rescurv/rescurv.hpp"

namespace {

constexpr const char* kVersion = "rescurv 1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitBlowUp = 4;

rescurv::RunManifest base_manifest(const std::string& command, std::uint64_t seed) {
  rescurv::RunManifest m;
  m.command = command;
  m.seed = seed;
  m.tool_version = kVersion;
  return m;
}

int cmd_compute(const std::string& graph_path, double epsilon, std::uint64_t seed,
                const std::string& format, const std::string& out) {
  const rescurv::WeightedGraph g = rescurv::load_graph(graph_path);
  rescurv::ResistanceProfile prof;
  if (epsilon > 0) {
    rescurv::ApproxConfig cfg;
    cfg.epsilon = epsilon;
    cfg.seed = seed;
    prof = rescurv::approx_effective_resistance(g, cfg);
  } else {
    prof = rescurv::effective_resistance(g);
  }
  const rescurv::CurvatureReport report = rescurv::curvature_report(g, prof);

  rescurv::RunManifest manifest = base_manifest("compute", seed);
  manifest.parameters = {{"graph", graph_path}, {"epsilon", epsilon}, {"format", format}};
  manifest.input_hashes.push_back({graph_path, rescurv::file_hash(graph_path)});
  if (format == "json") {
    const std::string path = out + ".json";
    std::ofstream file(path);
    file << rescurv::report_to_json(g, report).dump(2) << '\n';
    manifest.output_paths.push_back(path);
  } else {
    const std::string nodes = out + "_nodes.csv", links = out + "_links.csv",
                      resist = out + "_resistance.csv";
    {
      std::ofstream file(nodes);
      rescurv::write_node_curvature_csv(file, report.p);
    }
    {
      std::ofstream file(links);
      rescurv::write_link_curvature_csv(file, g, report.kappa, report.kappa_norm);
    }
    {
      std::ofstream file(resist);
      rescurv::write_resistance_csv(file, g, prof);
    }
    manifest.output_paths = {nodes, links, resist};
  }
  manifest.write(out + "_manifest.json");
  return kExitOk;
}

int cmd_compare(const std::string& graph_path, const std::string& out) {
  const rescurv::WeightedGraph g = rescurv::load_graph(graph_path);
  const rescurv::ResistanceProfile prof = rescurv::effective_resistance(g);
  const Eigen::VectorXd p = rescurv::node_curvature(g, prof);
  const std::vector<double> kappa = rescurv::link_curvature(g, prof, p);

  const std::string path = out + ".csv";
  std::ofstream file(path);
  file << "i,j,kappa,kappa_or,kappa_lly,kappa_fr_over_omega,sandwich_ok\n";
  for (int e = 0; e < g.m(); ++e) {
    const auto [i, j] = g.links()[e];
    const double fr = rescurv::forman_curvature(g, i, j) / prof.link_omega[e];
    const double orc = rescurv::ollivier_curvature_resistance(g, prof, i, j);
    const double lly = rescurv::lly_normalized_curvature(g, prof, i, j);
    const bool ok = fr <= kappa[e] + 1e-9 && kappa[e] <= orc + 1e-9;
    file << i << ',' << j << ',' << rescurv::format_double(kappa[e]) << ','
         << rescurv::format_double(orc) << ',' << rescurv::format_double(lly) << ','
         << rescurv::format_double(fr) << ',' << (ok ? 1 : 0) << '\n';
  }
  rescurv::RunManifest manifest = base_manifest("compare", 0);
  manifest.parameters = {{"graph", graph_path}};
  manifest.input_hashes.push_back({graph_path, rescurv::file_hash(graph_path)});
  manifest.output_paths = {path};
  manifest.write(out + "_manifest.json");
  return kExitOk;
}

int cmd_flow(const std::string& graph_path, double t_end, bool normalized, bool merge,
             const std::vector<double>& snapshots, const std::string& out) {
  const rescurv::WeightedGraph g = rescurv::load_graph(graph_path);
  if (rescurv::components(g).beta != 1) throw rescurv::ParseError("flow needs a connected graph");
  rescurv::StepControl ctl;
  ctl.merge_on_threshold = merge;
  const rescurv::FlowTrajectory traj =
      rescurv::integrate_flow(rescurv::laplacian(g), t_end, ctl, normalized);

  const std::string traj_path = out + "_trajectory.csv";
  {
    std::ofstream file(traj_path);
    file << "t,potential,sigma2,min_weight,is_laplacian\n";
    for (const auto& s : traj.samples)
      file << rescurv::format_double(s.t) << ',' << rescurv::format_double(s.potential) << ','
           << rescurv::format_double(s.sigma2) << ',' << rescurv::format_double(s.min_weight)
           << ',' << (s.is_laplacian ? 1 : 0) << '\n';
  }
  rescurv::RunManifest manifest = base_manifest("flow", 0);
  manifest.parameters = {{"graph", graph_path},
                         {"t_end", t_end},
                         {"normalized", normalized},
                         {"merge", merge},
                         {"halt", rescurv::to_string(traj.halt)},
                         {"halt_time", traj.halt_time}};
  manifest.input_hashes.push_back({graph_path, rescurv::file_hash(graph_path)});
  manifest.output_paths = {traj_path};

  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    // Nearest recorded sample at or before the requested time.
    const rescurv::FlowSample* best = nullptr;
    for (const auto& sample : traj.samples)
      if (sample.t <= snapshots[s] + 1e-12) best = &sample;
    if (!best) continue;
    nlohmann::json snap;
    snap["requested_t"] = snapshots[s];
    snap["t"] = best->t;
    snap["q"] = nlohmann::json::array();
    for (int r = 0; r < best->q.rows(); ++r) {
      std::vector<double> row(best->q.cols());
      for (int c = 0; c < best->q.cols(); ++c) row[c] = best->q(r, c);
      snap["q"].push_back(row);
    }
    const std::string path = out + "_snapshot_" + std::to_string(s) + ".json";
    std::ofstream file(path);
    file << snap.dump(2) << '\n';
    manifest.output_paths.push_back(path);
  }
  manifest.write(out + "_manifest.json");
  if (traj.halt == rescurv::HaltReason::BlowUpDetected) {
    std::cerr << "flow halted: blow-up detected at t = " << traj.halt_time << "\n";
    return kExitBlowUp;
  }
  return kExitOk;
}

int cmd_erg(double R, double r, double N, int samples, int bins, std::uint64_t seed,
            const std::string& out) {
  rescurv::ErgConfig cfg;
  cfg.disc_radius = R;
  cfg.connection_radius = r;
  cfg.expected_nodes = N;
  cfg.seed = seed;
  const rescurv::ProfileBins profile = rescurv::monte_carlo_profile(cfg, samples, bins);
  if (profile.skipped_samples * 10 > samples) {
    std::cerr << "more than 10% of ensemble members failed\n";
    return kExitNumerical;
  }
  rescurv::BoundaryModel model;
  model.r = r;
  model.lambda = cfg.intensity();

  const std::string csv_path = out + "_profile.csv";
  double bulk_sum = 0;
  long bulk_count = 0;
  {
    std::ofstream file(csv_path);
    file << "bin_center_D_over_r,mc_mean,mc_std,mc_count,model_value\n";
    for (std::size_t b = 0; b + 1 < profile.edges.size(); ++b) {
      const double center = 0.5 * (profile.edges[b] + profile.edges[b + 1]);
      const double model_value = rescurv::expected_boundary_curvature(center * r, model);
      file << rescurv::format_double(center) << ',' << rescurv::format_double(profile.mean[b])
           << ',' << rescurv::format_double(profile.stddev[b]) << ',' << profile.count[b] << ','
           << rescurv::format_double(model_value) << '\n';
      if (center >= 2.0 && profile.count[b] > 0) {
        bulk_sum += profile.mean[b] * profile.count[b];
        bulk_count += profile.count[b];
      }
    }
  }
  nlohmann::json summary;
  summary["bulk_mean_p"] = bulk_count > 0 ? bulk_sum / bulk_count : 0.0;
  summary["skipped_samples"] = profile.skipped_samples;
  const std::string summary_path = out + "_summary.json";
  {
    std::ofstream file(summary_path);
    file << summary.dump(2) << '\n';
  }
  rescurv::RunManifest manifest = base_manifest("erg", seed);
  manifest.parameters = {{"disc_radius", R},
                         {"connection_radius", r},
                         {"expected_nodes", N},
                         {"samples", samples},
                         {"bins", bins}};
  manifest.output_paths = {csv_path, summary_path};
  manifest.write(out + "_manifest.json");
  return kExitOk;
}

int cmd_er_sweep(int n, double rho_min, double rho_max, int grid, int samples, std::uint64_t seed,
                 const std::string& out) {
  const std::vector<double> rhos = rescurv::log_spaced(rho_min, rho_max, grid);
  std::vector<std::vector<double>> node_p;
  const std::vector<rescurv::SweepRow> rows = rescurv::er_sweep(n, rhos, samples, seed, &node_p);

  const std::string sweep_path = out + "_sweep.csv";
  {
    std::ofstream file(sweep_path);
    file << "rho,mean_kappa,giant_fraction,total_links\n";
    for (const auto& row : rows)
      file << rescurv::format_double(row.rho) << ',' << rescurv::format_double(row.mean_kappa)
           << ',' << rescurv::format_double(row.giant_fraction) << ',' << row.total_links << '\n';
  }
  const std::string hist_path = out + "_node_hist.csv";
  {
    std::ofstream file(hist_path);
    file << "rho,bin_lo,bin_hi,count\n";
    const int hist_bins = 30;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (node_p[k].empty()) continue;
      const auto [lo_it, hi_it] = std::minmax_element(node_p[k].begin(), node_p[k].end());
      const double lo = *lo_it, hi = std::max(*hi_it, *lo_it + 1e-12);
      std::vector<long> counts(hist_bins, 0);
      for (double v : node_p[k]) {
        int b = static_cast<int>((v - lo) / (hi - lo) * hist_bins);
        ++counts[std::clamp(b, 0, hist_bins - 1)];
      }
      for (int b = 0; b < hist_bins; ++b)
        file << rescurv::format_double(rows[k].rho) << ','
             << rescurv::format_double(lo + (hi - lo) * b / hist_bins) << ','
             << rescurv::format_double(lo + (hi - lo) * (b + 1) / hist_bins) << ',' << counts[b]
             << '\n';
    }
  }
  rescurv::RunManifest manifest = base_manifest("er-sweep", seed);
  manifest.parameters = {{"n", n},
                         {"rho_min", rho_min},
                         {"rho_max", rho_max},
                         {"grid", grid},
                         {"samples", samples}};
  manifest.output_paths = {sweep_path, hist_path};
  manifest.write(out + "_manifest.json");
  return kExitOk;
}

int cmd_sample_trees(const std::string& graph_path, long samples, std::uint64_t seed,
                     const std::string& out) {
  const rescurv::WeightedGraph g = rescurv::load_graph(graph_path);
  if (rescurv::components(g).beta != 1)
    throw rescurv::ParseError("sample-trees needs a connected graph");
  const std::vector<rescurv::TreeStatRow> rows = rescurv::tree_inclusion_stats(g, samples, seed);

  nlohmann::json report = nlohmann::json::array();
  bool all_pass = true;
  for (const auto& row : rows) {
    report.push_back({{"i", row.link.i},
                      {"j", row.link.j},
                      {"relative", row.relative},
                      {"empirical", row.empirical},
                      {"sigma", row.sigma},
                      {"pass", row.pass}});
    all_pass = all_pass && row.pass;
  }
  const std::string path = out + "_trees.json";
  {
    std::ofstream file(path);
    file << report.dump(2) << '\n';
  }
  rescurv::RunManifest manifest = base_manifest("sample-trees", seed);
  manifest.parameters = {{"graph", graph_path}, {"samples", samples}};
  manifest.input_hashes.push_back({graph_path, rescurv::file_hash(graph_path)});
  manifest.output_paths = {path};
  manifest.write(out + "_manifest.json");
  if (!all_pass) {
    std::cerr << "statistical anomaly: an inclusion frequency left its 3-sigma band\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("RESIST_CURVE_THREADS")) {
    const int cap = std::atoi(threads);
    if (cap > 0) Eigen::setNbThreads(cap);
  }

  CLI::App app{"Resistance-based curvature toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string graph_path, format = "csv", out = "rescurv_out";
  double epsilon = 0, t_end = 1, rho_min = 1e-4, rho_max = 1.0;
  double disc_radius = 1.0, connection_radius = 0.25, expected_nodes = 100;
  std::uint64_t seed = 0;
  int bins = 40, grid = 40, n = 100;
  long samples = 10;
  bool normalized = false, merge = false;
  std::vector<double> snapshots;

  auto* compute = app.add_subcommand("compute", "Node and link curvature of a graph file");
  compute->add_option("graph", graph_path, "edge-list or JSON graph file")->required();
  compute->add_option("--epsilon", epsilon, "approximate resistances at this accuracy (0 = exact)");
  compute->add_option("--seed", seed, "sketch seed for approximate mode");
  compute->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  compute->add_option("--out", out, "output path prefix");

  auto* compare = app.add_subcommand("compare", "Curvature notions side by side per link");
  compare->add_option("graph", graph_path)->required();
  compare->add_option("--out", out, "output path prefix");

  auto* flow = app.add_subcommand("flow", "Integrate the resistance curvature flow");
  flow->add_option("graph", graph_path)->required();
  flow->add_option("--t-end", t_end, "integration horizon")->required();
  flow->add_flag("--normalized", normalized, "degree-normalized flow");
  flow->add_flag("--merge", merge, "merge node pairs on resistance collapse instead of halting");
  flow->add_option("--snapshot", snapshots, "times at which to dump the full matrix");
  flow->add_option("--out", out, "output path prefix");

  auto* erg = app.add_subcommand("erg", "Boundary curvature profile of random geometric graphs");
  erg->add_option("--disc-radius", disc_radius);
  erg->add_option("--connection-radius", connection_radius);
  erg->add_option("--expected-nodes", expected_nodes);
  erg->add_option("--samples", samples, "ensemble size");
  erg->add_option("--bins", bins);
  erg->add_option("--seed", seed);
  erg->add_option("--out", out, "output path prefix");

  auto* sweep = app.add_subcommand("er-sweep", "Mean link curvature across G(n, rho) densities");
  sweep->add_option("--n", n)->required();
  sweep->add_option("--rho-min", rho_min);
  sweep->add_option("--rho-max", rho_max);
  sweep->add_option("--grid", grid, "number of log-spaced densities");
  sweep->add_option("--samples", samples, "graphs per density");
  sweep->add_option("--seed", seed);
  sweep->add_option("--out", out, "output path prefix");

  auto* trees = app.add_subcommand("sample-trees", "Spanning-tree link-inclusion statistics");
  trees->add_option("graph", graph_path)->required();
  trees->add_option("--samples", samples, "number of sampled trees");
  trees->add_option("--seed", seed);
  trees->add_option("--out", out, "output path prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compute->parsed()) return cmd_compute(graph_path, epsilon, seed, format, out);
    if (compare->parsed()) return cmd_compare(graph_path, out);
    if (flow->parsed()) return cmd_flow(graph_path, t_end, normalized, merge, snapshots, out);
    if (erg->parsed())
      return cmd_erg(disc_radius, connection_radius, expected_nodes, static_cast<int>(samples),
                     bins, seed, out);
    if (sweep->parsed())
      return cmd_er_sweep(n, rho_min, rho_max, grid, static_cast<int>(samples), seed, out);
    if (trees->parsed()) return cmd_sample_trees(graph_path, samples, seed, out);
  } catch (const rescurv::ParseError& err) {
    std::cerr << "input error: " << err.what() << '\n';
    return kExitInput;
  } catch (const rescurv::GraphError& err) {
    std::cerr << "input error: " << err.what() << '\n';
    return kExitInput;
  } catch (const rescurv::InvalidSizeError& err) {
    std::cerr << "input error: " << err.what() << '\n';
    return kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "numerical failure: " << err.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
