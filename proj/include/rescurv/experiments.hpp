#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rescurv/curvature.hpp"
#include "rescurv/generators.hpp"
#include "rescurv/graph.hpp"
#include "rescurv/resistance.hpp"
#include "rescurv/rng.hpp"
#include "rescurv/spanning_trees.hpp"
#include "rescurv/stats.hpp"

namespace rescurv {

struct SweepRow {
  double rho;
  long total_links = 0;
  double mean_kappa = 0;      // over all links of all samples
  double giant_fraction = 0;  // largest component / n, averaged over samples
};

inline std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> grid(count);
  for (int k = 0; k < count; ++k)
    grid[k] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (count - 1));
  return grid;
}

// Density sweep over G(n, rho) ensembles: per rho, the ensemble mean link
// curvature and the mean largest-component fraction.
inline std::vector<SweepRow> er_sweep(int n, const std::vector<double>& rhos, int samples,
                                      std::uint64_t seed,
                                      std::vector<std::vector<double>>* node_curvatures = nullptr) {
  std::vector<SweepRow> rows;
  if (node_curvatures) node_curvatures->assign(rhos.size(), {});
  const Rng root(seed);
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    SweepRow row;
    row.rho = rhos[k];
    double kappa_sum = 0, giant_sum = 0;
    for (int s = 0; s < samples; ++s) {
      const std::uint64_t g_seed = root.derive(k).derive(static_cast<std::uint64_t>(s)).next_u64();
      const WeightedGraph g = erdos_renyi(n, rhos[k], g_seed);
      const ComponentInfo comps = components(g);
      std::size_t giant = 0;
      for (const auto& members : comps.members) giant = std::max(giant, members.size());
      giant_sum += static_cast<double>(giant) / n;
      if (g.m() > 0) {
        const ResistanceProfile prof = effective_resistance(g);
        const Eigen::VectorXd p = node_curvature(g, prof);
        const std::vector<double> kappa = link_curvature(g, prof, p);
        for (double v : kappa) kappa_sum += v;
        row.total_links += g.m();
        if (node_curvatures)
          for (int i = 0; i < n; ++i) (*node_curvatures)[k].push_back(p(i));
      }
    }
    row.mean_kappa = row.total_links > 0 ? kappa_sum / row.total_links : 0.0;
    row.giant_fraction = giant_sum / samples;
    rows.push_back(row);
  }
  return rows;
}

struct TreeStatRow {
  Link link;
  double relative;   // c * omega, the exact inclusion probability
  double empirical;  // sampled inclusion frequency
  double sigma;      // one binomial standard deviation
  bool pass;         // |empirical - relative| within 3 sigma
};

// Empirical link-inclusion frequencies over sampled spanning trees (one
// shared tree stream for all links), with 3-sigma pass flags.
inline std::vector<TreeStatRow> tree_inclusion_stats(const WeightedGraph& g, long samples,
                                                     std::uint64_t seed) {
  const ResistanceProfile prof = effective_resistance(g);
  std::vector<long> hits(g.m(), 0);
  const Rng root(seed);
  for (long s = 0; s < samples; ++s) {
    const SpanningTree t = sample_tree(g, root.derive(static_cast<std::uint64_t>(s)));
    for (const Link& l : t.links) ++hits[g.link_index(l.i, l.j)];
  }
  std::vector<TreeStatRow> rows;
  for (int e = 0; e < g.m(); ++e) {
    TreeStatRow row;
    row.link = g.links()[e];
    row.relative = prof.relative[e];
    row.empirical = static_cast<double>(hits[e]) / samples;
    row.sigma = std::sqrt(std::max(row.relative * (1 - row.relative), 0.0) / samples);
    // The 1e-9 floor absorbs roundoff on cut links, whose band is zero.
    row.pass = std::abs(row.empirical - row.relative) <=
               binomial_band(std::clamp(row.relative, 0.0, 1.0), samples) + 1e-9;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rescurv
