#include <catch2/catch_amalgamated.hpp>

#include "rescurv/curvature.hpp"
#include "rescurv/flow.hpp"
#include "rescurv/generators.hpp"

using namespace rescurv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("flow geometry matches the direct computation") {
  const auto g = make_cycle(5, 2.0);
  const auto prof = effective_resistance(g);
  const auto p = node_curvature(g, prof);
  const FlowGeometry geo = flow_geometry(laplacian(g));
  REQUIRE_THAT((geo.omega - prof.omega).cwiseAbs().maxCoeff(), WithinAbs(0.0, 1e-10));
  REQUIRE_THAT((geo.p - p).cwiseAbs().maxCoeff(), WithinAbs(0.0, 1e-10));
  REQUIRE_THAT(geo.potential, WithinRel(2.0 * g.n() * sigma_squared(prof, p)[0], 1e-10));
}

TEST_CASE("flow geometry rejects disconnected Laplacians") {
  const auto g = build_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  REQUIRE_THROWS_AS(flow_geometry(laplacian(g)), DisconnectedDuringFlowError);
}

TEST_CASE("a single link collapses at half the inverse weight") {
  // dc/dt = 2c^2 here, so c(t) = c0/(1-2c0 t) diverges at t = 1/(2 c0).
  const double c0 = 2.0;
  const auto traj = integrate_flow(laplacian(make_path(2, c0)), 1.0);
  REQUIRE(traj.halt == HaltReason::BlowUpDetected);
  REQUIRE_THAT(traj.halt_time, WithinAbs(1.0 / (2.0 * c0), 0.01 / (2.0 * c0)));
}

TEST_CASE("path end links follow their closed form until blow-up at 1/c0") {
  const double c0 = 1.0;
  StepControl ctl;
  ctl.sample_interval = 0.9 / c0 / 30;
  const auto traj = integrate_flow(laplacian(make_path(4, c0)), 0.9 / c0, ctl);
  REQUIRE(traj.halt == HaltReason::Completed);
  for (const auto& s : traj.samples) {
    const double expected = c0 / (1.0 - c0 * s.t);
    REQUIRE_THAT(-s.q(0, 1), WithinRel(expected, 1e-6));
    REQUIRE_THAT(-s.q(1, 2), WithinRel(c0, 1e-6));  // interior link never moves
  }
  const auto full = integrate_flow(laplacian(make_path(4, c0)), 2.0 / c0);
  REQUIRE(full.halt == HaltReason::BlowUpDetected);
  REQUIRE_THAT(full.halt_time, WithinAbs(1.0 / c0, 0.01 / c0));
}

TEST_CASE("node-transitive flow matches the spectral closed form") {
  const auto q0 = laplacian(make_cycle(6));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q0);
  const double blow_up = 6.0 / (2.0 * es.eigenvalues().maxCoeff());
  StepControl ctl;
  ctl.continue_outside_cone = true;
  ctl.sample_interval = 0.8 * blow_up / 20;
  const auto traj = integrate_flow(q0, 0.8 * blow_up, ctl);
  REQUIRE(traj.halt == HaltReason::Completed);
  for (const auto& s : traj.samples) {
    const Eigen::MatrixXd ref = transitive_closed_form(q0, s.t);
    REQUIRE_THAT((s.q - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff(),
                 WithinAbs(0.0, 1e-6));
  }
  REQUIRE_THROWS_AS(transitive_closed_form(q0, blow_up), PastBlowUpError);
}

TEST_CASE("the potential is monotone nonincreasing along the flow") {
  const auto g = build_graph(5, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 0, 0.5}, {2, 3, 1.0}, {3, 4, 1.5}});
  StepControl ctl;
  ctl.sample_interval = 0.01;
  const auto traj = integrate_flow(laplacian(g), 0.2, ctl);
  for (std::size_t s = 1; s < traj.samples.size(); ++s)
    REQUIRE(traj.samples[s].potential <= traj.samples[s - 1].potential + 1e-9);
}

TEST_CASE("the flow is the gradient flow of the potential") {
  REQUIRE_THAT(gradient_check(laplacian(make_path(4))), WithinAbs(0.0, 1e-6));
  REQUIRE_THAT(gradient_check(laplacian(make_cycle(5, 2.0))), WithinAbs(0.0, 1e-6));
  const auto g = build_graph(4, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 0.5}, {3, 0, 1.5}});
  REQUIRE_THAT(gradient_check(laplacian(g)), WithinAbs(0.0, 1e-6));
}

TEST_CASE("sampled resistances decay at rate minus twice the curvature sum") {
  StepControl ctl;
  ctl.sample_interval = 0.4 / 50;
  const auto traj = integrate_flow(laplacian(make_path(4)), 0.4, ctl);
  REQUIRE_THAT(resistance_flow_check(traj), WithinAbs(0.0, 1e-4));
}

TEST_CASE("merging contracts the fast link and continues the flow") {
  // Unequal weights so only the heavy link collapses; the merge happens
  // near its own blow-up time while the light link still has slack.
  const auto g = build_graph(3, {{0, 1, 1.0}, {1, 2, 0.2}});
  StepControl ctl;
  ctl.merge_on_threshold = true;
  const auto traj = integrate_flow(laplacian(g), 2.0, ctl);
  REQUIRE(traj.halt == HaltReason::Completed);
  REQUIRE(traj.merges.size() == 1);
  REQUIRE_THAT(traj.merges.front().t, WithinAbs(1.0, 0.01));
  REQUIRE(traj.samples.back().q.rows() == 2);
}

TEST_CASE("normalized flow on a single link grows exponentially") {
  // With diag(p/k) the single-link equation becomes dc/dt = 2c.
  const double c0 = 0.7;
  StepControl ctl;
  ctl.sample_interval = 0.05;
  const auto traj = integrate_normalized_flow(laplacian(make_path(2, c0)), 1.0, ctl);
  REQUIRE(traj.halt == HaltReason::Completed);
  for (const auto& s : traj.samples)
    REQUIRE_THAT(-s.q(0, 1), WithinRel(c0 * std::exp(2.0 * s.t), 1e-6));
}

TEST_CASE("matrix node merge contracts and preserves structure") {
  const auto g = build_graph(3, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}});
  const Eigen::MatrixXd merged = detail::merge_matrix_nodes(laplacian(g), 0, 1);
  const auto expected = merge_nodes(g, 0, 1);
  REQUIRE_THAT((merged - laplacian(expected)).cwiseAbs().maxCoeff(), WithinAbs(0.0, 1e-12));
}
