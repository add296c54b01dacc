#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "netreal/algebra.hpp"
#include "netreal/analysis.hpp"
#include "netreal/compatibility.hpp"
#include "netreal/fixtures.hpp"
#include "netreal/imc.hpp"
#include "netreal/io.hpp"
#include "netreal/loops.hpp"
#include "netreal/report.hpp"
#include "netreal/sim.hpp"
#include "netreal/transfer.hpp"

namespace netreal {

// ---------------------------------------------------------------------------
// JSON details for report stages

inline Json violations_json(const CompatibilityReport& r) {
  Json out = Json::array();
  for (const auto& v : r.violations) {
    out.push_back({{"matrix", std::string(1, v.matrix)}, {"block", {v.row_node, v.col_node}}, {"max_abs", v.max_abs}});
  }
  return out;
}

inline Json complex_json(Complex z) { return {z.real(), z.imag()}; }

inline Json pbh_json(const PbhReport& r) {
  Json modes = Json::array();
  for (const auto& m : r.offending_modes) {
    modes.push_back({{"eigenvalue", complex_json(m.eigenvalue)}, {"test", to_string(m.test)},
                     {"rank_deficiency", m.rank_deficiency}});
  }
  return {{"stabilizable", r.stabilizable}, {"detectable", r.detectable}, {"offending_modes", modes}};
}

inline Json comparison_json(const TransferComparison& c) {
  return {{"max_deviation", c.max_deviation}, {"points", c.points_used}};
}

inline Json identities_json(const IdentityReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"max_deviation", c.max_deviation}, {"pass", c.pass}});
  return {{"checks", checks},
          {"closed_loop_spectral_radius", r.closed_loop_spectral_radius},
          {"closed_loop_stable", r.closed_loop_stable}};
}

// ---------------------------------------------------------------------------
// River dams

struct RiverDemoOptions {
  BlockRealization q = fixtures::river_demo_q();
  int points = kDefaultSamplePoints;
  double rel_tol = kDefaultRelTol;
  Index sim_steps = 100;
};

/// End-to-end run on the three-dam model: certify the non-minimal witness,
/// build the IMC controller from Q and check structure, closed-loop
/// identities and the exact-model loop.
inline Report run_demo_river(const RiverDemoOptions& opt = {}) {
  Report rep;
  rep.title = "river dam demo";
  const NetworkGraph g = fixtures::river_graph();
  const BlockRealization plant = fixtures::river_plant();
  const BlockRealization witness = fixtures::river_nonminimal();
  const BlockRealization& q = opt.q;

  const auto cert = certify_witness(witness, g, DMode::kStrict);
  rep.add("nonminimal_witness_certified", cert.certified,
          {{"violations", violations_json(cert.compatibility)},
           {"pbh", pbh_json(cert.pbh)},
           {"spectral_radius", spectral_radius(witness)}});

  const auto original = check_compatibility(plant, g, DMode::kStrict);
  rep.add("original_realization_incompatible", !original.ok(), {{"violations", violations_json(original)}});

  const auto equiv = transfer_equal(plant, witness, opt.points, 1e-9);
  rep.add("witness_transfer_equal", equiv.equal, comparison_json(equiv));

  const CMatrix dc = eval_transfer(plant, 1.0);
  Matrix expected = Matrix::Zero(3, 3);
  expected.diagonal() << -10.0, -5.0, -10.0 / 3.0;
  const double dc_err = (dc - expected.cast<Complex>()).cwiseAbs().maxCoeff();
  rep.add("steady_state_gain", dc_err <= 1e-9, {{"max_error", dc_err}, {"gain", io::matrix_to_json(dc.real())}});

  const BlockRealization controller = imc_controller(plant, q);
  const auto kc = check_compatibility(controller, g, DMode::kStrict);
  rep.add("imc_controller_compatible", kc.ok(),
          {{"states", controller.n()}, {"violations", violations_json(kc)}, {"A", io::matrix_to_json(controller.a())}});

  const ClosedLoop loop = close_loop(plant, controller);
  const auto round_trip = transfer_equal(q_param(loop), q, opt.points, opt.rel_tol);
  rep.add("q_round_trip", round_trip.equal, comparison_json(round_trip));

  const auto ids = verify_identities(plant, controller, opt.points, opt.rel_tol);
  rep.add("closed_loop_identities", ids.pass(), identities_json(ids));

  const auto exact = transfer_equal(reference_to_output(loop), multiply(plant, q), opt.points, opt.rel_tol);
  rep.add("exact_model_reference_map", exact.equal, comparison_json(exact));

  SignalTrajectory r = SignalTrajectory::zeros(plant.dims().outputs(), opt.sim_steps);
  r.samples.setOnes();
  const SignalTrajectory d = SignalTrajectory::zeros(plant.dims().outputs(), opt.sim_steps);
  const auto sim = simulate_imc_loop(plant, plant, q, r, d);
  const auto ideal = simulate_lti(multiply(plant, q), r, Vector::Zero(plant.n() + q.n()));
  const double pred = sim.prediction_error.samples.size() ? sim.prediction_error.samples.cwiseAbs().maxCoeff() : 0.0;
  const double track = sim.y.samples.size() ? (sim.y.samples - ideal.y.samples).cwiseAbs().maxCoeff() : 0.0;
  rep.add("exact_model_simulation", pred == 0.0 && track <= 1e-12,
          {{"steps", opt.sim_steps},
           {"max_prediction_error", pred},
           {"max_deviation_from_PQ", track},
           {"closed_loop_spectral_radius", sim.closed_loop_spectral_radius}});

  const auto central = simulate_lti(witness, SignalTrajectory{r.partition, r.samples}, Vector::Zero(witness.n()));
  const auto dist = simulate_distributed(witness, g, r, Vector::Zero(witness.n()));
  const bool same = dist.y.samples == central.y.samples && dist.x.samples == central.x.samples;
  rep.add("witness_distributed_execution", same,
          {{"steps", opt.sim_steps}, {"messages", dist.message_count}});
  return rep;
}

// ---------------------------------------------------------------------------
// Product of two realizable factors with unstable poles

/// Builds the two four-node factors, checks them under both direct-term
/// modes, forms the series composite G1*G2 and records what holds for it.
/// The composite's realizability verdict is reported as a finding only.
inline Report run_demo_product() {
  Report rep;
  rep.title = "unstable product demo";
  const NetworkGraph literal = fixtures::product_graph();
  const NetworkGraph g = transpose(literal);
  const BlockRealization g1 = fixtures::product_g1();
  const BlockRealization g2 = fixtures::product_g2();

  const auto g1_strict = check_compatibility(g1, g, DMode::kStrict);
  const std::vector<Violation> expected{{'D', 2, 1, 1.0}, {'D', 3, 1, 1.0}};
  rep.add("g1_strict_fails_on_direct_term", g1_strict.violations == expected,
          {{"violations", violations_json(g1_strict)}});

  const auto g1_edge = check_compatibility(g1, g, DMode::kEdgeSparse);
  const auto g2_edge = check_compatibility(g2, g, DMode::kEdgeSparse);
  const auto g2_strict = check_compatibility(g2, g, DMode::kStrict);
  rep.add("g1_edge_sparse_compatible", g1_edge.ok(), {{"violations", violations_json(g1_edge)}});
  rep.add("g2_edge_sparse_compatible", g2_edge.ok(),
          {{"violations", violations_json(g2_edge)}, {"strict_ok", g2_strict.ok()}});

  const ProductResult product = multiply_report(g1, g2);
  const BlockRealization& composite = product.system;
  bool shape_ok = true;
  Json samples = Json::array();
  for (Complex z : {Complex(3.0, 0.0), Complex(4.0, 0.0), Complex(1.0, 2.0)}) {
    const CMatrix val = eval_transfer(composite, z);
    const Complex pole = 1.0 / (z - 2.0);
    double worst = 0.0;
    for (Index i = 0; i < 4; ++i) {
      for (Index j = 0; j < 4; ++j) {
        const bool nonzero = (i == 2 || i == 3) && (j == 0 || j == 1);
        if (nonzero) {
          worst = std::max(worst, std::abs(val(i, j) - pole));
        } else if (val(i, j) != Complex(0.0, 0.0)) {
          shape_ok = false;
        }
      }
    }
    shape_ok = shape_ok && worst <= 1e-10;
    samples.push_back({{"z", complex_json(z)}, {"max_error", worst}});
  }
  rep.add("composite_matches_displayed_product", shape_ok,
          {{"samples", samples}, {"state_matrix", io::matrix_to_json(composite.a())}});

  // Findings, recorded without a verdict on realizability of the product.
  const auto pbh = pbh_report(composite);
  rep.add("composite_findings", true,
          {{"factors_stable", product.factors_stable()},
           {"pbh", pbh_json(pbh)},
           {"strict_compatible_transposed_graph", check_compatibility(composite, g, DMode::kStrict).ok()},
           {"edge_sparse_compatible_transposed_graph", check_compatibility(composite, g, DMode::kEdgeSparse).ok()},
           {"edge_sparse_compatible_literal_graph", check_compatibility(composite, literal, DMode::kEdgeSparse).ok()},
           {"g1_edge_sparse_compatible_literal_graph", check_compatibility(g1, literal, DMode::kEdgeSparse).ok()}});

  rep.notes.push_back(
      "The listed edges point opposite to the nonzero blocks of G1 and G2; all checks use the transposed graph, "
      "matching the receiver-first convention.");
  rep.notes.push_back(
      "G1 has a direct term coupling node 1's input to the outputs of nodes 2 and 3, so it has no realization with "
      "block-diagonal D: the strict definition rejects G1 itself. Under edge-sparse D the series composite above is a "
      "compatible witness; its stabilizability and detectability are reported in composite_findings. The claim that "
      "the product is not network realizable is recorded here, not adjudicated.");
  return rep;
}

}  // namespace netreal
