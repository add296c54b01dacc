#pragma once

#include <string>
#include <vector>

#include "netreal/graph.hpp"
#include "netreal/realization.hpp"

namespace netreal {

struct Violation {
  char matrix = 'A';  // one of 'A', 'B', 'C', 'D'
  Index row_node = 0;
  Index col_node = 0;
  double max_abs = 0.0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct CompatibilityReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Checks the block sparsity pattern of a realization against a graph.
///
/// Forbidden blocks: A_ij and C_ij for (i, j) not in E; B_ij for i != j;
/// D_ij for i != j (strict) or for (i, j) not in E with i != j (edge-sparse).
/// Entries with |value| <= zero_tol count as zero; the default tolerance is
/// exact. Violations are listed in the order A, B, C, D, row-major by block.
inline CompatibilityReport check_compatibility(const BlockRealization& r, const NetworkGraph& g,
                                               DMode mode = DMode::kStrict, double zero_tol = 0.0) {
  if (r.num_nodes() != g.num_nodes()) {
    throw InputError("check_compatibility: realization has " + std::to_string(r.num_nodes()) +
                     " nodes, graph has " + std::to_string(g.num_nodes()));
  }
  if (!(zero_tol >= 0.0)) throw InputError("check_compatibility: zero_tol must be non-negative");

  CompatibilityReport report;
  const Index nodes = r.num_nodes();
  auto scan = [&](char name, auto block_of, auto allowed) {
    for (Index i = 0; i < nodes; ++i) {
      for (Index j = 0; j < nodes; ++j) {
        if (allowed(i, j)) continue;
        const auto blk = block_of(i, j);
        if (blk.size() == 0) continue;
        const double worst = blk.cwiseAbs().maxCoeff();
        if (worst > zero_tol) report.violations.push_back({name, i, j, worst});
      }
    }
  };
  auto on_edge = [&](Index i, Index j) { return g.has_edge(i, j); };
  auto diagonal = [](Index i, Index j) { return i == j; };
  auto d_allowed = [&](Index i, Index j) { return i == j || (mode == DMode::kEdgeSparse && g.has_edge(i, j)); };

  scan('A', [&](Index i, Index j) { return r.a_block(i, j); }, on_edge);
  scan('B', [&](Index i, Index j) { return r.b_block(i, j); }, diagonal);
  scan('C', [&](Index i, Index j) { return r.c_block(i, j); }, on_edge);
  scan('D', [&](Index i, Index j) { return r.d_block(i, j); }, d_allowed);
  return report;
}

}  // namespace netreal
