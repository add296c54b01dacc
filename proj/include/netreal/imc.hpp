#pragma once

#include <string>
#include <utility>

#include "netreal/algebra.hpp"
#include "netreal/realization.hpp"

namespace netreal {

namespace detail {

inline void require_imc_conformable(const BlockRealization& plant, const BlockRealization& q,
                                    bool need_strictly_proper = true) {
  if (plant.num_nodes() != q.num_nodes()) throw InputError("imc: plant and Q have different node counts");
  if (need_strictly_proper && !plant.strictly_proper()) {
    throw PreconditionError("imc: plant model must be strictly proper");
  }
  for (Index k = 0; k < plant.num_nodes(); ++k) {
    if (q.dims()[k].m != plant.dims()[k].p || q.dims()[k].p != plant.dims()[k].m) {
      throw InputError("imc: node " + std::to_string(k) + " Q must map the plant's p_k outputs to its m_k inputs");
    }
  }
}

}  // namespace detail

/// Internal model controller C = Q (I - PQ)^{-1} from the loop u = Q[r + Pu - y].
///
/// With P = (A, B, C_P, 0) and Q = (E, F, G, H), node k hosts the controller
/// state (xhat_k, xi_k), the input is r - y and
///
///   A_K = [[A + B H C_P, B G], [F C_P, E]]    B_K = [[B H], [F]]
///   C_K = [H C_P, G]                           D_K = H
///
/// Nothing is assumed about sparsity; whether the result is compatible with
/// a graph is for check_compatibility to decide.
inline BlockRealization imc_controller(const BlockRealization& plant, const BlockRealization& q) {
  detail::require_imc_conformable(plant, q);
  const auto states = interleave({plant.dims().states(), q.dims().states()});
  const auto& xhat = states.position[0];
  const auto& xi = states.position[1];
  const auto ins = identity_positions(plant.p());
  const auto outs = identity_positions(plant.m());

  const Matrix hc = q.d() * plant.c();
  Matrix a = Matrix::Zero(states.total, states.total);
  Matrix b = Matrix::Zero(states.total, plant.p());
  Matrix c = Matrix::Zero(plant.m(), states.total);
  scatter(a, xhat, xhat, plant.a() + plant.b() * hc);
  scatter(a, xhat, xi, plant.b() * q.c());
  scatter(a, xi, xhat, q.b() * plant.c());
  scatter(a, xi, xi, q.a());
  scatter(b, xhat, ins, plant.b() * q.d());
  scatter(b, xi, ins, q.b());
  scatter(c, outs, xhat, hc);
  scatter(c, outs, xi, q.c());
  Matrix d = q.d();

  std::vector<NodeDim> dims(static_cast<std::size_t>(plant.num_nodes()));
  for (Index k = 0; k < plant.num_nodes(); ++k) {
    dims[static_cast<std::size_t>(k)] = {states.node_sizes[static_cast<std::size_t>(k)], plant.dims()[k].p,
                                         plant.dims()[k].m};
  }
  return detail::finish(NodeDims(std::move(dims)), std::move(a), std::move(b), std::move(c), std::move(d));
}

/// Maps of the ideal case (prediction error zero): r -> u is Q, r -> y is PQ.
struct IdealMaps {
  BlockRealization r_to_u;
  BlockRealization r_to_y;
};

inline IdealMaps ideal_maps(const BlockRealization& plant, const BlockRealization& q) {
  detail::require_imc_conformable(plant, q, /*need_strictly_proper=*/false);
  return {q, multiply(plant, q)};
}

}  // namespace netreal
