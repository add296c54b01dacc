#pragma once

#include <string>
#include <vector>

#include "netreal/algebra.hpp"
#include "netreal/analysis.hpp"
#include "netreal/realization.hpp"
#include "netreal/transfer.hpp"

namespace netreal {

/// The four maps collected by H = [[I, -P], [C, I]]^{-1}.
enum class LoopChannel {
  kSensitivity,         ///< H11 = (I + PC)^{-1}
  kPlantSensitivity,    ///< H12 = P (I + CP)^{-1}
  kControlSensitivity,  ///< H21 = -C (I + PC)^{-1}
  kInputSensitivity,    ///< H22 = (I + CP)^{-1}
};

/// Closed-loop matrix as one realization. Per node k the channels of H are
/// stacked as (p_k plant-output channels, m_k plant-input channels), both on
/// the input and the output side; states are (x_P_k, x_C_k).
struct ClosedLoop {
  BlockRealization h;
  std::vector<Index> plant_outputs;  // p_k
  std::vector<Index> plant_inputs;   // m_k
  double spectral_radius = 0.0;

  [[nodiscard]] bool stable() const { return spectral_radius < 1.0; }

  [[nodiscard]] BlockRealization channel(LoopChannel which) const {
    const bool first_out = which == LoopChannel::kSensitivity || which == LoopChannel::kPlantSensitivity;
    const bool first_in = which == LoopChannel::kSensitivity || which == LoopChannel::kControlSensitivity;
    std::vector<std::vector<Index>> outs(plant_outputs.size());
    std::vector<std::vector<Index>> ins(plant_outputs.size());
    for (std::size_t k = 0; k < plant_outputs.size(); ++k) {
      const Index p = plant_outputs[k];
      const Index m = plant_inputs[k];
      for (Index i = 0; i < (first_out ? p : m); ++i) outs[k].push_back(first_out ? i : p + i);
      for (Index i = 0; i < (first_in ? p : m); ++i) ins[k].push_back(first_in ? i : p + i);
    }
    return select_channels(h, outs, ins);
  }
};

namespace detail {

inline void require_loop_conformable(const BlockRealization& plant, const BlockRealization& controller) {
  if (plant.num_nodes() != controller.num_nodes()) {
    throw InputError("close_loop: plant and controller have different node counts");
  }
  if (!plant.strictly_proper()) {
    throw PreconditionError("close_loop: plant must be strictly proper (nonzero direct term)");
  }
  for (Index k = 0; k < plant.num_nodes(); ++k) {
    if (controller.dims()[k].m != plant.dims()[k].p || controller.dims()[k].p != plant.dims()[k].m) {
      throw InputError("close_loop: node " + std::to_string(k) +
                       " controller channels do not mirror the plant's (controller maps p_k -> m_k)");
    }
  }
}

// Channel layout of the stacked loop: per node (p_k, m_k).
inline Interleave loop_channels(const BlockRealization& plant) {
  return interleave({plant.dims().outputs(), plant.dims().inputs()});
}

}  // namespace detail

/// Assembles [[I, -P], [C, I]] as one node-major realization and inverts it.
/// The direct term of that realization is [[I, 0], [D_C, I]] per node and
/// therefore always invertible; a strict-compatible P and C give a
/// strict-compatible H.
inline ClosedLoop close_loop(const BlockRealization& plant, const BlockRealization& controller,
                             double cond_limit = kDefaultCondLimit) {
  detail::require_loop_conformable(plant, controller);
  const auto states = interleave({plant.dims().states(), controller.dims().states()});
  const auto chans = detail::loop_channels(plant);
  const auto& xp = states.position[0];
  const auto& xc = states.position[1];
  const auto& ych = chans.position[0];  // p-channels
  const auto& uch = chans.position[1];  // m-channels

  const Index n = states.total;
  const Index w = chans.total;
  Matrix a = Matrix::Zero(n, n);
  Matrix b = Matrix::Zero(n, w);
  Matrix c = Matrix::Zero(w, n);
  Matrix d = Matrix::Zero(w, w);
  scatter(a, xp, xp, plant.a());
  scatter(a, xc, xc, controller.a());
  scatter(b, xp, uch, plant.b());
  scatter(b, xc, ych, controller.b());
  scatter(c, ych, xp, -plant.c());
  scatter(c, uch, xc, controller.c());
  scatter(d, ych, ych, Matrix::Identity(plant.p(), plant.p()));
  scatter(d, uch, ych, controller.d());
  scatter(d, uch, uch, Matrix::Identity(plant.m(), plant.m()));
  flush_signed_zeros(c);

  std::vector<NodeDim> dims(static_cast<std::size_t>(plant.num_nodes()));
  for (std::size_t k = 0; k < dims.size(); ++k) dims[k] = {states.node_sizes[k], chans.node_sizes[k], chans.node_sizes[k]};
  BlockRealization stacked(NodeDims(std::move(dims)), std::move(a), std::move(b), std::move(c), std::move(d));

  ClosedLoop loop{invert(stacked, cond_limit), plant.dims().outputs(), plant.dims().inputs(), 0.0};
  loop.spectral_radius = spectral_radius(loop.h);
  return loop;
}

/// Q = C (I + PC)^{-1}, read off the closed loop as -H21.
inline BlockRealization q_param(const ClosedLoop& loop) {
  return negate_outputs(loop.channel(LoopChannel::kControlSensitivity));
}

inline BlockRealization q_param(const BlockRealization& plant, const BlockRealization& controller) {
  return q_param(close_loop(plant, controller));
}

/// Reference-to-output map PC (I + PC)^{-1} = I - H11 for the loop
/// u = C (r - y).
inline BlockRealization reference_to_output(const ClosedLoop& loop) {
  return add(identity_system(loop.plant_outputs), negate_outputs(loop.channel(LoopChannel::kSensitivity)));
}

struct IdentityCheck {
  std::string name;
  double max_deviation = 0.0;
  bool pass = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool closed_loop_stable = false;
  double closed_loop_spectral_radius = 0.0;

  [[nodiscard]] bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return !checks.empty();
  }
};

/// Pointwise verification of the closed-loop identities:
///
///  - sensitivity_complement: (I+PC)^{-1} = I - PC (I+PC)^{-1}
///  - block_triangular_inverse:
///      [[I+PC, 0], [C, I]]^{-1} = [[(I+PC)^{-1}, 0], [-C (I+PC)^{-1}, I]]
///  - closed_loop_realization: eval(H) = [[I, -P], [C, I]]^{-1}
///  - gang_of_four: H11 + P (-H21) = I
///
/// The first two use only P(z) and C(z); the last two check the realization
/// built by close_loop against them.
inline IdentityReport verify_identities(const BlockRealization& plant, const BlockRealization& controller,
                                        int num_points = kDefaultSamplePoints, double rel_tol = kDefaultRelTol) {
  const ClosedLoop loop = close_loop(plant, controller);
  const BlockRealization h11 = loop.channel(LoopChannel::kSensitivity);
  const BlockRealization h21 = loop.channel(LoopChannel::kControlSensitivity);
  const auto chans = detail::loop_channels(plant);
  const Index p = plant.p();
  const Index m = plant.m();
  const double radius = sampling_radius({&plant, &controller, &loop.h});

  auto sens = [&](Complex z) {
    const CMatrix pz = eval_transfer(plant, z);
    const CMatrix cz = eval_transfer(controller, z);
    CMatrix s = CMatrix::Identity(p, p) + pz * cz;
    return CMatrix(s.partialPivLu().inverse());
  };

  IdentityReport report;
  report.closed_loop_spectral_radius = loop.spectral_radius;
  report.closed_loop_stable = loop.stable();
  auto record = [&](std::string name, const TransferComparison& cmp) {
    report.checks.push_back({std::move(name), cmp.max_deviation, cmp.equal});
  };

  record("sensitivity_complement",
         compare_on_circle(sens,
                           [&](Complex z) {
                             const CMatrix pc = eval_transfer(plant, z) * eval_transfer(controller, z);
                             return CMatrix(CMatrix::Identity(p, p) - pc * sens(z));
                           },
                           radius, num_points, rel_tol));

  record("block_triangular_inverse",
         compare_on_circle(
             [&](Complex z) {
               const CMatrix pz = eval_transfer(plant, z);
               const CMatrix cz = eval_transfer(controller, z);
               CMatrix lower = CMatrix::Zero(p + m, p + m);
               lower.topLeftCorner(p, p) = CMatrix::Identity(p, p) + pz * cz;
               lower.bottomLeftCorner(m, p) = cz;
               lower.bottomRightCorner(m, m) = CMatrix::Identity(m, m);
               return CMatrix(lower.partialPivLu().inverse());
             },
             [&](Complex z) {
               const CMatrix s = sens(z);
               CMatrix rhs = CMatrix::Zero(p + m, p + m);
               rhs.topLeftCorner(p, p) = s;
               rhs.bottomLeftCorner(m, p) = -eval_transfer(controller, z) * s;
               rhs.bottomRightCorner(m, m) = CMatrix::Identity(m, m);
               return rhs;
             },
             radius, num_points, rel_tol));

  record("closed_loop_realization",
         compare_on_circle([&](Complex z) { return eval_transfer(loop.h, z); },
                           [&](Complex z) {
                             const CMatrix pz = eval_transfer(plant, z);
                             const CMatrix cz = eval_transfer(controller, z);
                             auto yc = [&](Index i) { return chans.position[0][static_cast<std::size_t>(i)]; };
                             auto uc = [&](Index i) { return chans.position[1][static_cast<std::size_t>(i)]; };
                             CMatrix stacked = CMatrix::Zero(p + m, p + m);
                             for (Index i = 0; i < p; ++i) {
                               stacked(yc(i), yc(i)) = 1.0;
                               for (Index j = 0; j < m; ++j) stacked(yc(i), uc(j)) = -pz(i, j);
                             }
                             for (Index i = 0; i < m; ++i) {
                               stacked(uc(i), uc(i)) = 1.0;
                               for (Index j = 0; j < p; ++j) stacked(uc(i), yc(j)) = cz(i, j);
                             }
                             return CMatrix(stacked.partialPivLu().inverse());
                           },
                           radius, num_points, rel_tol));

  record("gang_of_four",
         compare_on_circle(
             [&](Complex z) {
               return CMatrix(eval_transfer(h11, z) - eval_transfer(plant, z) * eval_transfer(h21, z));
             },
             [&](Complex) { return CMatrix(CMatrix::Identity(p, p)); }, radius, num_points, rel_tol));
  return report;
}

}  // namespace netreal
