#pragma once

#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "netreal/analysis.hpp"
#include "netreal/compatibility.hpp"
#include "netreal/graph.hpp"
#include "netreal/realization.hpp"

namespace netreal {

/// Time-indexed stacked signal. Row t of samples is the node-major vector at
/// step t; partition lists the per-node channel counts.
struct SignalTrajectory {
  std::vector<Index> partition;
  Matrix samples;

  static SignalTrajectory zeros(std::vector<Index> partition, Index steps) {
    const Index dim = std::accumulate(partition.begin(), partition.end(), Index{0});
    return {std::move(partition), Matrix::Zero(steps, dim)};
  }

  [[nodiscard]] Index length() const { return samples.rows(); }
  [[nodiscard]] Index dim() const { return samples.cols(); }
  [[nodiscard]] Vector at(Index t) const { return samples.row(t).transpose(); }

  void validate(const char* what) const {
    const Index total = std::accumulate(partition.begin(), partition.end(), Index{0});
    if (total != samples.cols()) {
      throw InputError(std::string(what) + ": partition sums to " + std::to_string(total) + " but samples have " +
                       std::to_string(samples.cols()) + " columns");
    }
    if (!samples.allFinite()) throw InputError(std::string(what) + ": non-finite sample");
  }
};

namespace detail {

// acc + sum_{j in [begin, end)} m(row, j) * x[j - begin], strictly left to
// right. Every simulator goes through this kernel so that centralized and
// distributed runs perform bitwise identical arithmetic. The extra 0 * x_j
// terms of a centralized row are harmless: the sum starts at +0.0, so it can
// never be -0.0, and adding a signed zero leaves every other value intact.
inline double accumulate_row(double acc, const Matrix& m, Index row, Index begin, Index end, const double* x) {
  for (Index j = begin; j < end; ++j) acc += m(row, j) * x[j - begin];
  return acc;
}

// y = M x + N u, row by row, in column order.
inline Vector ordered_affine(const Matrix& m, const Vector& x, const Matrix& n, const Vector& u) {
  Vector out(m.rows());
  for (Index i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    acc = accumulate_row(acc, m, i, 0, m.cols(), x.data());
    acc = accumulate_row(acc, n, i, 0, n.cols(), u.data());
    out(i) = acc;
  }
  return out;
}

inline void require_length(const Vector& v, Index expected, const char* what) {
  if (v.size() != expected) {
    throw InputError(std::string(what) + ": expected length " + std::to_string(expected) + ", got " +
                     std::to_string(v.size()));
  }
}

}  // namespace detail

struct LtiRun {
  SignalTrajectory y;
  SignalTrajectory x;  // x_t aligned with y_t, t = 0..T-1
  Vector x_final;      // x_T
};

/// x_{t+1} = A x_t + B u_t, y_t = C x_t + D u_t.
inline LtiRun simulate_lti(const BlockRealization& r, const SignalTrajectory& u, const Vector& x0) {
  u.validate("simulate_lti input");
  if (u.dim() != r.m()) throw InputError("simulate_lti: input has " + std::to_string(u.dim()) + " channels, system expects " + std::to_string(r.m()));
  detail::require_length(x0, r.n(), "simulate_lti initial state");
  const Index steps = u.length();
  LtiRun run{SignalTrajectory::zeros(r.dims().outputs(), steps), SignalTrajectory::zeros(r.dims().states(), steps),
             x0};
  Vector x = x0;
  for (Index t = 0; t < steps; ++t) {
    const Vector ut = u.at(t);
    run.x.samples.row(t) = x.transpose();
    run.y.samples.row(t) = detail::ordered_affine(r.c(), x, r.d(), ut).transpose();
    x = detail::ordered_affine(r.a(), x, r.b(), ut);
  }
  run.x_final = x;
  return run;
}

/// One read of a state block by a node during a distributed step.
struct AccessRecord {
  Index step = 0;
  Index reader = 0;
  Index source = 0;
};

struct DistributedRun {
  SignalTrajectory y;
  SignalTrajectory x;
  Vector x_final;
  std::size_t message_count = 0;
  std::vector<AccessRecord> access_log;
};

namespace detail {

// What node i can see during one synchronous step: its own state and the
// messages that arrived over its incoming edges. Nothing else is reachable.
class NodeView {
 public:
  struct Message {
    Index source;
    Vector state;
  };

  NodeView(Index self, Index step, const Vector& own, std::vector<Message> inbox, std::vector<AccessRecord>& log)
      : self_(self), step_(step), own_(own), inbox_(std::move(inbox)), log_(log) {}

  const Vector& state_of(Index j) const {
    log_.push_back({step_, self_, j});
    if (j == self_) return own_;
    for (const auto& msg : inbox_) {
      if (msg.source == j) return msg.state;
    }
    throw PreconditionError("distributed: node " + std::to_string(self_) + " has no message from node " +
                            std::to_string(j));
  }

 private:
  Index self_;
  Index step_;
  const Vector& own_;
  std::vector<Message> inbox_;
  std::vector<AccessRecord>& log_;
};

}  // namespace detail

/// Runs the realization as N communicating nodes. In each step node j sends
/// x_j to every i with (i, j) in E, i != j; node i then updates its own state
/// and output from its in-neighbours' states and its local input only. The
/// realization must be strict-compatible with g; trajectories then coincide
/// bitwise with simulate_lti.
inline DistributedRun simulate_distributed(const BlockRealization& r, const NetworkGraph& g,
                                           const SignalTrajectory& u, const Vector& x0) {
  if (!check_compatibility(r, g, DMode::kStrict).ok()) {
    throw PreconditionError("simulate_distributed: realization is not strict-compatible with the graph");
  }
  u.validate("simulate_distributed input");
  if (u.dim() != r.m()) throw InputError("simulate_distributed: input channel count mismatch");
  detail::require_length(x0, r.n(), "simulate_distributed initial state");

  const auto& dims = r.dims();
  const Index nodes = dims.size();
  const Index steps = u.length();
  std::vector<std::vector<Index>> neighbors(static_cast<std::size_t>(nodes));
  for (Index i = 0; i < nodes; ++i) neighbors[static_cast<std::size_t>(i)] = g.in_neighbors(i);

  std::vector<Vector> local(static_cast<std::size_t>(nodes));
  for (Index k = 0; k < nodes; ++k) local[static_cast<std::size_t>(k)] = x0.segment(dims.state_offset(k), dims[k].n);

  DistributedRun run{SignalTrajectory::zeros(dims.outputs(), steps), SignalTrajectory::zeros(dims.states(), steps),
                     x0, 0, {}};
  for (Index t = 0; t < steps; ++t) {
    std::vector<std::vector<detail::NodeView::Message>> inbox(static_cast<std::size_t>(nodes));
    for (const Edge& e : g.edges()) {
      if (e.to == e.from) continue;
      inbox[static_cast<std::size_t>(e.to)].push_back({e.from, local[static_cast<std::size_t>(e.from)]});
      ++run.message_count;
    }

    std::vector<Vector> next(static_cast<std::size_t>(nodes));
    for (Index i = 0; i < nodes; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const detail::NodeView view(i, t, local[ii], std::move(inbox[ii]), run.access_log);
      const Vector ui = u.samples.row(t).segment(dims.input_offset(i), dims[i].m).transpose();
      const Index in_off = dims.input_offset(i);

      // Gather the visible states once, in ascending sender order.
      std::vector<std::pair<Index, const Vector*>> visible;
      for (Index j : neighbors[ii]) visible.emplace_back(j, &view.state_of(j));

      Vector xi(dims[i].n);
      for (Index row = 0; row < dims[i].n; ++row) {
        const Index gr = dims.state_offset(i) + row;
        double acc = 0.0;
        for (const auto& [j, xj] : visible) {
          acc = detail::accumulate_row(acc, r.a(), gr, dims.state_offset(j), dims.state_offset(j) + dims[j].n, xj->data());
        }
        acc = detail::accumulate_row(acc, r.b(), gr, in_off, in_off + dims[i].m, ui.data());
        xi(row) = acc;
      }
      for (Index row = 0; row < dims[i].p; ++row) {
        const Index gr = dims.output_offset(i) + row;
        double acc = 0.0;
        for (const auto& [j, xj] : visible) {
          acc = detail::accumulate_row(acc, r.c(), gr, dims.state_offset(j), dims.state_offset(j) + dims[j].n, xj->data());
        }
        acc = detail::accumulate_row(acc, r.d(), gr, in_off, in_off + dims[i].m, ui.data());
        run.y.samples(t, gr) = acc;
      }
      run.x.samples.row(t).segment(dims.state_offset(i), dims[i].n) = local[ii].transpose();
      next[ii] = std::move(xi);
    }
    local = std::move(next);
  }
  for (Index k = 0; k < nodes; ++k) run.x_final.segment(dims.state_offset(k), dims[k].n) = local[static_cast<std::size_t>(k)];
  return run;
}

/// State matrix of the IMC loop in coordinates (x, xhat, xi): true plant,
/// internal model and Q, with controller input r + P_model u - y.
inline Matrix imc_loop_state_matrix(const BlockRealization& plant_true, const BlockRealization& plant_model,
                                    const BlockRealization& q) {
  const Index nt = plant_true.n();
  const Index nm = plant_model.n();
  const Index nq = q.n();
  const Matrix& h = q.d();
  Matrix a(nt + nm + nq, nt + nm + nq);
  a << plant_true.a() - plant_true.b() * h * plant_true.c(), plant_true.b() * h * plant_model.c(), plant_true.b() * q.c(),
      -plant_model.b() * h * plant_true.c(), plant_model.a() + plant_model.b() * h * plant_model.c(), plant_model.b() * q.c(),
      -q.b() * plant_true.c(), q.b() * plant_model.c(), q.a();
  return a;
}

struct ImcLoopRun {
  SignalTrajectory u;
  SignalTrajectory y;
  SignalTrajectory prediction_error;  // P_model u - y
  double closed_loop_spectral_radius = 0.0;
};

/// Simulates u = Q[r + P_model u - y] against the plant P_true with an
/// additive output disturbance. Both plants must be strictly proper so the
/// loop has no algebraic cycle.
inline ImcLoopRun simulate_imc_loop(const BlockRealization& plant_true, const BlockRealization& plant_model,
                                    const BlockRealization& q, const SignalTrajectory& reference,
                                    const SignalTrajectory& disturbance) {
  if (!plant_true.strictly_proper() || !plant_model.strictly_proper()) {
    throw PreconditionError("simulate_imc_loop: plants must be strictly proper");
  }
  if (plant_true.m() != plant_model.m() || plant_true.p() != plant_model.p()) {
    throw InputError("simulate_imc_loop: true plant and model have different channel counts");
  }
  if (q.m() != plant_model.p() || q.p() != plant_model.m()) {
    throw InputError("simulate_imc_loop: Q must map plant outputs to plant inputs");
  }
  reference.validate("simulate_imc_loop reference");
  disturbance.validate("simulate_imc_loop disturbance");
  if (reference.dim() != plant_model.p() || disturbance.dim() != plant_model.p() ||
      reference.length() != disturbance.length()) {
    throw InputError("simulate_imc_loop: reference/disturbance shape mismatch");
  }

  const Index steps = reference.length();
  const auto outs = plant_model.dims().outputs();
  ImcLoopRun run{SignalTrajectory::zeros(plant_model.dims().inputs(), steps), SignalTrajectory::zeros(outs, steps),
                 SignalTrajectory::zeros(outs, steps), 0.0};
  run.closed_loop_spectral_radius = spectral_radius(imc_loop_state_matrix(plant_true, plant_model, q));

  const Vector no_input = Vector::Zero(plant_model.m());
  Vector x = Vector::Zero(plant_true.n());
  Vector xhat = Vector::Zero(plant_model.n());
  Vector xi = Vector::Zero(q.n());
  for (Index t = 0; t < steps; ++t) {
    const Vector y = detail::ordered_affine(plant_true.c(), x, plant_true.d(), no_input) + disturbance.at(t);
    const Vector yhat = detail::ordered_affine(plant_model.c(), xhat, plant_model.d(), no_input);
    const Vector mismatch = yhat - y;
    const Vector e = reference.at(t) + mismatch;
    const Vector u = detail::ordered_affine(q.c(), xi, q.d(), e);
    run.u.samples.row(t) = u.transpose();
    run.y.samples.row(t) = y.transpose();
    run.prediction_error.samples.row(t) = mismatch.transpose();
    x = detail::ordered_affine(plant_true.a(), x, plant_true.b(), u);
    xhat = detail::ordered_affine(plant_model.a(), xhat, plant_model.b(), u);
    xi = detail::ordered_affine(q.a(), xi, q.b(), e);
  }
  return run;
}

}  // namespace netreal
