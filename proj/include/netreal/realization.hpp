#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netreal/errors.hpp"
#include "netreal/graph.hpp"

namespace netreal {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Replaces -0.0 by +0.0 so structurally zero entries are bitwise zero.
inline void flush_signed_zeros(Matrix& m) {
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) {
      if (m(r, c) == 0.0) m(r, c) = 0.0;
    }
  }
}

/// A discrete-time state-space system (A, B, C, D) whose states, inputs and
/// outputs are stored node-major according to a NodeDims partition.
///
/// The realization carries no graph; compatibility with a graph is a
/// separate check. Construction validates shapes and finiteness.
class BlockRealization {
 public:
  BlockRealization() = default;

  BlockRealization(NodeDims dims, Matrix a, Matrix b, Matrix c, Matrix d)
      : dims_(std::move(dims)), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    expect_shape("A", a_, dims_.n(), dims_.n());
    expect_shape("B", b_, dims_.n(), dims_.m());
    expect_shape("C", c_, dims_.p(), dims_.n());
    expect_shape("D", d_, dims_.p(), dims_.m());
    for (const auto* mat : {&a_, &b_, &c_, &d_}) {
      if (!mat->allFinite()) throw InputError("realization: non-finite matrix entry");
    }
  }

  [[nodiscard]] const NodeDims& dims() const { return dims_; }
  [[nodiscard]] Index num_nodes() const { return dims_.size(); }
  [[nodiscard]] Index n() const { return dims_.n(); }
  [[nodiscard]] Index m() const { return dims_.m(); }
  [[nodiscard]] Index p() const { return dims_.p(); }

  [[nodiscard]] const Matrix& a() const { return a_; }
  [[nodiscard]] const Matrix& b() const { return b_; }
  [[nodiscard]] const Matrix& c() const { return c_; }
  [[nodiscard]] const Matrix& d() const { return d_; }

  // Block (i, j): rows owned by node i, columns owned by node j.
  [[nodiscard]] auto a_block(Index i, Index j) const {
    return a_.block(dims_.state_offset(i), dims_.state_offset(j), dims_[i].n, dims_[j].n);
  }
  [[nodiscard]] auto b_block(Index i, Index j) const {
    return b_.block(dims_.state_offset(i), dims_.input_offset(j), dims_[i].n, dims_[j].m);
  }
  [[nodiscard]] auto c_block(Index i, Index j) const {
    return c_.block(dims_.output_offset(i), dims_.state_offset(j), dims_[i].p, dims_[j].n);
  }
  [[nodiscard]] auto d_block(Index i, Index j) const {
    return d_.block(dims_.output_offset(i), dims_.input_offset(j), dims_[i].p, dims_[j].m);
  }

  [[nodiscard]] bool strictly_proper() const { return d_.size() == 0 || (d_.array() == 0.0).all(); }

  friend bool operator==(const BlockRealization& x, const BlockRealization& y) {
    return x.dims_ == y.dims_ && x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
  }

 private:
  static void expect_shape(const char* name, const Matrix& m, Index rows, Index cols) {
    if (m.rows() != rows || m.cols() != cols) {
      throw InputError(std::string("realization: ") + name + " is " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                       std::to_string(cols));
    }
  }

  NodeDims dims_;
  Matrix a_;
  Matrix b_;
  Matrix c_;
  Matrix d_;
};

/// Which direct-term sparsity counts as compatible.
enum class DMode {
  kStrict,      ///< D block-diagonal.
  kEdgeSparse,  ///< D_ij may be nonzero when (i, j) is an edge.
};

inline const char* to_string(DMode mode) { return mode == DMode::kStrict ? "strict" : "edge"; }

/// All-zero system with the given partition (states allowed, all zero).
inline BlockRealization zero_system(const NodeDims& dims) {
  return {dims, Matrix::Zero(dims.n(), dims.n()), Matrix::Zero(dims.n(), dims.m()),
          Matrix::Zero(dims.p(), dims.n()), Matrix::Zero(dims.p(), dims.m())};
}

/// Memoryless system y = D u with per-node input and output counts.
inline BlockRealization static_gain(const Matrix& d, const std::vector<Index>& inputs,
                                    const std::vector<Index>& outputs) {
  std::vector<Index> zeros(inputs.size(), 0);
  NodeDims dims = NodeDims::from_counts(zeros, inputs, outputs);
  return {dims, Matrix(0, 0), Matrix(0, dims.m()), Matrix(dims.p(), 0), d};
}

inline BlockRealization identity_system(const std::vector<Index>& channels) {
  Index total = 0;
  for (Index c : channels) total += c;
  return static_gain(Matrix::Identity(total, total), channels, channels);
}

/// Same system with every output negated.
inline BlockRealization negate_outputs(const BlockRealization& r) {
  Matrix c = -r.c();
  Matrix d = -r.d();
  flush_signed_zeros(c);
  flush_signed_zeros(d);
  return {r.dims(), r.a(), r.b(), std::move(c), std::move(d)};
}

/// Per-node channel selection: keeps the listed inputs and outputs of each
/// node (local indices) and all states. Block-diagonality of B and D is
/// preserved because selection never moves a channel between nodes.
inline BlockRealization select_channels(const BlockRealization& r,
                                        const std::vector<std::vector<Index>>& outputs_per_node,
                                        const std::vector<std::vector<Index>>& inputs_per_node) {
  const auto& dims = r.dims();
  const auto nodes = static_cast<std::size_t>(dims.size());
  if (outputs_per_node.size() != nodes || inputs_per_node.size() != nodes) {
    throw InputError("select_channels: selection lists must have one entry per node");
  }
  std::vector<NodeDim> out_dims(nodes);
  std::vector<Index> rows;
  std::vector<Index> cols;
  for (std::size_t k = 0; k < nodes; ++k) {
    const auto& d = dims[static_cast<Index>(k)];
    for (Index o : outputs_per_node[k]) {
      if (o < 0 || o >= d.p) throw InputError("select_channels: output index out of range");
      rows.push_back(dims.output_offset(static_cast<Index>(k)) + o);
    }
    for (Index i : inputs_per_node[k]) {
      if (i < 0 || i >= d.m) throw InputError("select_channels: input index out of range");
      cols.push_back(dims.input_offset(static_cast<Index>(k)) + i);
    }
    out_dims[k] = {d.n, static_cast<Index>(inputs_per_node[k].size()),
                   static_cast<Index>(outputs_per_node[k].size())};
  }
  const auto nr = static_cast<Index>(rows.size());
  const auto nc = static_cast<Index>(cols.size());
  Matrix b(r.n(), nc);
  Matrix c(nr, r.n());
  Matrix d(nr, nc);
  for (Index j = 0; j < nc; ++j) b.col(j) = r.b().col(cols[static_cast<std::size_t>(j)]);
  for (Index i = 0; i < nr; ++i) {
    c.row(i) = r.c().row(rows[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < nc; ++j) d(i, j) = r.d()(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
  }
  return {NodeDims(std::move(out_dims)), r.a(), std::move(b), std::move(c), std::move(d)};
}

}  // namespace netreal
