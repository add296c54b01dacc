#pragma once

#include <numeric>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "netreal/analysis.hpp"
#include "netreal/realization.hpp"

namespace netreal {

/// Node-major merge of several per-node partitioned vectors. Component c
/// contributes sizes[c][k] entries to node k; within a node the components
/// appear in order. position[c][i] is where local entry i of component c
/// lands in the merged vector.
struct Interleave {
  std::vector<Index> node_sizes;
  std::vector<std::vector<Index>> position;
  Index total = 0;
};

inline Interleave interleave(const std::vector<std::vector<Index>>& sizes) {
  Interleave out;
  if (sizes.empty()) return out;
  const std::size_t nodes = sizes.front().size();
  for (const auto& s : sizes) {
    if (s.size() != nodes) throw InputError("interleave: components disagree on node count");
  }
  out.node_sizes.assign(nodes, 0);
  out.position.resize(sizes.size());
  for (std::size_t k = 0; k < nodes; ++k) {
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      for (Index i = 0; i < sizes[c][k]; ++i) out.position[c].push_back(out.total++);
      out.node_sizes[k] += sizes[c][k];
    }
  }
  return out;
}

inline std::vector<Index> identity_positions(Index count) {
  std::vector<Index> idx(static_cast<std::size_t>(count));
  std::iota(idx.begin(), idx.end(), Index{0});
  return idx;
}

/// dst(rows[i], cols[j]) = src(i, j).
inline void scatter(Matrix& dst, const std::vector<Index>& rows, const std::vector<Index>& cols, const Matrix& src) {
  for (Index j = 0; j < src.cols(); ++j) {
    for (Index i = 0; i < src.rows(); ++i) {
      dst(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]) = src(i, j);
    }
  }
}

namespace detail {

inline void require_same_nodes(const BlockRealization& r1, const BlockRealization& r2, const char* op) {
  if (r1.num_nodes() != r2.num_nodes()) {
    throw InputError(std::string(op) + ": node counts differ (" + std::to_string(r1.num_nodes()) + " vs " +
                     std::to_string(r2.num_nodes()) + ")");
  }
}

inline BlockRealization finish(NodeDims dims, Matrix a, Matrix b, Matrix c, Matrix d) {
  flush_signed_zeros(a);
  flush_signed_zeros(b);
  flush_signed_zeros(c);
  flush_signed_zeros(d);
  return {std::move(dims), std::move(a), std::move(b), std::move(c), std::move(d)};
}

}  // namespace detail

/// Parallel connection G1 + G2. Node k hosts (x1_k, x2_k); each block of the
/// result is the direct sum of the corresponding input blocks, so forbidden
/// blocks of the inputs stay exactly zero.
inline BlockRealization add(const BlockRealization& r1, const BlockRealization& r2) {
  detail::require_same_nodes(r1, r2, "add");
  const Index nodes = r1.num_nodes();
  for (Index k = 0; k < nodes; ++k) {
    if (r1.dims()[k].m != r2.dims()[k].m || r1.dims()[k].p != r2.dims()[k].p) {
      throw InputError("add: node " + std::to_string(k) + " has mismatched input/output counts");
    }
  }
  const auto layout = interleave({r1.dims().states(), r2.dims().states()});
  const auto& x1 = layout.position[0];
  const auto& x2 = layout.position[1];
  const auto ins = identity_positions(r1.m());
  const auto outs = identity_positions(r1.p());

  Matrix a = Matrix::Zero(layout.total, layout.total);
  Matrix b = Matrix::Zero(layout.total, r1.m());
  Matrix c = Matrix::Zero(r1.p(), layout.total);
  scatter(a, x1, x1, r1.a());
  scatter(a, x2, x2, r2.a());
  scatter(b, x1, ins, r1.b());
  scatter(b, x2, ins, r2.b());
  scatter(c, outs, x1, r1.c());
  scatter(c, outs, x2, r2.c());
  Matrix d = r1.d() + r2.d();

  std::vector<NodeDim> dims(static_cast<std::size_t>(nodes));
  for (Index k = 0; k < nodes; ++k) {
    dims[static_cast<std::size_t>(k)] = {layout.node_sizes[static_cast<std::size_t>(k)], r1.dims()[k].m,
                                         r1.dims()[k].p};
  }
  return detail::finish(NodeDims(std::move(dims)), std::move(a), std::move(b), std::move(c), std::move(d));
}

struct ProductResult {
  BlockRealization system;
  bool outer_stable = false;
  bool inner_stable = false;

  /// The closure guarantee for products assumes stable factors.
  [[nodiscard]] bool factors_stable() const { return outer_stable && inner_stable; }
};

/// Series connection outer * inner (inner acts first). Node k hosts
/// (x_inner_k, x_outer_k) with per-node blocks
///
///   [ A1_kl          0      | B1_k      ]
///   [ B2_k C1_kl     A2_kl  | B2_k D1_k ]
///   [ D2_k C1_kl     C2_kl  | D2_k D1_k ]
///
/// where 1 = inner, 2 = outer. Unstable factors are allowed and flagged.
inline ProductResult multiply_report(const BlockRealization& outer, const BlockRealization& inner) {
  detail::require_same_nodes(outer, inner, "multiply");
  const Index nodes = inner.num_nodes();
  for (Index k = 0; k < nodes; ++k) {
    if (inner.dims()[k].p != outer.dims()[k].m) {
      throw InputError("multiply: node " + std::to_string(k) + " inner outputs (" +
                       std::to_string(inner.dims()[k].p) + ") != outer inputs (" +
                       std::to_string(outer.dims()[k].m) + ")");
    }
  }
  const auto layout = interleave({inner.dims().states(), outer.dims().states()});
  const auto& x1 = layout.position[0];
  const auto& x2 = layout.position[1];
  const auto ins = identity_positions(inner.m());
  const auto outs = identity_positions(outer.p());

  Matrix a = Matrix::Zero(layout.total, layout.total);
  Matrix b = Matrix::Zero(layout.total, inner.m());
  Matrix c = Matrix::Zero(outer.p(), layout.total);
  scatter(a, x1, x1, inner.a());
  scatter(a, x2, x1, outer.b() * inner.c());
  scatter(a, x2, x2, outer.a());
  scatter(b, x1, ins, inner.b());
  scatter(b, x2, ins, outer.b() * inner.d());
  scatter(c, outs, x1, outer.d() * inner.c());
  scatter(c, outs, x2, outer.c());
  Matrix d = outer.d() * inner.d();

  std::vector<NodeDim> dims(static_cast<std::size_t>(nodes));
  for (Index k = 0; k < nodes; ++k) {
    dims[static_cast<std::size_t>(k)] = {layout.node_sizes[static_cast<std::size_t>(k)], inner.dims()[k].m,
                                         outer.dims()[k].p};
  }
  ProductResult result{
      detail::finish(NodeDims(std::move(dims)), std::move(a), std::move(b), std::move(c), std::move(d)),
      is_stable(outer), is_stable(inner)};
  return result;
}

inline BlockRealization multiply(const BlockRealization& outer, const BlockRealization& inner) {
  return multiply_report(outer, inner).system;
}

inline constexpr double kDefaultCondLimit = 1e8;

namespace detail {

inline bool d_block_diagonal(const BlockRealization& r) {
  for (Index i = 0; i < r.num_nodes(); ++i) {
    for (Index j = 0; j < r.num_nodes(); ++j) {
      if (i != j && r.d_block(i, j).size() > 0 && (r.d_block(i, j).array() != 0.0).any()) return false;
    }
  }
  return true;
}

inline Matrix checked_inverse(const Matrix& d, double cond_limit, const std::string& what) {
  if (d.size() == 0) return d;
  Eigen::JacobiSVD<Matrix> svd(d);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0) || !(s(0) / smin < cond_limit)) {
    throw InversionError("invert: " + what + " is singular or ill-conditioned (cond " +
                         (smin > 0.0 ? std::to_string(s(0) / smin) : std::string("inf")) + " >= " +
                         std::to_string(cond_limit) + ")");
  }
  return d.partialPivLu().inverse();
}

}  // namespace detail

/// Inverse system G^{-1} = (A - B D^-1 C, B D^-1, -D^-1 C, D^-1).
///
/// Requires p_k = m_k per node. A block-diagonal D is inverted node by node,
/// so the inverse is exactly block-diagonal as well; otherwise D is inverted
/// as a whole. States keep their positions.
inline BlockRealization invert(const BlockRealization& r, double cond_limit = kDefaultCondLimit) {
  const auto& dims = r.dims();
  for (Index k = 0; k < dims.size(); ++k) {
    if (dims[k].m != dims[k].p) {
      throw InversionError("invert: node " + std::to_string(k) + " has " + std::to_string(dims[k].p) +
                           " outputs but " + std::to_string(dims[k].m) + " inputs");
    }
  }
  Matrix d_inv = Matrix::Zero(r.m(), r.m());
  if (detail::d_block_diagonal(r)) {
    for (Index k = 0; k < dims.size(); ++k) {
      const Index off = dims.input_offset(k);
      const Index sz = dims[k].m;
      d_inv.block(off, off, sz, sz) =
          detail::checked_inverse(r.d_block(k, k), cond_limit, "direct term of node " + std::to_string(k));
    }
  } else {
    d_inv = detail::checked_inverse(r.d(), cond_limit, "direct term");
  }
  Matrix b = r.b() * d_inv;
  Matrix c = -(d_inv * r.c());
  Matrix a = r.a() - b * r.c();
  return detail::finish(dims, std::move(a), std::move(b), std::move(c), std::move(d_inv));
}

}  // namespace netreal
