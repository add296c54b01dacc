#pragma once

// Reference systems: the three-dam river model and the four-node product
// counterexample pair. Node indices are 0-based.

#include "netreal/graph.hpp"
#include "netreal/realization.hpp"

namespace netreal::fixtures {

/// Downward information flow along the river: every node reads itself and
/// node k reads node k-1.
inline NetworkGraph river_graph() { return build_graph(3, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}}); }

inline Matrix river_a() {
  Matrix a(3, 3);
  // clang-format off
  a << 0.9, 0.0, 0.0,
       0.1, 0.8, 0.0,
       0.0, 0.2, 0.7;
  // clang-format on
  return a;
}

inline Matrix river_b() {
  Matrix b(3, 3);
  // clang-format off
  b << -1.0,  0.0,  0.0,
        1.0, -1.0,  0.0,
        0.0,  1.0, -1.0;
  // clang-format on
  return b;
}

/// Water levels x driven by releases u, measured directly: (A, B, I, 0).
inline BlockRealization river_plant() {
  return {NodeDims::from_counts({1, 1, 1}, {1, 1, 1}, {1, 1, 1}), river_a(), river_b(), Matrix::Identity(3, 3),
          Matrix::Zero(3, 3)};
}

/// Non-minimal realization of the same transfer matrix whose input matrix is
/// block-diagonal. Node states: 2, 2, 1.
inline BlockRealization river_nonminimal() {
  Matrix a(5, 5);
  // clang-format off
  a << 0.9, 0.0, 0.0, 0.0, 0.0,
       0.0, 0.8, 0.0, 0.0, 0.0,
       0.1, 0.0, 0.8, 0.0, 0.0,
       0.0, 0.2, 0.0, 0.7, 0.0,
       0.0, 0.0, 0.2, 0.0, 0.7;
  // clang-format on
  Matrix b(5, 3);
  // clang-format off
  b << -1.0,  0.0,  0.0,
        1.0,  0.0,  0.0,
        0.0, -1.0,  0.0,
        0.0,  1.0,  0.0,
        0.0,  0.0, -1.0;
  // clang-format on
  Matrix c(3, 5);
  // clang-format off
  c << 1.0, 0.0, 0.0, 0.0, 0.0,
       0.0, 1.0, 1.0, 0.0, 0.0,
       0.0, 0.0, 0.0, 1.0, 1.0;
  // clang-format on
  return {NodeDims::from_counts({2, 2, 1}, {1, 1, 1}, {1, 1, 1}), a, b, c, Matrix::Zero(3, 3)};
}

/// Structured Q = (E, F, G, H) for the river controller: E lower bidiagonal
/// along the graph, F, G diagonal, H = 0. Values are a stable demo choice.
struct RiverQValues {
  double e_diag = 0.5;
  double e_sub = 0.1;
  double f = 1.0;
  double g = 0.2;
  bool misplace_e21 = false;  // move E_21 to E_12, against the graph
};

inline BlockRealization river_demo_q(const RiverQValues& v = {}) {
  Matrix e = v.e_diag * Matrix::Identity(3, 3);
  if (v.misplace_e21) {
    e(0, 1) = v.e_sub;
  } else {
    e(1, 0) = v.e_sub;
  }
  e(2, 1) = v.e_sub;
  return {NodeDims::from_counts({1, 1, 1}, {1, 1, 1}, {1, 1, 1}), e, v.f * Matrix::Identity(3, 3),
          v.g * Matrix::Identity(3, 3), Matrix::Zero(3, 3)};
}

/// Four scalar nodes with self-loops plus edges 0->2, 0->3, 1->2, 1->3 as
/// listed (receiver first), i.e. the literal pairs (0,2),(0,3),(1,2),(1,3).
inline NetworkGraph product_graph() {
  return build_graph(4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 2}, {0, 3}, {1, 2}, {1, 3}});
}

/// G1(z): column 0 carries 1/(z-2) into outputs 2 and 3, column 1 a unit
/// feedthrough into outputs 2 and 3. One unstable state hosted by node 0.
inline BlockRealization product_g1() {
  Matrix a(1, 1);
  a << 2.0;
  Matrix b = Matrix::Zero(1, 4);
  b(0, 0) = 1.0;
  Matrix c = Matrix::Zero(4, 1);
  c(2, 0) = 1.0;
  c(3, 0) = 1.0;
  Matrix d = Matrix::Zero(4, 4);
  d(2, 1) = 1.0;
  d(3, 1) = 1.0;
  return {NodeDims::from_counts({1, 0, 0, 0}, {1, 1, 1, 1}, {1, 1, 1, 1}), a, b, c, d};
}

/// G2(z) = diag(1, 1/(z-2), 0, 0). One unstable state hosted by node 1.
inline BlockRealization product_g2() {
  Matrix a(1, 1);
  a << 2.0;
  Matrix b = Matrix::Zero(1, 4);
  b(0, 1) = 1.0;
  Matrix c = Matrix::Zero(4, 1);
  c(1, 0) = 1.0;
  Matrix d = Matrix::Zero(4, 4);
  d(0, 0) = 1.0;
  return {NodeDims::from_counts({0, 1, 0, 0}, {1, 1, 1, 1}, {1, 1, 1, 1}), a, b, c, d};
}

}  // namespace netreal::fixtures
