#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "netreal/analysis.hpp"
#include "netreal/realization.hpp"

namespace netreal {

/// Smallest accepted reciprocal condition estimate of zI - A.
inline constexpr double kPoleRcond = 1e-12;

/// G(z) = C (zI - A)^{-1} B + D by an LU solve; throws PoleError when z sits
/// on (or numerically next to) an eigenvalue of A.
inline CMatrix eval_transfer(const BlockRealization& r, Complex z) {
  CMatrix g = r.d().cast<Complex>();
  if (r.n() == 0) return g;
  CMatrix shifted = -r.a().cast<Complex>();
  shifted.diagonal().array() += z;
  Eigen::PartialPivLU<CMatrix> lu(shifted);
  const double rcond = lu.rcond();
  if (!(rcond >= kPoleRcond)) {
    throw PoleError("eval_transfer: zI - A is singular to working precision (rcond " + std::to_string(rcond) +
                    ")");
  }
  g.noalias() += r.c().cast<Complex>() * lu.solve(r.b().cast<Complex>());
  return g;
}

/// Max entrywise |x - y| scaled by 1 + the larger max-abs entry of x and y.
/// Behaves as an absolute error for small matrices and relative for large.
inline double mixed_deviation(const CMatrix& x, const CMatrix& y) {
  if (x.size() == 0) return 0.0;
  const double scale = 1.0 + std::max(x.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff());
  return (x - y).cwiseAbs().maxCoeff() / scale;
}

/// Points radius * exp(i (2 pi k / K + phase)), k = 0..K-1.
inline std::vector<Complex> circle_points(double radius, int count, double phase = 0.0) {
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / count + phase;
    pts.push_back(std::polar(radius, theta));
  }
  return pts;
}

/// Sampling radius that keeps every point well outside all listed spectra.
inline double sampling_radius(std::initializer_list<const BlockRealization*> systems) {
  double rho = 0.0;
  for (const auto* s : systems) rho = std::max(rho, spectral_radius(*s));
  return 2.0 * (1.0 + rho);
}

inline constexpr int kDefaultSamplePoints = 16;
inline constexpr double kDefaultRelTol = 1e-8;

struct TransferComparison {
  bool equal = false;
  double max_deviation = 0.0;
  int points_used = 0;
};

/// Compares an arbitrary pointwise function of z against a reference, on the
/// sampling circle. A point where either side throws PoleError is replaced
/// by a rotated one (up to a bounded number of retries).
template <typename Lhs, typename Rhs>
TransferComparison compare_on_circle(Lhs&& lhs, Rhs&& rhs, double radius, int num_points, double rel_tol) {
  if (num_points <= 0) throw InputError("transfer comparison: num_points must be positive");
  TransferComparison out;
  const double step = 2.0 * std::numbers::pi / num_points;
  constexpr int kRetries = 8;
  for (const Complex& base : circle_points(radius, num_points)) {
    bool done = false;
    for (int attempt = 0; attempt <= kRetries && !done; ++attempt) {
      // Retries walk inside the arc between this point and the next one.
      const Complex z = base * std::polar(1.0, step * attempt / (kRetries + 2.0));
      try {
        const CMatrix x = lhs(z);
        const CMatrix y = rhs(z);
        if (x.rows() != y.rows() || x.cols() != y.cols()) {
          throw InputError("transfer comparison: shape mismatch between the two sides");
        }
        out.max_deviation = std::max(out.max_deviation, mixed_deviation(x, y));
        ++out.points_used;
        done = true;
      } catch (const PoleError&) {
      }
    }
  }
  out.equal = out.points_used > 0 && out.max_deviation <= rel_tol;
  return out;
}

/// Numerical transfer equality of two realizations with equal channel totals.
inline TransferComparison transfer_equal(const BlockRealization& r1, const BlockRealization& r2,
                                         int num_points = kDefaultSamplePoints, double rel_tol = kDefaultRelTol) {
  if (r1.m() != r2.m() || r1.p() != r2.p()) {
    throw InputError("transfer_equal: channel totals differ (" + std::to_string(r1.p()) + "x" +
                     std::to_string(r1.m()) + " vs " + std::to_string(r2.p()) + "x" + std::to_string(r2.m()) + ")");
  }
  return compare_on_circle([&](Complex z) { return eval_transfer(r1, z); },
                           [&](Complex z) { return eval_transfer(r2, z); }, sampling_radius({&r1, &r2}), num_points,
                           rel_tol);
}

}  // namespace netreal
