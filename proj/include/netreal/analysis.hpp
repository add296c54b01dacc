#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "netreal/compatibility.hpp"
#include "netreal/realization.hpp"

namespace netreal {

/// Eigenvalues of a real square matrix (real Schur based).
inline Eigen::VectorXcd eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols()) throw InputError("eigenvalues: matrix is not square");
  if (a.rows() == 0) return Eigen::VectorXcd(0);
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalues: QR iteration did not converge");
  return solver.eigenvalues();
}

inline double spectral_radius(const Matrix& a) {
  const auto ev = eigenvalues(a);
  return ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
}

inline double spectral_radius(const BlockRealization& r) { return spectral_radius(r.a()); }

/// Discrete-time stability: every eigenvalue strictly inside the unit disc.
inline bool is_stable(const BlockRealization& r) { return spectral_radius(r) < 1.0; }

/// Numerical rank: singular values above max(max(rows, cols) * eps, tol) * sigma_max.
inline Index numerical_rank(const CMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double eps = std::numeric_limits<double>::epsilon();
  const double rel = std::max(static_cast<double>(std::max(m.rows(), m.cols())) * eps, tol);
  const double threshold = rel * s(0);
  return static_cast<Index>((s.array() > threshold).count());
}

enum class PbhTest { kStabilizability, kDetectability };

inline const char* to_string(PbhTest t) {
  return t == PbhTest::kStabilizability ? "stabilizability" : "detectability";
}

struct OffendingMode {
  Complex eigenvalue;
  PbhTest test = PbhTest::kStabilizability;
  Index rank_deficiency = 0;
};

/// Outcome of one of the two PBH tests.
struct PbhHalf {
  bool pass = true;
  std::vector<OffendingMode> offending_modes;
};

struct PbhReport {
  bool stabilizable = true;
  bool detectable = true;
  std::vector<OffendingMode> offending_modes;
};

inline constexpr double kDefaultPbhTol = 1e-9;

namespace detail {

// Distinct eigenvalues with |lambda| >= 1 - tol; near-duplicates (within
// sqrt(eps) relative) are tested once.
inline std::vector<Complex> unstable_modes(const Matrix& a, double tol) {
  std::vector<Complex> modes;
  const auto ev = eigenvalues(a);
  const double merge = std::sqrt(std::numeric_limits<double>::epsilon());
  for (Index k = 0; k < ev.size(); ++k) {
    const Complex lambda = ev(k);
    if (std::abs(lambda) < 1.0 - tol) continue;
    const bool seen = std::any_of(modes.begin(), modes.end(), [&](const Complex& mu) {
      return std::abs(mu - lambda) <= merge * std::max(1.0, std::abs(lambda));
    });
    if (!seen) modes.push_back(lambda);
  }
  return modes;
}

// rank [A - lambda I, B] = n at every unstable lambda.
inline PbhHalf pbh_columns(const Matrix& a, const Matrix& b, double tol, PbhTest which) {
  PbhHalf half;
  const Index n = a.rows();
  for (const Complex& lambda : unstable_modes(a, tol)) {
    CMatrix pencil(n, n + b.cols());
    pencil.leftCols(n) = a.cast<Complex>() - lambda * CMatrix::Identity(n, n);
    pencil.rightCols(b.cols()) = b.cast<Complex>();
    const Index rank = numerical_rank(pencil, tol);
    if (rank < n) half.offending_modes.push_back({lambda, which, n - rank});
  }
  half.pass = half.offending_modes.empty();
  return half;
}

}  // namespace detail

/// PBH stabilizability: rank [A - lambda I, B] = n for every eigenvalue with
/// |lambda| >= 1 - tol. tol also serves as the relative rank threshold.
inline PbhHalf pbh_stabilizable(const BlockRealization& r, double tol = kDefaultPbhTol) {
  return detail::pbh_columns(r.a(), r.b(), tol, PbhTest::kStabilizability);
}

/// Dual test on [A - lambda I; C].
inline PbhHalf pbh_detectable(const BlockRealization& r, double tol = kDefaultPbhTol) {
  return detail::pbh_columns(r.a().transpose(), r.c().transpose(), tol, PbhTest::kDetectability);
}

inline PbhReport pbh_report(const BlockRealization& r, double tol = kDefaultPbhTol) {
  PbhReport report;
  auto s = pbh_stabilizable(r, tol);
  auto d = pbh_detectable(r, tol);
  report.stabilizable = s.pass;
  report.detectable = d.pass;
  report.offending_modes = std::move(s.offending_modes);
  report.offending_modes.insert(report.offending_modes.end(), d.offending_modes.begin(), d.offending_modes.end());
  return report;
}

struct WitnessCertificate {
  bool certified = false;
  CompatibilityReport compatibility;
  PbhReport pbh;
};

/// Certifies a given realization as a witness of network realizability:
/// compatible with the graph, stabilizable and detectable. Says nothing
/// about transfer matrices that lack a supplied witness.
inline WitnessCertificate certify_witness(const BlockRealization& r, const NetworkGraph& g,
                                          DMode mode = DMode::kStrict, double tol = kDefaultPbhTol,
                                          double zero_tol = 0.0) {
  WitnessCertificate cert;
  cert.compatibility = check_compatibility(r, g, mode, zero_tol);
  cert.pbh = pbh_report(r, tol);
  cert.certified = cert.compatibility.ok() && cert.pbh.stabilizable && cert.pbh.detectable;
  return cert;
}

}  // namespace netreal
