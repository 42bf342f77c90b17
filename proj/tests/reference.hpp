#pragma once

// Test-only reference computations. Nothing here calls the analytic
// engines; each routine is an independent route to the same quantity.

#include "sodw/model.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace sodw::testing {

/// exp(-i H dt) a for a constant Hermitian H (Pade matrix exponential).
inline AmplitudeVector expm_propagate(const Matrix4c& H, double dt, const AmplitudeVector& a) {
  const Matrix4c U = (cplx(0.0, -dt) * H).exp();
  return AmplitudeVector(U * a.to_eigen());
}

/// Sorted eigenvalues of a real symmetric 4x4 via a generic dense solver.
inline Eigen::Vector4d dense_eigenvalues(const Matrix4c& H) {
  const Eigen::Matrix4d R = H.real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(R);
  return es.eigenvalues();
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Uniformly random normalized state.
inline AmplitudeVector random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector4c v;
  for (int i = 0; i < 4; ++i) v(i) = cplx(g(rng), g(rng));
  v /= v.norm();
  return AmplitudeVector(v);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Values below were produced independently with scipy.linalg.expm on the
// rescaled-frame matrix, starting from a3 = 1 at tau = 0.
inline constexpr double kZ31_1d = 0.2271870304747091;
inline constexpr double kZ32_1d = -0.5456259390505817;
inline constexpr double kZ31_1e = -0.6536436208636118;
inline constexpr double kZ32_1e = 0.173178189568194;
inline constexpr double kZ31_1f = -0.2061073738537635;
inline constexpr double kZ32_1f = -0.7938926261462368;

}  // namespace sodw::testing
