#pragma once

// Exact solution for synchronous driving, epsilon(t) = beta * upsilon(t).
//
// In the rescaled time tau(t) = integral of upsilon(t) dt the amplitude
// equations have the constant coefficient matrix
//   H_tau = hamiltonian_matrix(gamma, 1, beta),
// so the general solution is a superposition of four stationary-like states
//   a(tau) = sum_m s_m v_m exp(-i lambda_m tau).
// For the sech^2 pulse upsilon(t) = V sech^2(Omega t) the map is
// tau(t) = (V / Omega) tanh(Omega t), so t -> -inf and t -> +inf correspond
// to the finite values tau = -V/Omega and tau = +V/Omega.

#include "sodw/model.hpp"

#include <Eigen/Core>

#include <array>
#include <limits>

namespace sodw {

/// Characteristic values and real eigenvectors of H_tau.
///
/// Vector components follow the closed form
///   v_{1,2} = A (1, alpha_-/+, 1, -alpha_-/+),
///   v_{3,4} = A (1, eta_+/-, -1, eta_+/-),   A = 1/sqrt(2 + 2 x^2)
/// with lambda_{1,2} = -/+ sqrt(1 + beta^2 - 2 beta cos(pi gamma)) and
/// lambda_{3,4} = -/+ sqrt(1 + beta^2 + 2 beta cos(pi gamma)).
/// alpha/eta contain csc(pi gamma); when sin(pi gamma) -> 0 they diverge or
/// vanish and the vectors reduce to the eigenvectors of the two decoupled
/// 2x2 blocks. The auxiliary constants are then reported as +/-inf.
struct EigenSystem {
  std::array<double, 4> lambda{};
  std::array<Eigen::Vector4d, 4> vec{};
  double alpha_minus = 0.0;
  double alpha_plus = 0.0;
  double eta_minus = 0.0;
  double eta_plus = 0.0;
  double beta = 0.0;
  SOCoupling gamma{};
  /// |sin(pi gamma)| < kBranchTol: H_tau splits into two 2x2 blocks.
  bool decoupled = false;
};

EigenSystem eigen_sync(double beta, const SOCoupling& gamma);

/// The constant rescaled-frame matrix H_tau for given beta and gamma.
Matrix4c sync_frame_matrix(double beta, const SOCoupling& gamma);

/// tau(t) = (V/Omega) tanh(Omega t). Accepts t = +/-inf.
double tau_sech2(double V, double Omega, double t);

struct SuperpositionCoeffs {
  std::array<cplx, 4> s{};
  double tau0 = 0.0;
};

/// Solves sum_m s_m v_m exp(-i lambda_m tau0) = state0 for s by a full 4x4
/// linear solve (no orthogonality of the v_m is assumed).
SuperpositionCoeffs superposition_from_initial(const EigenSystem& eig,
                                               const AmplitudeVector& state0,
                                               double tau0);

AmplitudeVector evolve_sync(const EigenSystem& eig, const SuperpositionCoeffs& s,
                            double tau);

/// Z_sq at t -> +inf for an initial state imposed at t0 (0, finite, or -inf).
double asymptotic_imbalance_sync(const SyncSech2& protocol, const SOCoupling& gamma,
                                 const AmplitudeVector& state0, double t0, Level s,
                                 Level q);

/// Exact synchronous trajectory in physical time for the sech^2 pulse.
class SyncSolution {
 public:
  /// `t0` may be -infinity, which imposes `state0` at tau = -V/Omega.
  SyncSolution(const SyncSech2& protocol, const SOCoupling& gamma,
               const AmplitudeVector& state0, double t0);

  [[nodiscard]] AmplitudeVector at(double t) const;
  [[nodiscard]] AmplitudeVector at_tau(double tau) const;
  [[nodiscard]] const EigenSystem& eigen() const { return eig_; }
  [[nodiscard]] const SuperpositionCoeffs& coeffs() const { return coeffs_; }

 private:
  SyncSech2 protocol_;
  EigenSystem eig_;
  SuperpositionCoeffs coeffs_;
};

enum class ConditionKind { CCPC, CCPI, Neither };

std::string_view condition_name(ConditionKind kind);

struct SyncCondition {
  ConditionKind kind = ConditionKind::Neither;
  int n = -1;  // pulse order; -1 when Neither
  /// Distance of 2V/Omega from the nearest CCPC / CCPI grid point.
  double ccpc_residual = std::numeric_limits<double>::quiet_NaN();
  double ccpi_residual = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr double kDefaultConditionTol = 1e-9;

/// CCPC(n): beta = 0 and 2V/Omega = n pi (n >= 1).
/// CCPI(n): beta = 0 and 2V/Omega = (n + 1/2) pi (n >= 0).
SyncCondition classify_sync_condition(double beta, double V, double Omega,
                                      double tol = kDefaultConditionTol);

}  // namespace sodw
