#include "sodw/sync_solver.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sodw {

namespace {

// An eigenvector written as the ratio x = p/q of its second to first
// component. Keeping p and q separate avoids dividing by sin(pi gamma).
struct Ratio {
  double p;
  double q;
};

Ratio canonical(Ratio r) {
  // First component non-negative, matching A = 1/sqrt(2 + 2x^2) > 0.
  if (r.q < 0.0 || (r.q == 0.0 && r.p < 0.0)) return {-r.p, -r.q};
  return r;
}

double ratio_value(Ratio r) { return r.p / r.q; }

// Roots x_+/- = (d +/- sqrt(d^2 + s^2)) / s, each written without the
// cancellation that the direct formula suffers when d^2 >> s^2.
std::pair<Ratio, Ratio> ratio_roots(double d, double s, double r) {
  Ratio plus{};
  Ratio minus{};
  if (d >= 0.0) {
    plus = {d + r, s};
    minus = {-s, r + d};
  } else {
    plus = {s, r - d};
    minus = {d - r, s};
  }
  return {canonical(plus), canonical(minus)};
}

Eigen::Vector4d alpha_vector(Ratio x) {
  const double n = std::sqrt(2.0 * (x.p * x.p + x.q * x.q));
  return Eigen::Vector4d(x.q, x.p, x.q, -x.p) / n;
}

Eigen::Vector4d eta_vector(Ratio x) {
  const double n = std::sqrt(2.0 * (x.p * x.p + x.q * x.q));
  return Eigen::Vector4d(x.q, x.p, -x.q, x.p) / n;
}

}  // namespace

Matrix4c sync_frame_matrix(double beta, const SOCoupling& gamma) {
  return hamiltonian_matrix(gamma, 1.0, beta);
}

EigenSystem eigen_sync(double beta, const SOCoupling& gamma) {
  if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");

  EigenSystem eig;
  eig.beta = beta;
  eig.gamma = gamma;
  eig.decoupled = gamma.spin_conserving();

  const double s = gamma.sin_pg();
  const double c = gamma.cos_pg();
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

  // lambda_{1,2}: r_a^2 = 1 + beta^2 - 2 beta cos(pi gamma) = (c - beta)^2 + s^2
  const double d = c - beta;
  const double r_a = std::hypot(d, s);
  eig.lambda[0] = -r_a;
  eig.lambda[1] = r_a;
  if (r_a == 0.0) {
    // beta = cos(pi gamma) = +/-1: the whole {1,2} pair sits at lambda = 0.
    eig.vec[0] = Eigen::Vector4d(inv_sqrt2, 0.0, inv_sqrt2, 0.0);
    eig.vec[1] = Eigen::Vector4d(0.0, inv_sqrt2, 0.0, -inv_sqrt2);
    eig.alpha_minus = 0.0;
    eig.alpha_plus = std::numeric_limits<double>::infinity();
  } else {
    const auto [plus, minus] = ratio_roots(d, s, r_a);
    eig.vec[0] = alpha_vector(minus);
    eig.vec[1] = alpha_vector(plus);
    eig.alpha_minus = ratio_value(minus);
    eig.alpha_plus = ratio_value(plus);
  }

  // lambda_{3,4}: r_e^2 = 1 + beta^2 + 2 beta cos(pi gamma) = (beta + c)^2 + s^2
  const double e = beta + c;
  const double r_e = std::hypot(e, s);
  eig.lambda[2] = -r_e;
  eig.lambda[3] = r_e;
  if (r_e == 0.0) {
    eig.vec[2] = Eigen::Vector4d(inv_sqrt2, 0.0, -inv_sqrt2, 0.0);
    eig.vec[3] = Eigen::Vector4d(0.0, inv_sqrt2, 0.0, inv_sqrt2);
    eig.eta_plus = 0.0;
    eig.eta_minus = std::numeric_limits<double>::infinity();
  } else {
    const auto [plus, minus] = ratio_roots(e, s, r_e);
    eig.vec[2] = eta_vector(plus);
    eig.vec[3] = eta_vector(minus);
    eig.eta_plus = ratio_value(plus);
    eig.eta_minus = ratio_value(minus);
  }
  return eig;
}

double tau_sech2(double V, double Omega, double t) {
  if (!(Omega > 0.0)) throw std::invalid_argument("Omega must be > 0");
  return (V / Omega) * std::tanh(Omega * t);
}

SuperpositionCoeffs superposition_from_initial(const EigenSystem& eig,
                                               const AmplitudeVector& state0,
                                               double tau0) {
  if (!std::isfinite(tau0)) throw std::invalid_argument("tau0 must be finite");
  Matrix4c M;
  for (int m = 0; m < 4; ++m) {
    const cplx phase = std::polar(1.0, -eig.lambda[static_cast<std::size_t>(m)] * tau0);
    for (int k = 0; k < 4; ++k) {
      M(k, m) = eig.vec[static_cast<std::size_t>(m)](k) * phase;
    }
  }
  const Eigen::FullPivLU<Matrix4c> lu(M);
  if (lu.rank() < 4) {
    throw std::runtime_error("internal error: synchronous eigenbasis is singular");
  }
  const Vector4c x = lu.solve(state0.to_eigen());
  SuperpositionCoeffs out;
  out.tau0 = tau0;
  for (std::size_t m = 0; m < 4; ++m) out.s[m] = x(static_cast<int>(m));
  return out;
}

AmplitudeVector evolve_sync(const EigenSystem& eig, const SuperpositionCoeffs& s,
                            double tau) {
  Vector4c a = Vector4c::Zero();
  for (std::size_t m = 0; m < 4; ++m) {
    const cplx w = s.s[m] * std::polar(1.0, -eig.lambda[m] * tau);
    a += w * eig.vec[m].cast<cplx>();
  }
  return AmplitudeVector(a);
}

SyncSolution::SyncSolution(const SyncSech2& protocol, const SOCoupling& gamma,
                           const AmplitudeVector& state0, double t0)
    : protocol_(protocol), eig_(eigen_sync(protocol.beta, gamma)) {
  validate(ModulationProtocol{protocol});
  if (std::isnan(t0) || t0 == std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("initial time must be finite or -inf");
  }
  coeffs_ = superposition_from_initial(eig_, state0,
                                       tau_sech2(protocol.V, protocol.Omega, t0));
}

AmplitudeVector SyncSolution::at(double t) const {
  return evolve_sync(eig_, coeffs_, tau_sech2(protocol_.V, protocol_.Omega, t));
}

AmplitudeVector SyncSolution::at_tau(double tau) const {
  return evolve_sync(eig_, coeffs_, tau);
}

double asymptotic_imbalance_sync(const SyncSech2& protocol, const SOCoupling& gamma,
                                 const AmplitudeVector& state0, double t0, Level s,
                                 Level q) {
  const SyncSolution sol(protocol, gamma, state0, t0);
  const double inf = std::numeric_limits<double>::infinity();
  return imbalance(populations(sol.at(inf), inf), s, q);
}

std::string_view condition_name(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::CCPC: return "CCPC";
    case ConditionKind::CCPI: return "CCPI";
    case ConditionKind::Neither: return "Neither";
  }
  return "?";
}

SyncCondition classify_sync_condition(double beta, double V, double Omega, double tol) {
  if (!(Omega > 0.0)) throw std::invalid_argument("Omega must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  constexpr double pi = std::numbers::pi;
  const double x = 2.0 * V / Omega;

  SyncCondition out;
  const double n_pc = std::max(1.0, std::nearbyint(x / pi));
  out.ccpc_residual = std::abs(x - n_pc * pi);
  const double n_pi = std::max(0.0, std::nearbyint(x / pi - 0.5));
  out.ccpi_residual = std::abs(x - (n_pi + 0.5) * pi);

  if (std::abs(beta) > tol) return out;
  if (out.ccpc_residual <= tol) {
    out.kind = ConditionKind::CCPC;
    out.n = static_cast<int>(n_pc);
  } else if (out.ccpi_residual <= tol) {
    out.kind = ConditionKind::CCPI;
    out.n = static_cast<int>(n_pi);
  }
  return out;
}

}  // namespace sodw
