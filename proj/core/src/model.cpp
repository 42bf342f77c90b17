#include "sodw/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sodw {

double AmplitudeVector::norm2() const {
  double s = 0.0;
  for (const auto& x : a_) s += std::norm(x);
  return s;
}

bool AmplitudeVector::is_normalized(double tol) const {
  return std::abs(norm2() - 1.0) < tol;
}

bool AmplitudeVector::is_finite() const {
  for (const auto& x : a_) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  }
  return true;
}

AmplitudeVector AmplitudeVector::basis(int level) {
  if (level < 1 || level > 4) {
    throw std::invalid_argument("basis level must be in 1..4, got " +
                                std::to_string(level));
  }
  AmplitudeVector v;
  v.a_[static_cast<std::size_t>(level - 1)] = 1.0;
  return v;
}

double distance(const AmplitudeVector& x, const AmplitudeVector& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += std::norm(x[i] - y[i]);
  return std::sqrt(s);
}

namespace {

// Returns (sin(pi x), cos(pi x)) after exact reduction to |f| <= 1/4.
std::pair<double, double> sincos_pi(double x) {
  const double r = std::remainder(x, 2.0);  // exact, in [-1, 1]
  const double n = std::nearbyint(2.0 * r);
  const double f = r - 0.5 * n;  // exact, in [-1/4, 1/4]
  const double s = std::sin(std::numbers::pi * f);
  const double c = std::cos(std::numbers::pi * f);
  switch (((static_cast<int>(n) % 4) + 4) % 4) {
    case 0: return {s, c};
    case 1: return {c, -s};
    case 2: return {-s, -c};
    default: return {-c, s};
  }
}

}  // namespace

double sin_pi(double x) { return sincos_pi(x).first; }
double cos_pi(double x) { return sincos_pi(x).second; }

SOCoupling::SOCoupling(double gamma) : gamma_(gamma) {
  if (!std::isfinite(gamma)) {
    throw std::invalid_argument("SO coupling strength gamma must be finite");
  }
  std::tie(sin_pg_, cos_pg_) = sincos_pi(gamma);
}

bool SOCoupling::spin_conserving(double tol) const { return std::abs(sin_pg_) < tol; }
bool SOCoupling::spin_flipping(double tol) const { return std::abs(cos_pg_) < tol; }

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sech(double x) {
  // cosh overflows to inf beyond |x| ~ 710, which correctly yields 0.
  return 1.0 / std::cosh(x);
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("non-finite parameter: ") + what);
  }
}

}  // namespace

void validate(const ModulationProtocol& protocol) {
  std::visit(overloaded{
                 [](const SyncSech2& p) {
                   require_finite(p.beta, "beta");
                   require_finite(p.V, "V");
                   require_finite(p.Omega, "Omega");
                   if (!(p.Omega > 0.0)) {
                     throw std::invalid_argument("inverse pulse width Omega must be > 0");
                   }
                 },
                 [](const AsyncTanhSech& p) {
                   require_finite(p.epsilon, "epsilon");
                   require_finite(p.upsilon, "upsilon");
                   require_finite(p.chi, "chi");
                   if (!(p.chi > 0.0)) {
                     throw std::invalid_argument("inverse width chi must be > 0");
                   }
                 },
                 [](const CustomDrive& p) {
                   if (!p.upsilon || !p.epsilon) {
                     throw std::invalid_argument("custom drive needs both upsilon(t) and epsilon(t)");
                   }
                 },
             },
             protocol);
}

double upsilon_at(const ModulationProtocol& protocol, double t) {
  return std::visit(overloaded{
                        [t](const SyncSech2& p) {
                          const double s = sech(p.Omega * t);
                          return p.V * s * s;
                        },
                        [t](const AsyncTanhSech& p) { return p.upsilon * sech(p.chi * t); },
                        [t](const CustomDrive& p) { return p.upsilon(t); },
                    },
                    protocol);
}

double epsilon_at(const ModulationProtocol& protocol, double t) {
  return std::visit(overloaded{
                        [t](const SyncSech2& p) {
                          const double s = sech(p.Omega * t);
                          return p.beta * p.V * s * s;
                        },
                        [t](const AsyncTanhSech& p) { return p.epsilon * std::tanh(p.chi * t); },
                        [t](const CustomDrive& p) { return p.epsilon(t); },
                    },
                    protocol);
}

std::string protocol_name(const ModulationProtocol& protocol) {
  return std::visit(overloaded{
                        [](const SyncSech2&) { return std::string("sync-sech2"); },
                        [](const AsyncTanhSech&) { return std::string("async-tanh-sech"); },
                        [](const CustomDrive& p) { return p.label; },
                    },
                    protocol);
}

Matrix4c hamiltonian_matrix(const SOCoupling& gamma, double upsilon_val,
                            double epsilon_val) {
  require_finite(upsilon_val, "upsilon");
  require_finite(epsilon_val, "epsilon");
  const double c = upsilon_val * gamma.cos_pg();
  const double s = upsilon_val * gamma.sin_pg();
  Matrix4c H = Matrix4c::Zero();
  H(0, 0) = epsilon_val;
  H(1, 1) = -epsilon_val;
  H(2, 2) = epsilon_val;
  H(3, 3) = -epsilon_val;
  H(0, 2) = H(2, 0) = -c;
  H(0, 3) = H(3, 0) = -s;
  H(1, 2) = H(2, 1) = s;
  H(1, 3) = H(3, 1) = -c;
  return H;
}

PopulationSnapshot populations(const AmplitudeVector& state, double t) {
  PopulationSnapshot snap;
  snap.t = t;
  for (std::size_t m = 0; m < 4; ++m) snap.P[m] = std::norm(state[m]);
  snap.PR = snap.P[0] + snap.P[1];
  snap.PL = snap.P[2] + snap.P[3];
  snap.norm2 = snap.PR + snap.PL;
  return snap;
}

Level parse_level(std::string_view s) {
  if (s == "1") return Level::P1;
  if (s == "2") return Level::P2;
  if (s == "3") return Level::P3;
  if (s == "4") return Level::P4;
  if (s == "L" || s == "l") return Level::L;
  if (s == "R" || s == "r") return Level::R;
  throw std::invalid_argument("unknown population index '" + std::string(s) +
                              "' (expected 1..4, L or R)");
}

std::string_view level_name(Level level) {
  switch (level) {
    case Level::P1: return "1";
    case Level::P2: return "2";
    case Level::P3: return "3";
    case Level::P4: return "4";
    case Level::L: return "L";
    case Level::R: return "R";
  }
  return "?";
}

double population_of(const PopulationSnapshot& snap, Level level) {
  switch (level) {
    case Level::P1: return snap.P[0];
    case Level::P2: return snap.P[1];
    case Level::P3: return snap.P[2];
    case Level::P4: return snap.P[3];
    case Level::L: return snap.PL;
    case Level::R: return snap.PR;
  }
  return 0.0;
}

double imbalance(const PopulationSnapshot& snap, Level s, Level q) {
  if (s == q) {
    throw std::invalid_argument("imbalance needs two distinct populations");
  }
  return population_of(snap, s) - population_of(snap, q);
}

}  // namespace sodw
