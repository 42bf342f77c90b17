#include "sodw/async_solver.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sodw {

namespace {

constexpr double kAsymptoticArg = 40.0;

void require_finite_time(double t) {
  if (!std::isfinite(t)) {
    throw std::invalid_argument("reference time must be finite; use t = -T for -inf");
  }
}

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

// sqrt(sech(x)) * exp(k x) for k = +/-1/2, with the growth of exp(k x)
// cancelled before exponentiation.
double sqrt_sech_exp(double x, double k) {
  const double ax = std::abs(x);
  return std::numbers::sqrt2 * std::exp(k * x - 0.5 * ax) /
         std::sqrt(1.0 + std::exp(-2.0 * ax));
}

cplx expi(double phase) { return std::polar(1.0, phase); }

}  // namespace

PhasePair phase_integrals(const AsyncTanhSech& params, double t) {
  if (!(params.chi > 0.0)) throw std::invalid_argument("chi must be > 0");
  const double x = params.chi * t;
  PhasePair out;
  if (std::abs(x) > kAsymptoticArg) {
    const double s = t < 0.0 ? -1.0 : 1.0;
    out.phi_u = s * std::numbers::pi * params.upsilon / (2.0 * params.chi);
    out.phi_e = params.epsilon * (std::abs(t) - std::numbers::ln2 / params.chi);
  } else {
    out.phi_u = 2.0 * params.upsilon / params.chi * std::atan(std::tanh(0.5 * x));
    out.phi_e = params.epsilon / params.chi * std::log(std::cosh(x));
  }
  return out;
}

std::string_view pair_name(PairKind kind) {
  switch (kind) {
    case PairKind::ConservingA: return "A(a1,a3)";
    case PairKind::ConservingB: return "B(a2,a4)";
    case PairKind::FlipC: return "C(a1,a4)";
    case PairKind::FlipD: return "D(a2,a3)";
  }
  return "?";
}

bool is_conserving(PairKind kind) {
  return kind == PairKind::ConservingA || kind == PairKind::ConservingB;
}

namespace {

// Phase factors multiplying the plus and minus constants of a conserving pair.
std::pair<cplx, cplx> conserving_phases(PairKind kind, const AsyncTanhSech& params,
                                        double t, double sign) {
  const PhasePair ph = phase_integrals(params, t);
  const double u = sign * ph.phi_u;
  if (kind == PairKind::ConservingA) {
    return {expi(u - ph.phi_e), expi(-(u + ph.phi_e))};
  }
  return {expi(u + ph.phi_e), expi(-(u - ph.phi_e))};
}

}  // namespace

AsyncBranchConstants conserving_constants(const AmplitudePair& pair0, PairKind kind,
                                          const AsyncTanhSech& params, double t_ref,
                                          double coupling_sign) {
  if (!is_conserving(kind)) {
    throw std::invalid_argument("conserving_constants needs pair A or B");
  }
  require_finite_time(t_ref);
  const auto [e_plus, e_minus] = conserving_phases(kind, params, t_ref, coupling_sign);
  AsyncBranchConstants c;
  c.kind = kind;
  c.t_ref = t_ref;
  c.coupling_sign = coupling_sign;
  c.plus = 0.5 * (pair0.first + pair0.second) / e_plus;
  c.minus = 0.5 * (pair0.first - pair0.second) / e_minus;
  return c;
}

AmplitudePair evolve_async_conserving(const AsyncBranchConstants& consts,
                                      const AsyncTanhSech& params, double t) {
  if (!is_conserving(consts.kind)) {
    throw std::invalid_argument("evolve_async_conserving needs pair A or B constants");
  }
  const auto [e_plus, e_minus] =
      conserving_phases(consts.kind, params, t, consts.coupling_sign);
  const cplx p = consts.plus * e_plus;
  const cplx m = consts.minus * e_minus;
  return {p + m, p - m};
}

double conserving_imbalance(const AsyncBranchConstants& consts,
                            const AsyncTanhSech& params, double t) {
  const double u = consts.coupling_sign * phase_integrals(params, t).phi_u;
  return -4.0 * std::real(consts.plus * std::conj(consts.minus) * expi(2.0 * u));
}

AsyncConservingCondition classify_async_conserving(double upsilon, double chi,
                                                   double tol) {
  if (!(chi > 0.0)) throw std::invalid_argument("chi must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  AsyncConservingCondition out;
  out.sin_value = sin_pi(upsilon / chi);
  out.cos_value = cos_pi(upsilon / chi);
  if (std::abs(out.sin_value) <= tol) {
    out.kind = ConditionKind::CCPC;
    out.asymptote_sign = -sign_of(out.cos_value);
  } else if (std::abs(out.cos_value) <= tol) {
    out.kind = ConditionKind::CCPI;
    out.asymptote_sign = sign_of(out.sin_value);
  }
  return out;
}

double check_flip_constraint(double epsilon, double upsilon, double chi) {
  return 0.25 * chi * chi + epsilon * epsilon - upsilon * upsilon;
}

namespace {

std::string flip_message(double residual) {
  std::ostringstream os;
  os.precision(17);
  os << "spin-flip exact solution requires chi^2/4 + epsilon^2 - upsilon^2 = 0; residual "
     << residual << " exceeds " << kFlipConstraintTol
     << " (use the numerical oracle for these parameters)";
  return os.str();
}

void require_flip_surface(const AsyncTanhSech& params) {
  const double r = check_flip_constraint(params.epsilon, params.upsilon, params.chi);
  if (!(std::abs(r) <= kFlipConstraintTol)) throw FlipConstraintError(r);
}

// Entries of the 2x2 map (plus, minus) -> (first, second) for a flip pair.
struct FlipBasis {
  cplx m11, m12, m21, m22;
};

FlipBasis flip_basis(PairKind kind, const AsyncTanhSech& params, double t,
                     double sign) {
  const double x = params.chi * t;
  const double s_plus = sqrt_sech_exp(x, 0.5);
  const double s_minus = sqrt_sech_exp(x, -0.5);
  const cplx e_plus = expi(params.epsilon * t);
  const cplx e_minus = std::conj(e_plus);
  const double two_u = 2.0 * sign * params.upsilon;
  if (kind == PairKind::FlipC) {
    // a1 = kappa (C+ S- e+ - C- S+ e-),  a4 = C+ S+ e+ + C- S- e-
    const cplx kappa = cplx(2.0 * params.epsilon, -params.chi) / two_u;
    return {kappa * s_minus * e_plus, -kappa * s_plus * e_minus, s_plus * e_plus,
            s_minus * e_minus};
  }
  // a2 = kappa (D+ S+ e+ - D- S- e-),  a3 = D+ S- e+ + D- S+ e-
  const cplx kappa = cplx(-2.0 * params.epsilon, -params.chi) / two_u;
  return {kappa * s_plus * e_plus, -kappa * s_minus * e_minus, s_minus * e_plus,
          s_plus * e_minus};
}

}  // namespace

FlipConstraintError::FlipConstraintError(double residual)
    : std::invalid_argument(flip_message(residual)), residual_(residual) {}

AsyncBranchConstants flip_constants(const AmplitudePair& pair0, PairKind kind,
                                    const AsyncTanhSech& params, double t_ref,
                                    double coupling_sign) {
  if (is_conserving(kind)) throw std::invalid_argument("flip_constants needs pair C or D");
  require_finite_time(t_ref);
  require_flip_surface(params);
  const FlipBasis b = flip_basis(kind, params, t_ref, coupling_sign);
  const cplx det = b.m11 * b.m22 - b.m12 * b.m21;
  if (std::abs(det) == 0.0 || !std::isfinite(std::abs(det))) {
    throw std::runtime_error("internal error: singular spin-flip constant system");
  }
  AsyncBranchConstants c;
  c.kind = kind;
  c.t_ref = t_ref;
  c.coupling_sign = coupling_sign;
  c.plus = (pair0.first * b.m22 - b.m12 * pair0.second) / det;
  c.minus = (b.m11 * pair0.second - b.m21 * pair0.first) / det;
  return c;
}

AmplitudePair evolve_async_flip(const AsyncBranchConstants& consts,
                                const AsyncTanhSech& params, double t) {
  if (is_conserving(consts.kind)) {
    throw std::invalid_argument("evolve_async_flip needs pair C or D constants");
  }
  require_flip_surface(params);
  const FlipBasis b = flip_basis(consts.kind, params, t, consts.coupling_sign);
  return {b.m11 * consts.plus + b.m12 * consts.minus,
          b.m21 * consts.plus + b.m22 * consts.minus};
}

AsyncSolution::AsyncSolution(const AsyncTanhSech& params, const SOCoupling& gamma,
                             const AmplitudeVector& state0, double t_ref)
    : params_(params) {
  validate(ModulationProtocol{params});
  require_finite_time(t_ref);
  if (gamma.spin_conserving()) {
    branch_ = Branch::Conserving;
    const double sign = sign_of(gamma.cos_pg());
    first_ = conserving_constants({state0[0], state0[2]}, PairKind::ConservingA, params,
                                  t_ref, sign);
    second_ = conserving_constants({state0[1], state0[3]}, PairKind::ConservingB, params,
                                   t_ref, sign);
  } else if (gamma.spin_flipping()) {
    branch_ = Branch::Flip;
    const double sign = sign_of(gamma.sin_pg());
    first_ = flip_constants({state0[0], state0[3]}, PairKind::FlipC, params, t_ref, sign);
    second_ = flip_constants({state0[1], state0[2]}, PairKind::FlipD, params, t_ref, sign);
  } else {
    std::ostringstream os;
    os << "asynchronous exact solutions need sin(pi gamma) = 0 or cos(pi gamma) = 0; gamma = "
       << gamma.gamma() << " gives sin = " << gamma.sin_pg() << ", cos = " << gamma.cos_pg();
    throw std::invalid_argument(os.str());
  }
}

AmplitudeVector AsyncSolution::at(double t) const {
  if (branch_ == Branch::Conserving) {
    const AmplitudePair a = evolve_async_conserving(first_, params_, t);
    const AmplitudePair b = evolve_async_conserving(second_, params_, t);
    return {a.first, b.first, a.second, b.second};
  }
  const AmplitudePair c = evolve_async_flip(first_, params_, t);
  const AmplitudePair d = evolve_async_flip(second_, params_, t);
  return {c.first, d.first, d.second, c.second};
}

}  // namespace sodw
