#pragma once

// Exact solutions for asynchronous driving
//   epsilon(t) = epsilon tanh(chi t),  upsilon(t) = upsilon sech(chi t).
//
// Spin-conserving branch (sin(pi gamma) = 0): the pairs (a1, a3) and (a2, a4)
// decouple and each is solved in closed form for any drive shape.
//
// Spin-flipping branch (cos(pi gamma) = 0): the pairs (a1, a4) and (a2, a3)
// decouple; a simple closed form exists on the surface
//   chi^2 / 4 + epsilon^2 - upsilon^2 = 0.

#include "sodw/model.hpp"
#include "sodw/sync_solver.hpp"

#include <string_view>

namespace sodw {

/// Antiderivatives of upsilon(t) and epsilon(t) that vanish at t = 0:
///   phi_u = (2 upsilon / chi) atan(tanh(chi t / 2)),
///   phi_e = (epsilon / chi) ln cosh(chi t).
struct PhasePair {
  double phi_u = 0.0;
  double phi_e = 0.0;
};

PhasePair phase_integrals(const AsyncTanhSech& params, double t);

enum class PairKind {
  ConservingA,  // (a1, a3)
  ConservingB,  // (a2, a4)
  FlipC,        // (a1, a4)
  FlipD,        // (a2, a3)
};

std::string_view pair_name(PairKind kind);
bool is_conserving(PairKind kind);

/// Amplitudes of one decoupled pair, in the order listed in PairKind.
struct AmplitudePair {
  cplx first;
  cplx second;
};

/// The two complex constants fixing one pair's exact solution.
struct AsyncBranchConstants {
  PairKind kind = PairKind::ConservingA;
  cplx plus;
  cplx minus;
  double t_ref = 0.0;
  /// cos(pi gamma) on the conserving branch, sin(pi gamma) on the flip
  /// branch; -1 flips the sign of the tunneling coupling.
  double coupling_sign = 1.0;
};

AsyncBranchConstants conserving_constants(const AmplitudePair& pair0, PairKind kind,
                                          const AsyncTanhSech& params, double t_ref,
                                          double coupling_sign = 1.0);

AmplitudePair evolve_async_conserving(const AsyncBranchConstants& consts,
                                      const AsyncTanhSech& params, double t);

/// Z31 = P3 - P1 of pair A written through its constants:
/// -4 Re(A+ conj(A-) exp(2 i phi_u(t))).
double conserving_imbalance(const AsyncBranchConstants& consts,
                            const AsyncTanhSech& params, double t);

struct AsyncConservingCondition {
  ConditionKind kind = ConditionKind::Neither;
  double sin_value = 0.0;  // sin(pi upsilon / chi)
  double cos_value = 0.0;  // cos(pi upsilon / chi)
  /// Sign s of the limit Z31(+inf) = s * 4 Re(A+ conj(A-)) for CCPC and
  /// Z31(+inf) = s * 4 Im(A+ conj(A-)) for CCPI; 0 for Neither.
  int asymptote_sign = 0;
};

AsyncConservingCondition classify_async_conserving(double upsilon, double chi,
                                                   double tol = kDefaultConditionTol);

/// Residual of the flip-branch constraint chi^2/4 + epsilon^2 - upsilon^2.
double check_flip_constraint(double epsilon, double upsilon, double chi);

inline constexpr double kFlipConstraintTol = 1e-9;

/// Thrown when the flip engine is asked for parameters off the constraint surface.
class FlipConstraintError : public std::invalid_argument {
 public:
  explicit FlipConstraintError(double residual);
  [[nodiscard]] double residual() const { return residual_; }

 private:
  double residual_;
};

AsyncBranchConstants flip_constants(const AmplitudePair& pair0, PairKind kind,
                                    const AsyncTanhSech& params, double t_ref,
                                    double coupling_sign = 1.0);

AmplitudePair evolve_async_flip(const AsyncBranchConstants& consts,
                                const AsyncTanhSech& params, double t);

/// Exact trajectory of the full four-level state on either async branch.
class AsyncSolution {
 public:
  enum class Branch { Conserving, Flip };

  /// Picks the branch from gamma; throws std::invalid_argument when gamma is
  /// on neither branch and FlipConstraintError when the flip branch applies
  /// but the parameters miss the constraint surface. `t_ref` must be finite.
  AsyncSolution(const AsyncTanhSech& params, const SOCoupling& gamma,
                const AmplitudeVector& state0, double t_ref);

  [[nodiscard]] AmplitudeVector at(double t) const;
  [[nodiscard]] Branch branch() const { return branch_; }
  [[nodiscard]] const AsyncBranchConstants& first() const { return first_; }
  [[nodiscard]] const AsyncBranchConstants& second() const { return second_; }

 private:
  AsyncTanhSech params_;
  Branch branch_;
  AsyncBranchConstants first_;   // pair A or C
  AsyncBranchConstants second_;  // pair B or D
};

}  // namespace sodw
