#pragma once

// Independent numerical integration of i da/dt = H(t) a for any drive.
//
// The analytic engines never call into this module and this module never
// calls into them; it only shares hamiltonian_matrix() with them.

#include "sodw/model.hpp"

#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sodw {

enum class IntegratorMethod {
  DormandPrince54,  // adaptive embedded 5(4) pair
  ClassicalRK4,     // fixed step = max_step
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  IntegratorMethod method = IntegratorMethod::DormandPrince54;
  double t_start = 0.0;
  double t_end = 1.0;
  std::size_t max_steps = 50'000'000;
};

void validate(const IntegratorConfig& cfg);

/// Raised when the adaptive step collapses or the state stops being finite.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_good_time);
  [[nodiscard]] double last_good_time() const { return last_good_time_; }

 private:
  double last_good_time_;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<AmplitudeVector> states;
  std::vector<PopulationSnapshot> snapshots;
  ModulationProtocol protocol;
  std::string solver_id;
  double norm_drift_max = 0.0;
};

/// Integrates from cfg.t_start (where the state is `state0`) through every
/// point of `sample_grid`, landing exactly on each sample time.
TrajectoryRecord integrate(const SOCoupling& gamma, const ModulationProtocol& protocol,
                           const AmplitudeVector& state0, const IntegratorConfig& cfg,
                           std::span<const double> sample_grid);

/// Propagates a single state from t_from to t_to; either direction.
/// Only the tolerance, step and method fields of `cfg` are used.
AmplitudeVector propagate(const SOCoupling& gamma, const ModulationProtocol& protocol,
                          const AmplitudeVector& state, double t_from, double t_to,
                          const IntegratorConfig& cfg = {});

enum class PhaseMode { Strict, GlobalPhaseInvariant };

using AnalyticEvaluator = std::function<AmplitudeVector(double)>;

/// Maximum over the trajectory samples of |a_numeric - a_analytic|.
double compare_to_analytic(const TrajectoryRecord& traj, const AnalyticEvaluator& analytic,
                           PhaseMode mode = PhaseMode::Strict);

/// n uniform samples on [t0, t1], endpoints included exactly.
std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

}  // namespace sodw
