#pragma once

#include "sodw/async_solver.hpp"
#include "sodw/model.hpp"
#include "sodw/oracle.hpp"
#include "sodw/sync_solver.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sodw {

enum class Engine { SyncExact, AsyncExact, Oracle };

std::string_view engine_name(Engine engine);

/// Which exact engine (if any) applies to a (gamma, protocol) combination.
struct BranchDecision {
  std::optional<Engine> exact;  // empty when only the oracle applies
  std::string reason;           // why no exact engine applies
};

BranchDecision select_exact_engine(const SOCoupling& gamma, const ModulationProtocol& protocol);

/// An initial state and the time it is imposed at. t0 = -inf means the
/// state is prepared before the pulse; engines that cannot start at -inf
/// (async exact, oracle) impose it at -horizon instead.
struct InitialCondition {
  AmplitudeVector state;
  double t0 = 0.0;
};

/// Default truncation of +/-inf: chi*T = Omega*T = 25 (min over rates and 1).
double default_horizon(const ModulationProtocol& protocol);

/// Builds the exact evaluator t -> a(t). Throws std::invalid_argument (or
/// FlipConstraintError) naming the violated branch condition when no exact
/// engine applies.
AnalyticEvaluator exact_evaluator(const SOCoupling& gamma, const ModulationProtocol& protocol,
                                  const InitialCondition& ic, double horizon);

/// Oracle trajectory on `grid`, starting from the initial condition
/// (t0 = -inf starts at -horizon).
TrajectoryRecord oracle_trajectory(const SOCoupling& gamma, const ModulationProtocol& protocol,
                                   const InitialCondition& ic, double horizon,
                                   std::span<const double> grid,
                                   const IntegratorConfig& base = {});

enum class ScanParameter { Beta, VOverOmega, Gamma, UpsilonOverChi };

ScanParameter parse_scan_parameter(std::string_view s);
std::string_view scan_parameter_name(ScanParameter p);

enum class EnginePreference { Auto, Exact, Oracle };

struct ScanSpec {
  ScanParameter parameter = ScanParameter::Beta;
  std::vector<double> grid;
  ModulationProtocol protocol = SyncSech2{};
  double gamma = 0.0;
  InitialCondition initial{AmplitudeVector::basis(3), 0.0};
  std::vector<std::pair<Level, Level>> observables{{Level::P3, Level::P1},
                                                   {Level::P3, Level::P2}};
  /// Truncation of +inf for engines evaluated in physical time; <= 0 picks
  /// default_horizon() per grid point.
  double horizon = 0.0;
  EnginePreference engine = EnginePreference::Auto;
  IntegratorConfig integrator{};
};

/// Throws std::invalid_argument for an empty or non-monotone grid, or a
/// parameter that does not belong to the protocol family.
void validate(const ScanSpec& spec);

struct ScanRow {
  double value = 0.0;
  std::vector<double> imbalances;  // Z_sq(+inf), one per observable
  Engine engine = Engine::Oracle;
  std::string error;  // non-empty when this point failed
};

struct ScanResult {
  std::vector<ScanRow> rows;
};

/// Evaluates every grid point (concurrently); row order follows the grid.
ScanResult run_scan(const ScanSpec& spec);

/// Local maxima inside [t_lo, t_hi] whose prominence exceeds `prominence`.
/// Prominence is the rise above the higher of the two flanking minima, each
/// taken down to the nearest higher sample (or window edge) on that side.
/// Throws std::invalid_argument if the window is outside the series domain.
int count_peaks(std::span<const double> t, std::span<const double> values, double t_lo,
                double t_hi, double prominence = 0.01);

/// Peaks plus valleys, both counted with the same prominence rule.
int count_extrema(std::span<const double> t, std::span<const double> values, double t_lo,
                  double t_hi, double prominence = 0.01);

struct AsymptoticPair {
  PopulationSnapshot minus;
  PopulationSnapshot plus;
  bool settled = false;
};

/// First and last snapshots; settled when every P_m varies by less than
/// 1e-7 over the final 10% of the time span.
AsymptoticPair asymptotic_extract(const TrajectoryRecord& traj);

/// Samples an evaluator on a grid into a TrajectoryRecord.
TrajectoryRecord sample_trajectory(const AnalyticEvaluator& eval, std::span<const double> grid,
                                   const ModulationProtocol& protocol, std::string solver_id);

}  // namespace sodw
