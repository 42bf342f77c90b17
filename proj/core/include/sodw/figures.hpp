#pragma once

// Figure-reproduction datasets: parameters, initial conditions and the
// computed series for each reproducible plot. Serialization is left to the
// caller (see tools/).

#include "sodw/analysis.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sodw {

enum class EngineChoice { Auto, Exact, Oracle, Both };

EngineChoice parse_engine_choice(std::string_view s);

/// One computed trajectory, exact and/or numerical.
struct TrajectoryRun {
  std::string label;
  InitialCondition initial;
  std::optional<TrajectoryRecord> exact;
  std::optional<TrajectoryRecord> numeric;
  /// max_t |a_exact - a_numeric| when both are present, NaN otherwise.
  double max_deviation = std::numeric_limits<double>::quiet_NaN();
  Engine primary = Engine::Oracle;

  [[nodiscard]] const TrajectoryRecord& primary_record() const {
    return exact ? *exact : *numeric;
  }
};

/// Runs one trajectory on `grid`. `Exact` and `Both` throw when no exact
/// engine applies; the message names the violated branch condition.
TrajectoryRun run_trajectory(const SOCoupling& gamma, const ModulationProtocol& protocol,
                             const InitialCondition& ic, std::span<const double> grid,
                             EngineChoice choice, double horizon,
                             const IntegratorConfig& integrator = {});

struct FigureOptions {
  std::size_t samples = 2001;
  std::size_t scan_points = 201;
  double horizon = 0.0;  // <= 0: default_horizon(protocol)
  IntegratorConfig integrator{};
};

enum class FigureKind { Trajectory, Scan, Surface };

struct PlotSeries {
  std::string name;
  std::string column;  // CSV column or expression such as "P4-P1"
  std::string style;   // "line" or "markers"
};

struct FigureDataset {
  std::string id;
  FigureKind kind = FigureKind::Trajectory;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;

  SOCoupling gamma{};
  ModulationProtocol protocol = SyncSech2{};
  double horizon = 0.0;

  std::vector<TrajectoryRun> trajectories;  // Trajectory
  ScanSpec scan_spec;                       // Scan
  ScanResult scan;                          // Scan
  std::vector<std::array<double, 3>> surface;  // Surface: (chi, epsilon, upsilon)

  /// Ordered key/value metadata sufficient to re-run the figure.
  std::vector<std::pair<std::string, std::string>> meta;
};

/// Reproducible figure ids, in display order.
const std::vector<std::string>& figure_ids();

/// Throws std::invalid_argument for an unknown id.
FigureDataset build_figure(std::string_view id, const FigureOptions& options = {});

/// Caption initial conditions of the multi-curve figures (2b, 3a/3b, 3d).
std::vector<AmplitudeVector> caption_states_2b();
std::vector<AmplitudeVector> caption_states_3ab();
std::vector<AmplitudeVector> caption_states_3d();
AmplitudeVector caption_state_2a();

}  // namespace sodw
