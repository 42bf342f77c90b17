#pragma once

#include "sodw/cli/config.hpp"
#include "sodw/cli/output.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sodw::cli {

/// Builds figure `id` ("all" for every figure) and writes its file set.
std::vector<std::filesystem::path> run_figure(const std::string& id,
                                              const std::filesystem::path& dir,
                                              const FigureOptions& options = {});

/// Evolves one initial state and writes `<name>_data.csv`, `<name>_plot.json`
/// and `<name>_meta.txt`. An exact engine requested where none applies is
/// refused with the violated branch condition.
std::vector<std::filesystem::path> run_evolve(const RunConfig& cfg, const std::filesystem::path& dir);

/// Scans the asymptotic imbalances over one parameter. Returns the written
/// paths; `failed_points` counts grid points that raised an error.
std::vector<std::filesystem::path> run_scan_command(const RunConfig& cfg,
                                                    const std::filesystem::path& dir,
                                                    std::size_t* failed_points = nullptr);

struct ClassifyInput {
  std::optional<double> beta, V, Omega;
  std::optional<double> epsilon, upsilon, chi;
  std::optional<double> gamma;
  double tol = kDefaultConditionTol;
};

/// Human-readable report of every condition the given parameters determine:
/// sync CCPC/CCPI with its pulse order, async spin-conserving CCPC/CCPI, the
/// spin-flip constraint residual and the coupling branch of gamma.
std::string classify_report(const ClassifyInput& in);

}  // namespace sodw::cli
