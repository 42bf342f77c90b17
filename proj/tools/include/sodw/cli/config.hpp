#pragma once

// Run configuration for the command-line front end: a flat key=value file,
// overridden key by key from command-line flags.

#include "sodw/figures.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sodw::cli {

/// Evaluates a numeric expression: numbers, pi, inf, sqrt(...), + - * / and
/// parentheses. Throws std::invalid_argument on malformed input.
double evaluate(std::string_view text);

/// Parses "re,im" (or a bare real part) into a complex amplitude.
cplx parse_amplitude(std::string_view text);

/// Ordered key/value pairs; later entries override earlier ones.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Reads a key=value file. Blank lines and lines starting with '#' are
/// skipped; unknown keys are rejected with their line number.
KeyValues read_config_file(const std::filesystem::path& path);
KeyValues parse_config_text(std::string_view text, std::string_view origin = "<text>");

/// Keys understood in config files and as --key flags.
const std::vector<std::string>& known_keys();

struct RunConfig {
  std::string name;  // output file stem
  double gamma = 0.0;
  ModulationProtocol protocol = SyncSech2{0.0, 1.5707963267948966, 1.0};
  AmplitudeVector initial = AmplitudeVector::basis(3);
  double t0 = 0.0;         // -inf allowed
  double horizon = 0.0;    // <= 0: default_horizon(protocol)
  std::optional<double> t_min;  // first sample; defaults to t0 or -T
  std::size_t samples = 2001;
  EngineChoice engine = EngineChoice::Auto;
  IntegratorConfig integrator{};
  double condition_tol = kDefaultConditionTol;

  ScanParameter scan_parameter = ScanParameter::Beta;
  double scan_min = 0.0;
  double scan_max = 1.0;
  std::size_t scan_points = 201;
  std::vector<std::pair<Level, Level>> observables{{Level::P3, Level::P1},
                                                   {Level::P3, Level::P2}};
};

/// Builds a RunConfig from merged key/values. Rejects non-normalized initial
/// amplitudes (|norm^2 - 1| > 1e-6) and invalid protocols.
RunConfig build_run_config(const KeyValues& kv, std::string_view default_name);

/// Column suffix for an imbalance observable, e.g. (P3, P1) -> "31", (L, R) -> "LR".
std::string observable_tag(Level s, Level q);

/// Parses "31", "LR", "P4-P1" style observable lists separated by commas.
std::vector<std::pair<Level, Level>> parse_observables(std::string_view text);

}  // namespace sodw::cli
