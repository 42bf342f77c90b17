#pragma once

// File writers for the command-line front end. Every number is written with
// 17 significant digits so identical runs produce byte-identical files.

#include "sodw/figures.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sodw::cli {

using MetaList = std::vector<std::pair<std::string, std::string>>;

/// "%.17g"; NaN and infinities are written as nan, inf and -inf.
std::string format_number(double x);

/// Output directory: explicit flag, then $SODW_OUT, then ".". The directory
/// is created if needed; throws std::runtime_error when it is not writable.
std::filesystem::path resolve_output_dir(const std::optional<std::string>& requested);

/// `t,P1,P2,P3,P4,Z31,Z32,ZLR,norm2`, plus `*_num` oracle columns when the
/// run carries both engines. An oracle-only run fills the main columns.
std::string trajectory_csv(const TrajectoryRun& run);

/// `param,<Z..._inf per observable>,engine`.
std::string scan_csv(const ScanResult& scan, const std::vector<std::pair<Level, Level>>& observables);

std::string surface_csv(const std::vector<std::array<double, 3>>& surface);

std::string meta_text(const MetaList& meta);

struct PlotDescription {
  std::string id;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<std::string> files;
};

std::string plot_json(const PlotDescription& plot);

/// Writes `text` to `path`, throwing std::runtime_error on failure.
void write_file(const std::filesystem::path& path, const std::string& text);

/// Writes `<id>_data.csv` (or `<id>_<label>_data.csv` per initial
/// condition), `<id>_plot.json` and `<id>_meta.txt`. Returns the paths written.
std::vector<std::filesystem::path> write_figure(const FigureDataset& fig,
                                                const std::filesystem::path& dir);

}  // namespace sodw::cli
