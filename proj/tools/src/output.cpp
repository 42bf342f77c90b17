#include "sodw/cli/output.hpp"

#include "sodw/cli/config.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace sodw::cli {

namespace fs = std::filesystem;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

fs::path resolve_output_dir(const std::optional<std::string>& requested) {
  fs::path dir = ".";
  if (requested && !requested->empty()) {
    dir = *requested;
  } else if (const char* env = std::getenv("SODW_OUT"); env && *env) {
    dir = env;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory '" + dir.string() + "'" +
                             (ec ? ": " + ec.message() : std::string()));
  }
  const fs::path probe = dir / ".sodw_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw std::runtime_error("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
  return dir;
}

namespace {

void append_row(std::string& out, const PopulationSnapshot& s) {
  const double values[] = {s.P[0], s.P[1], s.P[2], s.P[3],
                           s.P[2] - s.P[0], s.P[2] - s.P[1], s.PL - s.PR, s.norm2};
  for (double v : values) {
    out += ',';
    out += format_number(v);
  }
}

}  // namespace

std::string trajectory_csv(const TrajectoryRun& run) {
  const TrajectoryRecord& main = run.primary_record();
  const TrajectoryRecord* overlay = run.exact && run.numeric ? &*run.numeric : nullptr;

  std::string out = "t,P1,P2,P3,P4,Z31,Z32,ZLR,norm2";
  if (overlay) out += ",P1_num,P2_num,P3_num,P4_num,Z31_num,Z32_num,ZLR_num,norm2_num";
  out += '\n';
  for (std::size_t k = 0; k < main.times.size(); ++k) {
    out += format_number(main.times[k]);
    append_row(out, main.snapshots[k]);
    if (overlay) append_row(out, overlay->snapshots[k]);
    out += '\n';
  }
  return out;
}

std::string scan_csv(const ScanResult& scan, const std::vector<std::pair<Level, Level>>& observables) {
  std::string out = "param";
  for (const auto& [s, q] : observables) out += ",Z" + observable_tag(s, q) + "_inf";
  out += ",engine\n";
  for (const ScanRow& row : scan.rows) {
    out += format_number(row.value);
    for (std::size_t i = 0; i < observables.size(); ++i) {
      out += ',';
      out += row.error.empty() && i < row.imbalances.size() ? format_number(row.imbalances[i]) : "nan";
    }
    out += ',';
    out += row.error.empty() ? std::string(engine_name(row.engine)) : "failed";
    out += '\n';
  }
  return out;
}

std::string surface_csv(const std::vector<std::array<double, 3>>& surface) {
  std::string out = "chi,epsilon,upsilon\n";
  for (const auto& p : surface) {
    out += format_number(p[0]) + ',' + format_number(p[1]) + ',' + format_number(p[2]) + '\n';
  }
  return out;
}

std::string meta_text(const MetaList& meta) {
  std::string out;
  for (const auto& [k, v] : meta) out += k + '=' + v + '\n';
  return out;
}

std::string plot_json(const PlotDescription& plot) {
  nlohmann::ordered_json j;
  j["id"] = plot.id;
  j["title"] = plot.title;
  j["x_label"] = plot.x_label;
  j["y_label"] = plot.y_label;
  j["series"] = nlohmann::ordered_json::array();
  for (const auto& s : plot.series) {
    j["series"].push_back({{"name", s.name}, {"column", s.column}, {"style", s.style}});
  }
  j["files"] = plot.files;
  return j.dump(2) + '\n';
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed while writing '" + path.string() + "'");
}

std::vector<fs::path> write_figure(const FigureDataset& fig, const fs::path& dir) {
  std::vector<fs::path> written;
  PlotDescription plot{fig.id, fig.title, fig.x_label, fig.y_label, fig.series, {}};

  const auto emit = [&](const std::string& name, const std::string& text) {
    write_file(dir / name, text);
    written.push_back(dir / name);
  };

  switch (fig.kind) {
    case FigureKind::Trajectory:
      for (const TrajectoryRun& run : fig.trajectories) {
        const std::string name =
            fig.id + (run.label.empty() ? std::string() : "_" + run.label) + "_data.csv";
        emit(name, trajectory_csv(run));
        plot.files.push_back(name);
      }
      break;
    case FigureKind::Scan:
      emit(fig.id + "_data.csv", scan_csv(fig.scan, fig.scan_spec.observables));
      plot.files.push_back(fig.id + "_data.csv");
      break;
    case FigureKind::Surface:
      emit(fig.id + "_data.csv", surface_csv(fig.surface));
      plot.files.push_back(fig.id + "_data.csv");
      break;
  }
  emit(fig.id + "_plot.json", plot_json(plot));
  emit(fig.id + "_meta.txt", meta_text(fig.meta));
  return written;
}

}  // namespace sodw::cli
