#include "sodw/cli/commands.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>

namespace sodw::cli {

namespace fs = std::filesystem;

std::vector<fs::path> run_figure(const std::string& id, const fs::path& dir,
                                 const FigureOptions& options) {
  std::vector<fs::path> written;
  const auto one = [&](std::string_view fid) {
    const auto files = write_figure(build_figure(fid, options), dir);
    written.insert(written.end(), files.begin(), files.end());
  };
  if (id == "all") {
    for (const auto& fid : figure_ids()) one(fid);
  } else {
    one(id);
  }
  return written;
}

namespace {

double horizon_of(const RunConfig& cfg) {
  return cfg.horizon > 0.0 ? cfg.horizon : default_horizon(cfg.protocol);
}

void describe(MetaList& meta, const RunConfig& cfg) {
  meta.emplace_back("gamma", format_number(cfg.gamma));
  if (const auto* s = std::get_if<SyncSech2>(&cfg.protocol)) {
    meta.emplace_back("protocol", "sync");
    meta.emplace_back("beta", format_number(s->beta));
    meta.emplace_back("V", format_number(s->V));
    meta.emplace_back("Omega", format_number(s->Omega));
  } else if (const auto* a = std::get_if<AsyncTanhSech>(&cfg.protocol)) {
    meta.emplace_back("protocol", "async");
    meta.emplace_back("epsilon", format_number(a->epsilon));
    meta.emplace_back("upsilon", format_number(a->upsilon));
    meta.emplace_back("chi", format_number(a->chi));
  }
  for (std::size_t m = 0; m < 4; ++m) {
    const cplx a = cfg.initial[m];
    meta.emplace_back("a" + std::to_string(m + 1),
                      format_number(a.real()) + "," + format_number(a.imag()));
  }
  meta.emplace_back("t0", std::isinf(cfg.t0) ? "-inf" : format_number(cfg.t0));
  meta.emplace_back("T", format_number(horizon_of(cfg)));
}

void describe_integrator(MetaList& meta, const IntegratorConfig& ic) {
  meta.emplace_back("method", ic.method == IntegratorMethod::DormandPrince54 ? "dopri54" : "rk4");
  meta.emplace_back("rel_tol", format_number(ic.rel_tol));
  meta.emplace_back("abs_tol", format_number(ic.abs_tol));
  meta.emplace_back("max_step", format_number(ic.max_step));
  meta.emplace_back("normalization_tol", format_number(kNormalizedTol));
  meta.emplace_back("branch_tol", format_number(kBranchTol));
}

std::string_view choice_name(EngineChoice c) {
  switch (c) {
    case EngineChoice::Auto: return "auto";
    case EngineChoice::Exact: return "exact";
    case EngineChoice::Oracle: return "oracle";
    case EngineChoice::Both: return "both";
  }
  return "auto";
}

}  // namespace

std::vector<fs::path> run_evolve(const RunConfig& cfg, const fs::path& dir) {
  const SOCoupling gamma(cfg.gamma);
  const double T = horizon_of(cfg);
  const double t_lo = cfg.t_min ? *cfg.t_min : (std::isinf(cfg.t0) ? -T : cfg.t0);
  if (!(t_lo < T)) {
    throw std::invalid_argument("sample window [" + format_number(t_lo) + ", " + format_number(T) +
                                "] is empty; raise T or lower t_min");
  }
  if (cfg.engine == EngineChoice::Exact || cfg.engine == EngineChoice::Both) {
    const BranchDecision d = select_exact_engine(gamma, cfg.protocol);
    if (!d.exact) throw std::invalid_argument("exact engine refused: " + d.reason);
  }
  const std::vector<double> grid = uniform_grid(t_lo, T, cfg.samples);
  const TrajectoryRun run = run_trajectory(gamma, cfg.protocol, {cfg.initial, cfg.t0}, grid,
                                           cfg.engine, T, cfg.integrator);

  MetaList meta{{"command", "evolve"}, {"name", cfg.name}};
  describe(meta, cfg);
  meta.emplace_back("t_min", format_number(t_lo));
  meta.emplace_back("samples", std::to_string(cfg.samples));
  meta.emplace_back("engine_requested", std::string(choice_name(cfg.engine)));
  meta.emplace_back("engine", run.exact ? std::string(engine_name(run.primary)) : "oracle");
  if (run.numeric) meta.emplace_back("oracle", run.numeric->solver_id);
  describe_integrator(meta, cfg.integrator);
  if (run.exact && run.numeric) meta.emplace_back("max_deviation", format_number(run.max_deviation));
  if (run.numeric) meta.emplace_back("norm_drift_max", format_number(run.numeric->norm_drift_max));

  std::vector<PlotSeries> series{{"P1", "P1", "line"}, {"P2", "P2", "line"},
                                 {"P3", "P3", "line"}, {"P4", "P4", "line"}};
  if (run.exact && run.numeric) {
    for (const char* p : {"P1", "P2", "P3", "P4"}) {
      series.push_back({std::string(p) + " numeric", std::string(p) + "_num", "markers"});
    }
  }
  const std::string data = cfg.name + "_data.csv";
  const PlotDescription plot{cfg.name, "Populations of " + cfg.name, "t", "population", series, {data}};

  std::vector<fs::path> written{dir / data, dir / (cfg.name + "_plot.json"),
                                dir / (cfg.name + "_meta.txt")};
  write_file(written[0], trajectory_csv(run));
  write_file(written[1], plot_json(plot));
  write_file(written[2], meta_text(meta));
  return written;
}

std::vector<fs::path> run_scan_command(const RunConfig& cfg, const fs::path& dir,
                                       std::size_t* failed_points) {
  ScanSpec spec;
  spec.parameter = cfg.scan_parameter;
  spec.grid = uniform_grid(cfg.scan_min, cfg.scan_max, cfg.scan_points);
  spec.protocol = cfg.protocol;
  spec.gamma = cfg.gamma;
  spec.initial = {cfg.initial, cfg.t0};
  spec.observables = cfg.observables;
  spec.horizon = cfg.horizon;
  spec.integrator = cfg.integrator;
  switch (cfg.engine) {
    case EngineChoice::Auto: spec.engine = EnginePreference::Auto; break;
    case EngineChoice::Exact: spec.engine = EnginePreference::Exact; break;
    case EngineChoice::Oracle: spec.engine = EnginePreference::Oracle; break;
    case EngineChoice::Both:
      throw std::invalid_argument("scan runs one engine per point; use auto, exact or oracle");
  }
  const ScanResult result = run_scan(spec);

  std::size_t failed = 0;
  for (const ScanRow& row : result.rows) failed += row.error.empty() ? 0 : 1;
  if (failed_points) *failed_points = failed;

  MetaList meta{{"command", "scan"}, {"name", cfg.name}};
  describe(meta, cfg);
  meta.emplace_back("scan_parameter", std::string(scan_parameter_name(cfg.scan_parameter)));
  meta.emplace_back("scan_min", format_number(cfg.scan_min));
  meta.emplace_back("scan_max", format_number(cfg.scan_max));
  meta.emplace_back("scan_points", std::to_string(cfg.scan_points));
  meta.emplace_back("engine_requested", std::string(choice_name(cfg.engine)));
  describe_integrator(meta, cfg.integrator);
  meta.emplace_back("failed_points", std::to_string(failed));
  for (const ScanRow& row : result.rows) {
    if (!row.error.empty()) meta.emplace_back("error@" + format_number(row.value), row.error);
  }

  std::vector<PlotSeries> series;
  for (const auto& [s, q] : cfg.observables) {
    const std::string tag = observable_tag(s, q);
    series.push_back({"Z" + tag + "(+inf)", "Z" + tag + "_inf", "line"});
  }
  const std::string data = cfg.name + "_data.csv";
  const PlotDescription plot{cfg.name, "Asymptotic imbalances of " + cfg.name,
                             std::string(scan_parameter_name(cfg.scan_parameter)),
                             "asymptotic imbalance", series, {data}};

  std::vector<fs::path> written{dir / data, dir / (cfg.name + "_plot.json"),
                                dir / (cfg.name + "_meta.txt")};
  write_file(written[0], scan_csv(result, cfg.observables));
  write_file(written[1], plot_json(plot));
  write_file(written[2], meta_text(meta));
  return written;
}

std::string classify_report(const ClassifyInput& in) {
  std::string out;
  const auto line = [&](const std::string& s) { out += s + '\n'; };

  if (in.beta || in.V || in.Omega) {
    const double beta = in.beta.value_or(0.0);
    const double V = in.V.value_or(0.0);
    const double Omega = in.Omega.value_or(1.0);
    const SyncCondition c = classify_sync_condition(beta, V, Omega, in.tol);
    if (c.kind == ConditionKind::Neither) {
      line(beta != 0.0 ? "sync: neither CCPC nor CCPI (beta != 0)" : "sync: neither CCPC nor CCPI");
    } else {
      line(std::string(condition_name(c.kind)) + " n=" + std::to_string(c.n));
    }
    line("  2V/Omega residuals: ccpc " + format_number(c.ccpc_residual) + ", ccpi " +
         format_number(c.ccpi_residual));
  }

  if (in.upsilon && in.chi) {
    const AsyncConservingCondition c = classify_async_conserving(*in.upsilon, *in.chi, in.tol);
    if (c.kind == ConditionKind::Neither) {
      line("neither CCPC nor CCPI (async, spin-conserving)");
    } else {
      line(std::string(condition_name(c.kind)) + " (async, spin-conserving)");
    }
    line("  sin(pi upsilon/chi) = " + format_number(c.sin_value) + ", cos(pi upsilon/chi) = " +
         format_number(c.cos_value));
  }

  if (in.epsilon && in.upsilon && in.chi) {
    const double r = check_flip_constraint(*in.epsilon, *in.upsilon, *in.chi);
    const bool ok = std::abs(r) <= kFlipConstraintTol;
    line(std::string("flip-constraint ") + (ok ? "satisfied" : "violated") + ", residual " +
         format_number(r));
  }

  if (in.gamma) {
    const SOCoupling g(*in.gamma);
    std::string branch = "mixed (spin-conserving and spin-flipping)";
    if (g.spin_conserving()) branch = "spin-conserving only";
    else if (g.spin_flipping()) branch = "spin-flipping only";
    line("gamma " + format_number(*in.gamma) + ": " + branch);
  }

  if (out.empty()) {
    line("nothing to classify: pass --beta/--V/--Omega, --upsilon/--chi[/--epsilon] or --gamma");
  }
  return out;
}

}  // namespace sodw::cli
