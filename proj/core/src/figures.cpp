#include "sodw/figures.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace sodw {

EngineChoice parse_engine_choice(std::string_view s) {
  if (s == "auto") return EngineChoice::Auto;
  if (s == "exact") return EngineChoice::Exact;
  if (s == "oracle") return EngineChoice::Oracle;
  if (s == "both") return EngineChoice::Both;
  throw std::invalid_argument("unknown engine '" + std::string(s) +
                              "' (auto, exact, oracle, both)");
}

TrajectoryRun run_trajectory(const SOCoupling& gamma, const ModulationProtocol& protocol,
                             const InitialCondition& ic, std::span<const double> grid,
                             EngineChoice choice, double horizon,
                             const IntegratorConfig& integrator) {
  const BranchDecision d = select_exact_engine(gamma, protocol);
  const bool want_exact = choice == EngineChoice::Exact || choice == EngineChoice::Both ||
                          (choice == EngineChoice::Auto && d.exact.has_value());
  const bool want_numeric = choice == EngineChoice::Oracle || choice == EngineChoice::Both ||
                            (choice == EngineChoice::Auto && !d.exact.has_value());

  TrajectoryRun run;
  run.initial = ic;
  if (want_exact) {
    const AnalyticEvaluator eval = exact_evaluator(gamma, protocol, ic, horizon);
    run.primary = *d.exact;
    run.exact = sample_trajectory(eval, grid, protocol, std::string(engine_name(*d.exact)));
  }
  if (want_numeric) {
    run.numeric = oracle_trajectory(gamma, protocol, ic, horizon, grid, integrator);
    if (!run.exact) run.primary = Engine::Oracle;
  }
  if (run.exact && run.numeric) {
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      worst = std::max(worst, distance(run.exact->states[k], run.numeric->states[k]));
    }
    run.max_deviation = worst;
  }
  return run;
}

namespace {

constexpr double pi = std::numbers::pi;
const double ninf = -std::numeric_limits<double>::infinity();

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void describe_protocol(FigureDataset& fig) {
  fig.meta.emplace_back("gamma", num(fig.gamma.gamma()));
  if (const auto* s = std::get_if<SyncSech2>(&fig.protocol)) {
    fig.meta.emplace_back("protocol", "sync");
    fig.meta.emplace_back("beta", num(s->beta));
    fig.meta.emplace_back("V", num(s->V));
    fig.meta.emplace_back("Omega", num(s->Omega));
  } else if (const auto* a = std::get_if<AsyncTanhSech>(&fig.protocol)) {
    fig.meta.emplace_back("protocol", "async");
    fig.meta.emplace_back("epsilon", num(a->epsilon));
    fig.meta.emplace_back("upsilon", num(a->upsilon));
    fig.meta.emplace_back("chi", num(a->chi));
  }
}

void describe_integrator(FigureDataset& fig, const IntegratorConfig& cfg) {
  fig.meta.emplace_back("rel_tol", num(cfg.rel_tol));
  fig.meta.emplace_back("abs_tol", num(cfg.abs_tol));
  fig.meta.emplace_back("normalization_tol", num(kNormalizedTol));
  fig.meta.emplace_back("branch_tol", num(kBranchTol));
}

double horizon_for(const FigureOptions& opt, const ModulationProtocol& protocol) {
  return opt.horizon > 0.0 ? opt.horizon : default_horizon(protocol);
}

// Trajectory figure with every initial condition run by both engines.
FigureDataset trajectory_figure(std::string id, std::string title, std::string y_label,
                                std::vector<PlotSeries> series, double gamma,
                                ModulationProtocol protocol,
                                const std::vector<AmplitudeVector>& states, double t0,
                                const FigureOptions& opt) {
  FigureDataset fig;
  fig.id = std::move(id);
  fig.kind = FigureKind::Trajectory;
  fig.title = std::move(title);
  fig.x_label = "t";
  fig.y_label = std::move(y_label);
  fig.series = std::move(series);
  fig.gamma = SOCoupling(gamma);
  fig.protocol = std::move(protocol);
  fig.horizon = horizon_for(opt, fig.protocol);

  const double t_lo = std::isinf(t0) ? -fig.horizon : t0;
  const std::vector<double> grid = uniform_grid(t_lo, fig.horizon, opt.samples);
  for (std::size_t i = 0; i < states.size(); ++i) {
    TrajectoryRun run = run_trajectory(fig.gamma, fig.protocol, {states[i], t0}, grid,
                                       EngineChoice::Both, fig.horizon, opt.integrator);
    run.label = states.size() == 1 ? std::string() : "ic" + std::to_string(i + 1);
    fig.trajectories.push_back(std::move(run));
  }

  fig.meta.emplace_back("figure", fig.id);
  fig.meta.emplace_back("kind", "trajectory");
  describe_protocol(fig);
  fig.meta.emplace_back("epoch", std::isinf(t0) ? "-inf" : num(t0));
  fig.meta.emplace_back("T", num(fig.horizon));
  fig.meta.emplace_back("samples", std::to_string(opt.samples));
  describe_integrator(fig, opt.integrator);
  for (std::size_t i = 0; i < fig.trajectories.size(); ++i) {
    const auto& run = fig.trajectories[i];
    const std::string prefix = run.label.empty() ? std::string() : run.label + ".";
    for (std::size_t m = 0; m < 4; ++m) {
      const cplx a = run.initial.state[m];
      fig.meta.emplace_back(prefix + "a" + std::to_string(m + 1), num(a.real()) + "," + num(a.imag()));
    }
    fig.meta.emplace_back(prefix + "engine", std::string(engine_name(run.primary)));
    fig.meta.emplace_back(prefix + "oracle", run.numeric->solver_id);
    fig.meta.emplace_back(prefix + "max_deviation", num(run.max_deviation));
  }
  return fig;
}

FigureDataset scan_figure(std::string id, std::string title, std::string x_label,
                          ScanParameter param, double lo, double hi, double gamma,
                          ModulationProtocol protocol, const FigureOptions& opt) {
  FigureDataset fig;
  fig.id = std::move(id);
  fig.kind = FigureKind::Scan;
  fig.title = std::move(title);
  fig.x_label = std::move(x_label);
  fig.y_label = "asymptotic imbalance";
  fig.series = {{"Z31(+inf)", "Z31_inf", "line"}, {"Z32(+inf)", "Z32_inf", "line"}};
  fig.gamma = SOCoupling(gamma);
  fig.protocol = protocol;
  fig.horizon = horizon_for(opt, protocol);

  ScanSpec& spec = fig.scan_spec;
  spec.parameter = param;
  spec.grid = uniform_grid(lo, hi, opt.scan_points);
  spec.protocol = protocol;
  spec.gamma = gamma;
  spec.initial = {AmplitudeVector::basis(3), 0.0};
  spec.observables = {{Level::P3, Level::P1}, {Level::P3, Level::P2}};
  spec.horizon = opt.horizon;
  spec.integrator = opt.integrator;
  fig.scan = run_scan(spec);

  fig.meta.emplace_back("figure", fig.id);
  fig.meta.emplace_back("kind", "scan");
  fig.meta.emplace_back("scan_parameter", std::string(scan_parameter_name(param)));
  fig.meta.emplace_back("scan_min", num(lo));
  fig.meta.emplace_back("scan_max", num(hi));
  fig.meta.emplace_back("scan_points", std::to_string(opt.scan_points));
  describe_protocol(fig);
  fig.meta.emplace_back("epoch", "0");
  fig.meta.emplace_back("a3", "1,0");
  describe_integrator(fig, opt.integrator);
  return fig;
}

FigureDataset surface_figure(const FigureOptions& opt) {
  FigureDataset fig;
  fig.id = "3c";
  fig.kind = FigureKind::Surface;
  fig.title = "Spin-flip constraint surface upsilon(chi, epsilon)";
  fig.x_label = "chi";
  fig.y_label = "epsilon";
  fig.series = {{"upsilon", "upsilon", "surface"}};
  const std::size_t n = std::max<std::size_t>(2, opt.scan_points / 5);
  const auto axis = uniform_grid(0.0, 2.0, n);
  for (double chi : axis) {
    for (double eps : axis) {
      fig.surface.push_back({chi, eps, std::sqrt(0.25 * chi * chi + eps * eps)});
    }
  }
  fig.meta.emplace_back("figure", "3c");
  fig.meta.emplace_back("kind", "surface");
  fig.meta.emplace_back("chi_range", "0,2");
  fig.meta.emplace_back("epsilon_range", "0,2");
  fig.meta.emplace_back("points_per_axis", std::to_string(n));
  return fig;
}

std::vector<PlotSeries> z3x_series() {
  return {{"Z31 exact", "Z31", "markers"}, {"Z31 numeric", "Z31_num", "line"},
          {"Z32 exact", "Z32", "markers"}, {"Z32 numeric", "Z32_num", "line"}};
}

std::vector<PlotSeries> p_series() {
  std::vector<PlotSeries> out;
  for (int m = 1; m <= 4; ++m) {
    const std::string p = "P" + std::to_string(m);
    out.push_back({p + " exact", p, "markers"});
    out.push_back({p + " numeric", p + "_num", "line"});
  }
  return out;
}

}  // namespace

AmplitudeVector caption_state_2a() {
  return {std::sqrt(0.1), std::sqrt(0.2), std::sqrt(0.3), std::sqrt(0.4)};
}

std::vector<AmplitudeVector> caption_states_2b() {
  const double r18 = std::sqrt(1.0 / 8.0);
  return {
      {0.0, 0.0, std::sqrt(3.0 / 8.0), std::sqrt(5.0 / 8.0)},
      {r18, r18, 0.5, std::sqrt(0.5)},
      {0.5, 0.5, r18, std::sqrt(3.0 / 8.0)},
      {0.5, std::sqrt(0.5), r18, r18},
      {std::sqrt(3.0 / 8.0), std::sqrt(5.0 / 8.0), 0.0, 0.0},
  };
}

std::vector<AmplitudeVector> caption_states_3ab() {
  const double h = std::sqrt(3.0) / 2.0;
  const double r = 1.0 / std::numbers::sqrt2;
  return {{0.0, 0.0, 1.0, 0.0}, {0.5, 0.0, h, 0.0}, {r, 0.0, r, 0.0},
          {h, 0.0, 0.5, 0.0},   {1.0, 0.0, 0.0, 0.0}};
}

std::vector<AmplitudeVector> caption_states_3d() {
  const double h = std::sqrt(3.0) / 2.0;
  const double r = 1.0 / std::numbers::sqrt2;
  return {{0.0, 0.0, 0.0, 1.0}, {0.5, 0.0, 0.0, h}, {r, 0.0, 0.0, r},
          {h, 0.0, 0.0, 0.5},   {1.0, 0.0, 0.0, 0.0}};
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"1a", "1b", "1c", "1d", "1e", "1f", "2a",
                                            "2b", "2c", "3a", "3b", "3c", "3d"};
  return ids;
}

FigureDataset build_figure(std::string_view id, const FigureOptions& opt) {
  const AmplitudeVector up_left = AmplitudeVector::basis(3);
  if (id == "1a") {
    return scan_figure("1a", "Asymptotic imbalances vs beta", "beta", ScanParameter::Beta, 0.0,
                       10.0, 0.5, SyncSech2{0.0, pi / 2, 1.0}, opt);
  }
  if (id == "1b") {
    return scan_figure("1b", "Asymptotic imbalances vs V/Omega", "V/Omega",
                       ScanParameter::VOverOmega, 0.0, 10.0, 1.0, SyncSech2{0.0, 0.0, 1.0}, opt);
  }
  if (id == "1c") {
    return scan_figure("1c", "Asymptotic imbalances vs gamma", "gamma", ScanParameter::Gamma,
                       0.0, 2.0, 0.0, SyncSech2{0.0, pi / 2, 1.0}, opt);
  }
  if (id == "1d") {
    return trajectory_figure("1d", "APT with spin flipping", "Z", z3x_series(), 0.5,
                             SyncSech2{0.5, pi / 2, 1.0}, {up_left}, 0.0, opt);
  }
  if (id == "1e") {
    return trajectory_figure("1e", "APT without spin flipping", "Z", z3x_series(), 1.0,
                             SyncSech2{0.0, 2.0, 1.0}, {up_left}, 0.0, opt);
  }
  if (id == "1f") {
    return trajectory_figure("1f", "APT with and without spin flipping", "Z", z3x_series(),
                             0.35, SyncSech2{0.0, pi / 2, 1.0}, {up_left}, 0.0, opt);
  }
  if (id == "2a") {
    return trajectory_figure("2a", "CCPC under synchronous driving", "P", p_series(), 0.15,
                             SyncSech2{0.0, pi / 2, 1.0}, {caption_state_2a()}, ninf, opt);
  }
  if (id == "2b") {
    return trajectory_figure("2b", "CCPI between wells", "Z_LR",
                             {{"ZLR exact", "ZLR", "markers"}, {"ZLR numeric", "ZLR_num", "line"}},
                             0.15, SyncSech2{0.0, pi / 4, 1.0}, caption_states_2b(), ninf, opt);
  }
  if (id == "2c") {
    return trajectory_figure("2c", "Equal-probability spin-flip and spin-conserving tunneling",
                             "P", p_series(), 0.25, SyncSech2{0.0, pi / 4, 1.0}, {up_left},
                             ninf, opt);
  }
  if (id == "3a" || id == "3b") {
    const double chi = id == "3a" ? 1.0 : 2.0;
    return trajectory_figure(std::string(id),
                             id == "3a" ? "CCPC without spin flipping"
                                        : "CCPI without spin flipping",
                             "Z31",
                             {{"Z31 exact", "Z31", "markers"}, {"Z31 numeric", "Z31_num", "line"}},
                             2.0, AsyncTanhSech{1.0, 1.0, chi}, caption_states_3ab(), ninf, opt);
  }
  if (id == "3c") return surface_figure(opt);
  if (id == "3d") {
    return trajectory_figure("3d", "CCPI with spin flipping", "Z41",
                             {{"Z41 exact", "P4-P1", "markers"},
                              {"Z41 numeric", "P4_num-P1_num", "line"}},
                             0.5, AsyncTanhSech{std::sqrt(0.21), 0.5, 0.4}, caption_states_3d(),
                             ninf, opt);
  }
  throw std::invalid_argument("unknown figure id '" + std::string(id) + "'");
}

}  // namespace sodw
