#include "sodw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace sodw {

std::string_view engine_name(Engine engine) {
  switch (engine) {
    case Engine::SyncExact: return "sync-exact";
    case Engine::AsyncExact: return "async-exact";
    case Engine::Oracle: return "oracle";
  }
  return "?";
}

BranchDecision select_exact_engine(const SOCoupling& gamma, const ModulationProtocol& protocol) {
  BranchDecision d;
  if (std::holds_alternative<SyncSech2>(protocol)) {
    d.exact = Engine::SyncExact;
    return d;
  }
  if (const auto* p = std::get_if<AsyncTanhSech>(&protocol)) {
    if (gamma.spin_conserving()) {
      d.exact = Engine::AsyncExact;
    } else if (gamma.spin_flipping()) {
      const double r = check_flip_constraint(p->epsilon, p->upsilon, p->chi);
      if (std::abs(r) <= kFlipConstraintTol) {
        d.exact = Engine::AsyncExact;
      } else {
        std::ostringstream os;
        os.precision(17);
        os << "spin-flip branch off the constraint surface chi^2/4 + epsilon^2 - upsilon^2 = 0"
           << " (residual " << r << ")";
        d.reason = os.str();
      }
    } else {
      std::ostringstream os;
      os << "gamma = " << gamma.gamma()
         << " is on neither exact async branch (needs sin(pi gamma) = 0 or cos(pi gamma) = 0)";
      d.reason = os.str();
    }
    return d;
  }
  d.reason = "custom drives have no exact solution";
  return d;
}

double default_horizon(const ModulationProtocol& protocol) {
  double rate = 1.0;
  if (const auto* s = std::get_if<SyncSech2>(&protocol)) rate = std::min(rate, s->Omega);
  if (const auto* a = std::get_if<AsyncTanhSech>(&protocol)) rate = std::min(rate, a->chi);
  return 25.0 / rate;
}

namespace {

double start_time(const InitialCondition& ic, double horizon) {
  if (std::isinf(ic.t0) && ic.t0 < 0.0) return -horizon;
  if (!std::isfinite(ic.t0)) throw std::invalid_argument("initial time must be finite or -inf");
  return ic.t0;
}

}  // namespace

AnalyticEvaluator exact_evaluator(const SOCoupling& gamma, const ModulationProtocol& protocol,
                                  const InitialCondition& ic, double horizon) {
  const BranchDecision d = select_exact_engine(gamma, protocol);
  if (!d.exact) {
    if (const auto* p = std::get_if<AsyncTanhSech>(&protocol); p && gamma.spin_flipping()) {
      throw FlipConstraintError(check_flip_constraint(p->epsilon, p->upsilon, p->chi));
    }
    throw std::invalid_argument("no exact engine: " + d.reason);
  }
  if (*d.exact == Engine::SyncExact) {
    SyncSolution sol(std::get<SyncSech2>(protocol), gamma, ic.state, ic.t0);
    return [sol](double t) { return sol.at(t); };
  }
  AsyncSolution sol(std::get<AsyncTanhSech>(protocol), gamma, ic.state,
                    start_time(ic, horizon));
  return [sol](double t) { return sol.at(t); };
}

TrajectoryRecord oracle_trajectory(const SOCoupling& gamma, const ModulationProtocol& protocol,
                                   const InitialCondition& ic, double horizon,
                                   std::span<const double> grid, const IntegratorConfig& base) {
  if (grid.empty()) throw std::invalid_argument("empty sample grid");
  const double t0 = start_time(ic, horizon);
  AmplitudeVector start = ic.state;
  double t_start = t0;
  if (grid.front() < t0) {
    // Samples before the preparation time: carry the state back first.
    start = propagate(gamma, protocol, ic.state, t0, grid.front(), base);
    t_start = grid.front();
  }
  IntegratorConfig cfg = base;
  cfg.t_start = t_start;
  cfg.t_end = std::max(grid.back(), t_start + 1.0);
  return integrate(gamma, protocol, start, cfg, grid);
}

ScanParameter parse_scan_parameter(std::string_view s) {
  if (s == "beta") return ScanParameter::Beta;
  if (s == "V_over_Omega") return ScanParameter::VOverOmega;
  if (s == "gamma") return ScanParameter::Gamma;
  if (s == "upsilon_over_chi") return ScanParameter::UpsilonOverChi;
  throw std::invalid_argument("unknown scan parameter '" + std::string(s) +
                              "' (beta, V_over_Omega, gamma, upsilon_over_chi)");
}

std::string_view scan_parameter_name(ScanParameter p) {
  switch (p) {
    case ScanParameter::Beta: return "beta";
    case ScanParameter::VOverOmega: return "V_over_Omega";
    case ScanParameter::Gamma: return "gamma";
    case ScanParameter::UpsilonOverChi: return "upsilon_over_chi";
  }
  return "?";
}

void validate(const ScanSpec& spec) {
  if (spec.grid.empty()) throw std::invalid_argument("scan grid is empty");
  bool inc = true;
  bool dec = true;
  for (std::size_t i = 1; i < spec.grid.size(); ++i) {
    inc = inc && spec.grid[i] > spec.grid[i - 1];
    dec = dec && spec.grid[i] < spec.grid[i - 1];
  }
  if (!inc && !dec) throw std::invalid_argument("scan grid must be strictly monotone");
  const bool sync = std::holds_alternative<SyncSech2>(spec.protocol);
  const bool async = std::holds_alternative<AsyncTanhSech>(spec.protocol);
  if ((spec.parameter == ScanParameter::Beta || spec.parameter == ScanParameter::VOverOmega) &&
      !sync) {
    throw std::invalid_argument("beta and V_over_Omega scans need a synchronous protocol");
  }
  if (spec.parameter == ScanParameter::UpsilonOverChi && !async) {
    throw std::invalid_argument("upsilon_over_chi scans need an asynchronous protocol");
  }
  validate(spec.protocol);
  if (spec.observables.empty()) throw std::invalid_argument("scan needs at least one observable");
  for (const auto& [s, q] : spec.observables) {
    if (s == q) throw std::invalid_argument("imbalance observable needs s != q");
  }
  if (!spec.initial.state.is_normalized()) {
    throw std::invalid_argument("scan initial state must be normalized");
  }
}

namespace {

ScanRow scan_point(const ScanSpec& spec, double x) {
  ScanRow row;
  row.value = x;
  try {
    ModulationProtocol protocol = spec.protocol;
    double gamma_value = spec.gamma;
    switch (spec.parameter) {
      case ScanParameter::Beta: std::get<SyncSech2>(protocol).beta = x; break;
      case ScanParameter::VOverOmega: {
        auto& p = std::get<SyncSech2>(protocol);
        p.V = x * p.Omega;
        break;
      }
      case ScanParameter::Gamma: gamma_value = x; break;
      case ScanParameter::UpsilonOverChi: {
        auto& p = std::get<AsyncTanhSech>(protocol);
        p.upsilon = x * p.chi;
        break;
      }
    }
    const SOCoupling gamma(gamma_value);
    const double horizon = spec.horizon > 0.0 ? spec.horizon : default_horizon(protocol);
    const BranchDecision d = select_exact_engine(gamma, protocol);

    Engine engine = Engine::Oracle;
    if (spec.engine == EnginePreference::Exact) {
      if (!d.exact) throw std::invalid_argument("exact engine unavailable: " + d.reason);
      engine = *d.exact;
    } else if (spec.engine == EnginePreference::Auto && d.exact) {
      engine = *d.exact;
    }
    row.engine = engine;

    PopulationSnapshot final_snap;
    if (engine == Engine::SyncExact) {
      const SyncSolution sol(std::get<SyncSech2>(protocol), gamma, spec.initial.state,
                             spec.initial.t0);
      const double inf = std::numeric_limits<double>::infinity();
      final_snap = populations(sol.at(inf), inf);
    } else if (engine == Engine::AsyncExact) {
      const auto eval = exact_evaluator(gamma, protocol, spec.initial, horizon);
      final_snap = populations(eval(horizon), horizon);
    } else {
      const std::vector<double> grid{horizon};
      const auto traj =
          oracle_trajectory(gamma, protocol, spec.initial, horizon, grid, spec.integrator);
      final_snap = traj.snapshots.back();
    }
    for (const auto& [s, q] : spec.observables) {
      row.imbalances.push_back(imbalance(final_snap, s, q));
    }
  } catch (const std::exception& e) {
    row.error = e.what();
    row.imbalances.assign(spec.observables.size(), std::numeric_limits<double>::quiet_NaN());
  }
  return row;
}

}  // namespace

ScanResult run_scan(const ScanSpec& spec) {
  validate(spec);
  ScanResult out;
  out.rows.resize(spec.grid.size());
  const std::size_t n = spec.grid.size();
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) out.rows[i] = scan_point(spec, spec.grid[i]);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

namespace {

void check_series(std::span<const double> t, std::span<const double> values, double t_lo,
                  double t_hi) {
  if (t.size() != values.size()) throw std::invalid_argument("series length mismatch");
  if (t.empty()) throw std::invalid_argument("empty series");
  if (!(t_lo < t_hi)) throw std::invalid_argument("peak window needs t_lo < t_hi");
  if (t_lo < t.front() || t_hi > t.back()) {
    throw std::invalid_argument("peak window lies outside the series domain");
  }
}

int count_peaks_unchecked(std::span<const double> t, std::span<const double> v, double t_lo,
                          double t_hi, double prominence) {
  const auto lo = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), t_lo) - t.begin());
  const auto hi_it = std::upper_bound(t.begin(), t.end(), t_hi);
  if (hi_it == t.begin()) return 0;
  const auto hi = static_cast<std::size_t>(hi_it - t.begin()) - 1;
  if (hi < lo + 2) return 0;

  int count = 0;
  std::size_t i = lo + 1;
  while (i < hi) {
    if (v[i - 1] < v[i]) {
      std::size_t j = i;
      while (j + 1 <= hi && v[j + 1] == v[i]) ++j;
      if (j + 1 <= hi && v[j + 1] < v[i]) {
        const std::size_t peak = (i + j) / 2;
        const double top = v[peak];
        double left_min = top;
        for (std::size_t k = peak; k-- > lo;) {
          if (v[k] > top) break;
          left_min = std::min(left_min, v[k]);
        }
        double right_min = top;
        for (std::size_t k = peak + 1; k <= hi; ++k) {
          if (v[k] > top) break;
          right_min = std::min(right_min, v[k]);
        }
        if (top - std::max(left_min, right_min) > prominence) ++count;
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  return count;
}

}  // namespace

int count_peaks(std::span<const double> t, std::span<const double> values, double t_lo,
                double t_hi, double prominence) {
  check_series(t, values, t_lo, t_hi);
  if (!(prominence > 0.0)) throw std::invalid_argument("prominence must be > 0");
  return count_peaks_unchecked(t, values, t_lo, t_hi, prominence);
}

int count_extrema(std::span<const double> t, std::span<const double> values, double t_lo,
                  double t_hi, double prominence) {
  check_series(t, values, t_lo, t_hi);
  if (!(prominence > 0.0)) throw std::invalid_argument("prominence must be > 0");
  std::vector<double> negated(values.begin(), values.end());
  for (double& x : negated) x = -x;
  return count_peaks_unchecked(t, values, t_lo, t_hi, prominence) +
         count_peaks_unchecked(t, negated, t_lo, t_hi, prominence);
}

AsymptoticPair asymptotic_extract(const TrajectoryRecord& traj) {
  if (traj.snapshots.empty()) throw std::invalid_argument("empty trajectory");
  AsymptoticPair out;
  out.minus = traj.snapshots.front();
  out.plus = traj.snapshots.back();
  const double t0 = traj.times.front();
  const double t1 = traj.times.back();
  const double cut = t1 - 0.1 * (t1 - t0);
  std::array<double, 4> lo{1e300, 1e300, 1e300, 1e300};
  std::array<double, 4> hi{-1e300, -1e300, -1e300, -1e300};
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    if (traj.times[k] < cut) continue;
    for (std::size_t m = 0; m < 4; ++m) {
      lo[m] = std::min(lo[m], traj.snapshots[k].P[m]);
      hi[m] = std::max(hi[m], traj.snapshots[k].P[m]);
    }
  }
  out.settled = true;
  for (std::size_t m = 0; m < 4; ++m) out.settled = out.settled && (hi[m] - lo[m] < 1e-7);
  return out;
}

TrajectoryRecord sample_trajectory(const AnalyticEvaluator& eval, std::span<const double> grid,
                                   const ModulationProtocol& protocol, std::string solver_id) {
  TrajectoryRecord rec;
  rec.protocol = protocol;
  rec.solver_id = std::move(solver_id);
  rec.times.assign(grid.begin(), grid.end());
  double n0 = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const AmplitudeVector a = eval(grid[k]);
    rec.states.push_back(a);
    rec.snapshots.push_back(populations(a, grid[k]));
    if (k == 0) n0 = rec.snapshots.front().norm2;
    rec.norm_drift_max = std::max(rec.norm_drift_max, std::abs(rec.snapshots.back().norm2 - n0));
  }
  return rec;
}

}  // namespace sodw
