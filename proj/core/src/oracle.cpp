#include "sodw/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sodw {

IntegrationError::IntegrationError(const std::string& what, double last_good_time)
    : std::runtime_error(what), last_good_time_(last_good_time) {}

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) {
    throw std::invalid_argument("integrator tolerances must be > 0");
  }
  if (!(cfg.t_end > cfg.t_start)) {
    throw std::invalid_argument("integrator needs t_end > t_start");
  }
  if (!(cfg.max_step > 0.0)) throw std::invalid_argument("max_step must be > 0");
  if (cfg.method == IntegratorMethod::ClassicalRK4 && !std::isfinite(cfg.max_step)) {
    throw std::invalid_argument("fixed-step RK4 needs a finite max_step");
  }
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

class Rhs {
 public:
  Rhs(const SOCoupling& gamma, const ModulationProtocol& protocol)
      : gamma_(gamma), protocol_(protocol) {}

  Vector4c operator()(double t, const Vector4c& y) const {
    const Matrix4c H =
        hamiltonian_matrix(gamma_, upsilon_at(protocol_, t), epsilon_at(protocol_, t));
    return cplx(0.0, -1.0) * (H * y);
  }

 private:
  const SOCoupling& gamma_;
  const ModulationProtocol& protocol_;
};

bool finite(const Vector4c& y) {
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(y(i).real()) || !std::isfinite(y(i).imag())) return false;
  }
  return true;
}

class Stepper {
 public:
  Stepper(const SOCoupling& gamma, const ModulationProtocol& protocol,
          const IntegratorConfig& cfg)
      : f_(gamma, protocol), cfg_(cfg) {}

  // Moves (t, y) to exactly t_target.
  void advance(double& t, Vector4c& y, double t_target) {
    if (t == t_target) return;
    if (cfg_.method == IntegratorMethod::ClassicalRK4) {
      advance_rk4(t, y, t_target);
    } else {
      advance_dopri(t, y, t_target);
    }
  }

 private:
  void advance_rk4(double& t, Vector4c& y, double t_target) {
    const double span = t_target - t;
    const auto n = static_cast<std::size_t>(std::ceil(std::abs(span) / cfg_.max_step));
    const double h = span / static_cast<double>(n);
    const double t0 = t;
    for (std::size_t i = 0; i < n; ++i) {
      const double ti = t0 + static_cast<double>(i) * h;
      const Vector4c k1 = f_(ti, y);
      const Vector4c k2 = f_(ti + 0.5 * h, y + 0.5 * h * k1);
      const Vector4c k3 = f_(ti + 0.5 * h, y + 0.5 * h * k2);
      const Vector4c k4 = f_(ti + h, y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!finite(y)) throw IntegrationError("non-finite state in RK4 step", ti);
    }
    t = t_target;
  }

  double error_norm(const Vector4c& y, const Vector4c& y_new, const Vector4c& err) const {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double sc =
          cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
      acc += std::norm(err(i)) / (sc * sc);
    }
    return std::sqrt(acc / 4.0);
  }

  void advance_dopri(double& t, Vector4c& y, double t_target) {
    const double dir = t_target > t ? 1.0 : -1.0;
    if (h_ == 0.0 || (h_ > 0.0) != (dir > 0.0)) {
      h_ = dir * std::min(cfg_.max_step, std::max(1e-3, 1e-3 * std::abs(t_target - t)));
      k1_valid_ = false;
    }
    if (!k1_valid_ || k1_t_ != t) {
      k1_ = f_(t, y);
      k1_t_ = t;
      k1_valid_ = true;
    }

    while (t != t_target) {
      if (++steps_ > cfg_.max_steps) {
        throw IntegrationError("step budget exhausted", t);
      }
      double h = dir * std::min(std::abs(h_), cfg_.max_step);
      bool clamped = false;
      if (dir * (t + h - t_target) >= 0.0) {
        h = t_target - t;
        clamped = true;
      }
      const double h_min = 1e-13 * std::max(1.0, std::abs(t));
      if (std::abs(h) < h_min && !clamped) {
        std::ostringstream os;
        os << "step size underflow (h = " << h << ") at t = " << t;
        throw IntegrationError(os.str(), t);
      }

      const Vector4c& k1 = k1_;
      const Vector4c k2 = f_(t + c2 * h, y + h * (a21 * k1));
      const Vector4c k3 = f_(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
      const Vector4c k4 = f_(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const Vector4c k5 =
          f_(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Vector4c k6 =
          f_(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const Vector4c y_new =
          y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const double t_new = clamped ? t_target : t + h;
      const Vector4c k7 = f_(t_new, y_new);
      const Vector4c err =
          h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const double en = error_norm(y, y_new, err);
      if (!std::isfinite(en)) throw IntegrationError("non-finite error estimate", t);

      if (en <= 1.0) {
        if (!finite(y_new)) throw IntegrationError("non-finite state", t);
        t = t_new;
        y = y_new;
        k1_ = k7;
        k1_t_ = t;
        const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        // A clamped step says nothing about the controller's preferred size.
        if (!clamped || factor < 1.0) h_ = h * factor;
      } else {
        h_ = h * std::max(0.2, 0.9 * std::pow(en, -0.2));
        if (std::abs(h_) < h_min) {
          std::ostringstream os;
          os << "step size underflow after rejection at t = " << t;
          throw IntegrationError(os.str(), t);
        }
      }
    }
  }

  Rhs f_;
  const IntegratorConfig& cfg_;
  double h_ = 0.0;
  Vector4c k1_ = Vector4c::Zero();
  double k1_t_ = 0.0;
  bool k1_valid_ = false;
  std::size_t steps_ = 0;
};

std::string solver_id(const IntegratorConfig& cfg) {
  std::ostringstream os;
  os.precision(3);
  if (cfg.method == IntegratorMethod::ClassicalRK4) {
    os << "rk4(h<=" << cfg.max_step << ")";
  } else {
    os << "dopri54(rtol=" << cfg.rel_tol << ",atol=" << cfg.abs_tol << ")";
  }
  return os.str();
}

}  // namespace

TrajectoryRecord integrate(const SOCoupling& gamma, const ModulationProtocol& protocol,
                           const AmplitudeVector& state0, const IntegratorConfig& cfg,
                           std::span<const double> sample_grid) {
  validate(cfg);
  validate(protocol);
  if (!state0.is_normalized()) {
    throw std::invalid_argument("initial state must be normalized");
  }
  for (std::size_t i = 0; i < sample_grid.size(); ++i) {
    const double g = sample_grid[i];
    if (!(g >= cfg.t_start && g <= cfg.t_end)) {
      throw std::invalid_argument("sample time outside [t_start, t_end]");
    }
    if (i > 0 && !(g > sample_grid[i - 1])) {
      throw std::invalid_argument("sample grid must be strictly increasing");
    }
  }

  TrajectoryRecord rec;
  rec.protocol = protocol;
  rec.solver_id = solver_id(cfg);
  rec.times.assign(sample_grid.begin(), sample_grid.end());
  rec.states.reserve(sample_grid.size());
  rec.snapshots.reserve(sample_grid.size());

  const double n0 = state0.norm2();
  Stepper stepper(gamma, protocol, cfg);
  double t = cfg.t_start;
  Vector4c y = state0.to_eigen();
  for (const double g : sample_grid) {
    stepper.advance(t, y, g);
    AmplitudeVector a(y);
    rec.snapshots.push_back(populations(a, g));
    rec.norm_drift_max = std::max(rec.norm_drift_max, std::abs(rec.snapshots.back().norm2 - n0));
    rec.states.push_back(a);
  }
  return rec;
}

AmplitudeVector propagate(const SOCoupling& gamma, const ModulationProtocol& protocol,
                          const AmplitudeVector& state, double t_from, double t_to,
                          const IntegratorConfig& cfg) {
  validate(protocol);
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || !(cfg.max_step > 0.0)) {
    throw std::invalid_argument("invalid integrator configuration");
  }
  if (!std::isfinite(t_from) || !std::isfinite(t_to)) {
    throw std::invalid_argument("propagation endpoints must be finite");
  }
  Stepper stepper(gamma, protocol, cfg);
  double t = t_from;
  Vector4c y = state.to_eigen();
  stepper.advance(t, y, t_to);
  return AmplitudeVector(y);
}

double compare_to_analytic(const TrajectoryRecord& traj, const AnalyticEvaluator& analytic,
                           PhaseMode mode) {
  if (traj.times.empty()) return 0.0;
  cplx phase = 1.0;
  if (mode == PhaseMode::GlobalPhaseInvariant) {
    const Vector4c ref = analytic(traj.times.front()).to_eigen();
    const cplx overlap = ref.dot(traj.states.front().to_eigen());  // <ref|num>
    if (std::abs(overlap) > 0.0) phase = overlap / std::abs(overlap);
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Vector4c a = phase * analytic(traj.times[k]).to_eigen();
    worst = std::max(worst, distance(traj.states[k], AmplitudeVector(a)));
  }
  return worst;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
  if (n == 0) throw std::invalid_argument("a sample grid needs at least one point");
  if (n == 1) return {t0};
  std::vector<double> g(n);
  const double span = t1 - t0;
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = t0 + span * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  g.back() = t1;
  return g;
}

}  // namespace sodw
